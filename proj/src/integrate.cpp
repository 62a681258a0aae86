#include "ptnash/dynamics.hpp"

#include "ptnash/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ptnash {

namespace {

class Rk4 {
public:
    explicit Rk4(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

    template <class Rhs>
    void step(Rhs&& rhs, double x, double h, Vector& y) {
        const double half = 0.5 * h;
        rhs(x, y, k1_);
        kernels::stage(y, half, k1_, tmp_);
        rhs(x + half, tmp_, k2_);
        kernels::stage(y, half, k2_, tmp_);
        rhs(x + half, tmp_, k3_);
        kernels::stage(y, h, k3_, tmp_);
        rhs(x + h, tmp_, k4_);
        kernels::rk4_combine(h, k1_, k2_, k3_, k4_, y);
    }

private:
    Vector k1_, k2_, k3_, k4_, tmp_;
};

bool all_finite(const Vector& y) {
    return std::isfinite(kernels::squared_norm(y));
}

class Recorder {
public:
    Recorder(RunRecord& rec, SeekerSystem& sys, double sample_dt)
        : rec_(rec), sys_(sys), sample_dt_(sample_dt) {
        const Vector tiled = [&] {
            Vector v;
            for (std::size_t i = 0; i < rec.players; ++i) {
                v.insert(v.end(), rec.reference.begin(), rec.reference.end());
            }
            return v;
        }();
        const double norm = std::sqrt(kernels::squared_norm(tiled));
        denom_ = norm > 0.0 ? norm : 1.0;
    }

    // Records if t reached the next grid time, or unconditionally if forced.
    void offer(double t, double signal_time, const Vector& y, bool force = false) {
        if (!rec_.times.empty() && t <= rec_.times.back()) return;
        if (!force && t < next_ * (1.0 - 1e-12)) return;
        record(t, signal_time, y);
        next_ = (std::floor(t / sample_dt_ + 1e-9) + 1.0) * sample_dt_;
    }

    [[nodiscard]] double last_time() const {
        return rec_.times.empty() ? -1.0 : rec_.times.back();
    }

private:
    void record(double t, double signal_time, const Vector& y) {
        const std::size_t ns = sys_.state_size();
        std::span<const double> x(y.data(), ns);
        double dist2 = 0.0;
        for (std::size_t i = 0; i < rec_.players; ++i) {
            dist2 += kernels::squared_distance(x.subspan(i * rec_.dim, rec_.dim), rec_.reference);
        }
        rec_.times.push_back(t);
        rec_.states.emplace_back(x.begin(), x.end());
        if (sys_.gain_count() > 0) {
            rec_.gains.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(ns), y.end());
        }
        rec_.rel_error.push_back(std::sqrt(dist2) / denom_);
        rec_.consensus_residual.push_back(consensus_residual(x, rec_.players));
        rec_.u_norm.push_back(sys_.control_norm(signal_time, y));
        rec_.lyapunov.push_back(0.5 * dist2);
    }

    RunRecord& rec_;
    SeekerSystem& sys_;
    double sample_dt_;
    double next_ = 0.0;
    double denom_ = 1.0;
};

struct Advance {
    bool ok = true;
    std::size_t steps = 0;
    std::string reason;
};

constexpr double kMaxSubsteps = 1e6;

std::string blowup_message(double t) {
    std::ostringstream os;
    os << "non-finite state after the step ending at t = " << t;
    return os.str();
}

}  // namespace

RunRecord integrate(const Game& game, const TopologySchedule& topology, const SeekerConfig& cfg,
                    const EstimateState& x0, const IntegrationOptions& opts) {
    if (!(opts.horizon >= 0.0) || !std::isfinite(opts.horizon)) {
        throw std::invalid_argument("integration horizon must be finite and >= 0");
    }
    if (!(opts.sample_dt > 0.0)) {
        throw std::invalid_argument("sample_dt must be positive");
    }
    if (opts.reference.size() != game.total_dim()) {
        throw DimensionError("reference profile must have length n");
    }
    if (x0.players() != game.player_count() || x0.block_dim() != game.total_dim()) {
        throw DimensionError("initial state does not match the game");
    }

    SeekerSystem sys(game, topology, cfg);
    RunRecord rec;
    rec.variant = cfg.variant;
    rec.players = game.player_count();
    rec.dim = game.total_dim();
    rec.reference = opts.reference;
    if (is_prescribed_time(cfg.variant)) rec.prescribed_time = cfg.prescribed_time;
    if (sys.gain_count() > 0) rec.edges = sys.initial_gains().edges();

    Vector y(x0.stacked().begin(), x0.stacked().end());
    if (sys.gain_count() > 0) {
        const auto g = sys.initial_gains().values();
        y.insert(y.end(), g.begin(), g.end());
    }
    if (!all_finite(y)) {
        throw std::invalid_argument("initial state is not finite");
    }

    Recorder recorder(rec, sys, opts.sample_dt);
    recorder.offer(0.0, 0.0, y, true);
    if (opts.horizon == 0.0) return rec;

    Rk4 rk(y.size());
    Vector last_good = y;
    double last_good_t = 0.0;
    double last_good_signal = 0.0;
    // One nominal step [a, b], split into equal substeps when the stiffness
    // estimate at the substep start exceeds the stability limit.
    auto advance = [&](auto&& rhs, auto&& rho, double a, double b, Vector& yy) {
        Advance out;
        double pos = a;
        while (pos < b) {
            const double remaining = b - pos;
            double h = remaining;
            if (cfg.stability_limit > 0.0) {
                const double r = rho(pos, yy);
                if (!std::isfinite(r)) {
                    out.ok = false;
                    out.reason = "non-finite stiffness estimate";
                    return out;
                }
                if (r * remaining > cfg.stability_limit) {
                    const double pieces = std::ceil(r * remaining / cfg.stability_limit);
                    if (out.steps + pieces > kMaxSubsteps) {
                        out.ok = false;
                        out.reason = "step would need more than 1e6 stability substeps";
                        return out;
                    }
                    h = remaining / pieces;
                }
            }
            const double next = remaining - h <= 1e-15 * std::max(1.0, std::abs(b)) ? b : pos + h;
            rk.step(rhs, pos, next - pos, yy);
            ++out.steps;
            if (!all_finite(yy)) {
                out.ok = false;
                return out;
            }
            pos = next;
        }
        return out;
    };

    auto abort_run = [&](double t_fail, const std::string& reason) {
        rec.aborted = true;
        rec.abort_reason = reason.empty() ? blowup_message(t_fail) : reason + " near t = " +
                                                                      std::to_string(t_fail);
        recorder.offer(last_good_t, last_good_signal, last_good, true);
    };

    // Post-T, or the whole baseline run: plain t-domain steps.
    auto t_phase = [&](double t0, double rate, auto&& rhs) {
        const double span = opts.horizon - t0;
        if (span <= 0.0) return;
        const auto steps = static_cast<std::size_t>(std::ceil(span / cfg.dt_post - 1e-9));
        for (std::size_t m = 1; m <= steps; ++m) {
            const double t_prev = t0 + static_cast<double>(m - 1) * cfg.dt_post;
            const double t_next = m == steps ? opts.horizon : t0 + static_cast<double>(m) * cfg.dt_post;
            last_good = y;
            last_good_t = t_prev;
            last_good_signal = t_prev;
            const auto taken = advance(rhs, [&](double t, const Vector& yy) {
                return sys.stiffness(rate, t, yy);
            }, t_prev, t_next, y);
            rec.t_steps += taken.steps;
            if (!taken.ok) {
                abort_run(t_next, taken.reason);
                return;
            }
            recorder.offer(t_next, t_next, y, m == steps);
        }
    };

    if (!is_prescribed_time(cfg.variant)) {
        t_phase(0.0, 1.0, [&](double t, std::span<const double> yy, std::span<double> dy) {
            sys.derivative_baseline(t, yy, dy);
        });
        return rec;
    }

    const TimeWarp tw = cfg.time_warp();
    const double T = tw.prescribed_time;
    const bool reaches_T = opts.horizon >= tw.warp(cfg.s_max);
    const double s_end = reaches_T ? cfg.s_max : std::min(cfg.s_max, tw.unwarp(opts.horizon));

    const auto s_steps = static_cast<std::size_t>(std::ceil(s_end / cfg.ds - 1e-9));
    auto rhs_s = [&](double s, std::span<const double> yy, std::span<double> dy) {
        sys.derivative_s(s, yy, dy);
    };
    for (std::size_t m = 1; m <= s_steps; ++m) {
        const double s_prev = static_cast<double>(m - 1) * cfg.ds;
        const double s_next = m == s_steps ? s_end : static_cast<double>(m) * cfg.ds;
        last_good = y;
        last_good_t = tw.warp(s_prev);
        last_good_signal = sys.signal_time_s(s_prev);
        const auto taken = advance(rhs_s, [&](double s, const Vector& yy) {
            return sys.stiffness(sys.theta(s), sys.signal_time_s(s), yy);
        }, s_prev, s_next, y);
        rec.s_steps += taken.steps;
        if (!taken.ok) {
            abort_run(tw.warp(s_next), taken.reason);
            return rec;
        }
        // The handoff sample at t = T replaces the final s-domain sample.
        if (!(reaches_T && m == s_steps)) {
            recorder.offer(tw.warp(s_next), sys.signal_time_s(s_next), y,
                           !reaches_T && m == s_steps);
        }
    }
    if (!reaches_T) return rec;

    // State is continuous across the handoff; the clock jumps from
    // warp(s_max) (within T e^{-s_max} of T) to T exactly.
    recorder.offer(T, T, y, true);
    t_phase(T, cfg.post_gain, [&](double t, std::span<const double> yy, std::span<double> dy) {
        sys.derivative_post(t, yy, dy);
    });
    return rec;
}

std::optional<double> convergence_time(const RunRecord& record, double threshold) {
    if (record.size() == 0) return std::nullopt;
    std::size_t k = record.size();
    while (k > 0 && record.rel_error[k - 1] <= threshold) --k;
    if (k == record.size()) return std::nullopt;
    return record.times[k];
}

std::size_t sample_index_at(const RunRecord& record, double t) {
    if (record.size() == 0) throw std::invalid_argument("empty run record");
    auto it = std::lower_bound(record.times.begin(), record.times.end(), t - 1e-12);
    if (it == record.times.end()) return record.size() - 1;
    return static_cast<std::size_t>(it - record.times.begin());
}

}  // namespace ptnash
