#pragma once

// Nash-equilibrium-seeking flows over the stacked estimate space.
//
// Each player i runs  x^i' = r(t) u^i  with
//   u^i = -R_i^T grad_i J_i(x^i) - sum_j w_ij a_ij (x^i - x^j),
// where w_ij is a static gain kappa or an adaptive per-edge gain kappa_ij
// driven by  kappa_ij' = r(t) gamma_ij a_ij |x^i - x^j|^2.
// The rate is r(t) = c + 1/(T - t) before the prescribed time T, c after it,
// and 1 for the exponential baseline.
//
// Before T the flow is integrated in s, with t = T (1 - e^{-s}); the singular
// rate becomes the bounded factor theta(s) = 1 + c T e^{-s} in (1, 1 + cT].

#include "ptnash/game.hpp"
#include "ptnash/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ptnash {

enum class Variant { StaticGain, Adaptive, AdaptiveSwitching, BaselineExponential };

// Time base on which a switching signal is read before T. Physical reads
// sigma(t) at t = T (1 - e^{-s}): only finitely many switches happen before T
// and the last graph stays active for all remaining s. Transformed reads
// sigma(s), so every window of s contains a full period of the signal. After
// T both read sigma(t).
enum class ScheduleClock { Physical, Transformed };

[[nodiscard]] std::string to_string(ScheduleClock c);
// Accepts "physical", "transformed".
[[nodiscard]] ScheduleClock parse_schedule_clock(const std::string& name);

[[nodiscard]] std::string to_string(Variant v);
// Accepts "static", "adaptive", "adaptive-switching", "baseline".
[[nodiscard]] Variant parse_variant(const std::string& name);
[[nodiscard]] inline bool is_prescribed_time(Variant v) {
    return v != Variant::BaselineExponential;
}
[[nodiscard]] inline bool is_adaptive(Variant v) {
    return v == Variant::Adaptive || v == Variant::AdaptiveSwitching;
}

struct TimeWarp {
    double prescribed_time = 1.0;  // T
    double post_gain = 0.0;        // c

    // t = T (1 - e^{-s})
    [[nodiscard]] double warp(double s) const;
    // dt/ds = T e^{-s}
    [[nodiscard]] double warp_slope(double s) const;
    // s = -ln(1 - t/T), t in [0, T)
    [[nodiscard]] double unwarp(double t) const;
    // 1 + c T e^{-s}
    [[nodiscard]] double theta(double s) const;
};

// Throws std::invalid_argument for s < 0.
[[nodiscard]] double warp(const TimeWarp& tw, double s);
[[nodiscard]] double theta(const TimeWarp& tw, double s);

struct EdgeValue {
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;
};

struct SeekerConfig {
    Variant variant = Variant::StaticGain;
    std::optional<double> prescribed_time;  // required by prescribed-time variants
    double post_gain = 0.0;                 // c
    double kappa = 1.0;                     // static gain
    double kappa0 = 0.5;                    // adaptive: initial gain on every edge
    double gamma = 1.0;                     // adaptive: adaptation rate on every edge
    std::vector<EdgeValue> kappa0_overrides;
    std::vector<EdgeValue> gamma_overrides;
    ScheduleClock schedule_clock = ScheduleClock::Transformed;
    double s_max = 18.0;
    double ds = 1e-3;
    double dt_post = 1e-3;
    // Steps are split so that h * rho <= stability_limit, where rho bounds the
    // stiffness of the consensus and gain coupling at the step start. 0 keeps
    // every step at its nominal size.
    double stability_limit = 1.0;

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;
    [[nodiscard]] TimeWarp time_warp() const;
};

// Per-edge symmetric gains over the union of every graph the topology can
// activate. One value per undirected edge, so kappa_ij == kappa_ji exactly.
class DynamicGains {
public:
    DynamicGains() = default;
    DynamicGains(const TopologySchedule& topology, const SeekerConfig& cfg);

    [[nodiscard]] std::size_t size() const { return edges_.size(); }
    [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
    [[nodiscard]] std::span<double> values() { return values_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::span<const double> rates() const { return gamma_; }
    // Index of edge {i, j}; throws if it is not in the union graph.
    [[nodiscard]] std::size_t index_of(std::size_t i, std::size_t j) const;
    [[nodiscard]] double value(std::size_t i, std::size_t j) const {
        return values_[index_of(i, j)];
    }

private:
    std::vector<Edge> edges_;
    std::vector<double> values_;
    std::vector<double> gamma_;
    std::size_t nodes_ = 0;
    std::vector<std::size_t> lookup_;  // nodes x nodes, npos for non-edges
};

// Binds a game, topology and configuration into the flat ODE system
// y = [stacked estimates (N n), edge gains (E)]. Gains are present only for
// adaptive variants. Holds scratch buffers: one instance per run.
class SeekerSystem {
public:
    SeekerSystem(const Game& game, const TopologySchedule& topology, const SeekerConfig& cfg);

    [[nodiscard]] std::size_t state_size() const { return state_size_; }
    [[nodiscard]] std::size_t gain_count() const { return gain_count_; }
    [[nodiscard]] std::size_t flat_size() const { return state_size_ + gain_count_; }
    [[nodiscard]] const DynamicGains& initial_gains() const { return gains0_; }
    [[nodiscard]] const SeekerConfig& config() const { return cfg_; }
    [[nodiscard]] const Game& game() const { return game_; }

    // Unscaled law with the graph active at `signal_time`: writes u (length
    // N n) and, for adaptive variants, gamma_ij a_ij |x^i - x^j|^2.
    void control(double signal_time, std::span<const double> y, std::span<double> u,
                 std::span<double> gain_rate);
    // Time at which the switching signal is read at transformed time s.
    [[nodiscard]] double signal_time_s(double s) const;
    // d y / d s before T.
    void derivative_s(double s, std::span<const double> y, std::span<double> dy);
    // d y / d t after T: c times the law.
    void derivative_post(double t, std::span<const double> y, std::span<double> dy);
    // d y / d t of the exponential baseline.
    void derivative_baseline(double t, std::span<const double> y, std::span<double> dy);
    // Upper estimate of the fast eigenvalue magnitude of d(dy)/dy for the law
    // scaled by `rate`: rate * (2 max_i sum_j w_ij a_ij + 2 max_e sqrt(2 gamma_e a_e) |x^i - x^j|).
    [[nodiscard]] double stiffness(double rate, double signal_time, std::span<const double> y) const;
    // s-domain rate theta(s).
    [[nodiscard]] double theta(double s) const { return warp_.theta(s); }
    // |u| with the graph active at `signal_time`.
    [[nodiscard]] double control_norm(double signal_time, std::span<const double> y);

private:
    struct ActiveEdge {
        std::size_t i;
        std::size_t j;
        double weight;
        std::size_t gain;  // index into the gain block
    };

    void scaled(double rate, double t, std::span<const double> y, std::span<double> dy);

    const Game& game_;
    const TopologySchedule& topology_;
    SeekerConfig cfg_;
    TimeWarp warp_;
    DynamicGains gains0_;
    std::size_t players_;
    std::size_t dim_;
    std::size_t state_size_;
    std::size_t gain_count_;
    std::vector<std::vector<ActiveEdge>> graph_edges_;  // per scheduled graph
    Vector scratch_;
    Vector u_;
    Vector rate_;
};

// Single-evaluation front-ends. They build a SeekerSystem per call and are
// meant for inspection and tests, not inner loops.

// -theta(s) [R^T F(x) + kappa (L (x) I_n) x]
[[nodiscard]] Vector rhs_static_s(const EstimateState& state, double s, const Game& game,
                                  const WeightedGraph& graph, const SeekerConfig& cfg);

struct AdaptiveDerivative {
    Vector state;
    Vector gains;
};

// Adaptive flow in s; for switching topologies a_ij is read at s or warp(s)
// according to cfg.schedule_clock.
[[nodiscard]] AdaptiveDerivative rhs_adaptive_s(const EstimateState& state,
                                                const DynamicGains& gains, double s,
                                                const Game& game,
                                                const TopologySchedule& topology,
                                                const SeekerConfig& cfg);

// -[R^T F(x) + kappa (L (x) I_n) x]
[[nodiscard]] Vector rhs_baseline(const EstimateState& state, const Game& game,
                                  const WeightedGraph& graph, double kappa);

// c times the variant's law at time t >= T. `gains` is ignored for the
// static variant.
[[nodiscard]] AdaptiveDerivative rhs_post_T(const EstimateState& state,
                                            const DynamicGains* gains, double t,
                                            const Game& game, const TopologySchedule& topology,
                                            const SeekerConfig& cfg);

struct GainCertificate {
    bool satisfied = false;
    double margin = 0.0;          // kappa lambda2 - (iota^2/eps + iota)
    double required_kappa = 0.0;  // (iota^2/eps + iota) / lambda2
};

// Sufficient gain condition kappa > (iota^2/eps + iota) / lambda2.
// Throws for eps <= 0 or lambda2 <= 0.
[[nodiscard]] GainCertificate gain_condition(double kappa, double iota, double eps,
                                             double lambda2);

// Sampled trajectory. Times are in t-units for both phases.
struct RunRecord {
    Variant variant = Variant::StaticGain;
    std::size_t players = 0;
    std::size_t dim = 0;
    std::optional<double> prescribed_time;
    Vector reference;          // x* used for the error metrics
    std::vector<Edge> edges;   // gain labels (adaptive variants)

    Vector times;
    std::vector<Vector> states;
    std::vector<Vector> gains;
    Vector rel_error;           // |x - 1 (x) x*| / |1 (x) x*|
    Vector consensus_residual;  // max_ij |x^i - x^j|
    Vector u_norm;
    Vector lyapunov;            // |x - 1 (x) x*|^2 / 2

    std::size_t s_steps = 0;  // RK4 steps taken, substeps included
    std::size_t t_steps = 0;
    bool aborted = false;
    std::string abort_reason;

    std::string scenario_hash;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] EstimateState state(std::size_t k) const {
        return EstimateState(players, dim, states[k]);
    }
    [[nodiscard]] EstimateState final_state() const { return state(size() - 1); }
};

struct IntegrationOptions {
    double horizon = 0.0;
    double sample_dt = 0.01;
    Vector reference;  // required
};

// RK4 on a fixed grid: s-domain over [0, s_max] (step ds) before T, then
// t := T and t-domain steps of dt_post until the horizon. The baseline runs
// in t throughout with dt_post. Grid steps are split further only when
// cfg.stability_limit demands it. A non-finite state aborts the run; the
// record then ends with the last finite sample.
[[nodiscard]] RunRecord integrate(const Game& game, const TopologySchedule& topology,
                                  const SeekerConfig& cfg, const EstimateState& x0,
                                  const IntegrationOptions& opts);

// First sample time after which rel_error stays <= threshold until the end
// of the record; nullopt if the last sample is above it.
[[nodiscard]] std::optional<double> convergence_time(const RunRecord& record, double threshold);
// Index of the first sample with time >= t (clamped to the last sample).
[[nodiscard]] std::size_t sample_index_at(const RunRecord& record, double t);

}  // namespace ptnash
