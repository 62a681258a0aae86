#include "ptnash/dynamics.hpp"

#include "ptnash/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptnash {

namespace {

constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string to_string(Variant v) {
    switch (v) {
        case Variant::StaticGain: return "static";
        case Variant::Adaptive: return "adaptive";
        case Variant::AdaptiveSwitching: return "adaptive-switching";
        case Variant::BaselineExponential: return "baseline";
    }
    return "unknown";
}

Variant parse_variant(const std::string& name) {
    if (name == "static" || name == "static-gain") return Variant::StaticGain;
    if (name == "adaptive") return Variant::Adaptive;
    if (name == "adaptive-switching") return Variant::AdaptiveSwitching;
    if (name == "baseline" || name == "baseline-exponential") return Variant::BaselineExponential;
    throw std::invalid_argument("unknown seeker variant '" + name +
                                "' (expected static, adaptive, adaptive-switching, baseline)");
}

std::string to_string(ScheduleClock c) {
    return c == ScheduleClock::Physical ? "physical" : "transformed";
}

ScheduleClock parse_schedule_clock(const std::string& name) {
    if (name == "physical") return ScheduleClock::Physical;
    if (name == "transformed") return ScheduleClock::Transformed;
    throw std::invalid_argument("unknown schedule clock '" + name +
                                "' (expected physical or transformed)");
}

double TimeWarp::warp(double s) const { return -prescribed_time * std::expm1(-s); }

double TimeWarp::warp_slope(double s) const { return prescribed_time * std::exp(-s); }

double TimeWarp::unwarp(double t) const { return -std::log1p(-t / prescribed_time); }

double TimeWarp::theta(double s) const {
    return 1.0 + post_gain * prescribed_time * std::exp(-s);
}

double warp(const TimeWarp& tw, double s) {
    require(s >= 0.0, "warp: s must be nonnegative");
    return tw.warp(s);
}

double theta(const TimeWarp& tw, double s) {
    require(s >= 0.0, "theta: s must be nonnegative");
    return tw.theta(s);
}

void SeekerConfig::validate() const {
    if (is_prescribed_time(variant)) {
        require(prescribed_time.has_value(),
                "variant '" + to_string(variant) + "' requires the prescribed time T");
        require(*prescribed_time > 0.0 && std::isfinite(*prescribed_time),
                "prescribed time T must be positive");
        require(post_gain >= 0.0 && std::isfinite(post_gain), "post gain c must be nonnegative");
    }
    if (variant == Variant::StaticGain || variant == Variant::BaselineExponential) {
        require(kappa >= 0.0 && std::isfinite(kappa), "static gain kappa must be nonnegative");
    }
    if (is_adaptive(variant)) {
        require(kappa0 >= 0.0 && std::isfinite(kappa0), "initial edge gain kappa0 must be >= 0");
        require(gamma > 0.0 && std::isfinite(gamma), "adaptation rate gamma must be positive");
        for (const auto& e : kappa0_overrides) {
            require(e.value >= 0.0, "edge kappa0 overrides must be >= 0");
        }
        for (const auto& e : gamma_overrides) {
            require(e.value > 0.0, "edge gamma overrides must be positive");
        }
    }
    require(ds > 0.0 && std::isfinite(ds), "ds must be positive");
    require(s_max > 0.0 && std::isfinite(s_max), "s_max must be positive");
    require(dt_post > 0.0 && std::isfinite(dt_post), "dt_post must be positive");
    require(stability_limit >= 0.0 && std::isfinite(stability_limit),
            "stability_limit must be >= 0");
}

TimeWarp SeekerConfig::time_warp() const {
    return TimeWarp{prescribed_time.value_or(1.0), post_gain};
}

DynamicGains::DynamicGains(const TopologySchedule& topology, const SeekerConfig& cfg)
    : edges_(topology.union_graph().edges()), nodes_(topology.node_count()) {
    lookup_.assign(nodes_ * nodes_, kNoEdge);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        lookup_[edges_[e].i * nodes_ + edges_[e].j] = e;
        lookup_[edges_[e].j * nodes_ + edges_[e].i] = e;
    }
    values_.assign(edges_.size(), cfg.kappa0);
    gamma_.assign(edges_.size(), cfg.gamma);
    for (const auto& o : cfg.kappa0_overrides) values_[index_of(o.i, o.j)] = o.value;
    for (const auto& o : cfg.gamma_overrides) gamma_[index_of(o.i, o.j)] = o.value;
}

std::size_t DynamicGains::index_of(std::size_t i, std::size_t j) const {
    const std::size_t idx = (i < nodes_ && j < nodes_) ? lookup_[i * nodes_ + j] : kNoEdge;
    if (idx == kNoEdge) {
        throw std::invalid_argument("edge {" + std::to_string(i) + ", " + std::to_string(j) +
                                    "} is not in the topology's union graph");
    }
    return idx;
}

SeekerSystem::SeekerSystem(const Game& game, const TopologySchedule& topology,
                           const SeekerConfig& cfg)
    : game_(game),
      topology_(topology),
      cfg_(cfg),
      warp_(cfg.time_warp()),
      players_(game.player_count()),
      dim_(game.total_dim()),
      state_size_(game.player_count() * game.total_dim()) {
    cfg_.validate();
    if (topology.node_count() != players_) {
        throw DimensionError("topology has " + std::to_string(topology.node_count()) +
                             " nodes but the game has " + std::to_string(players_) + " players");
    }
    if (cfg_.variant != Variant::AdaptiveSwitching && topology.is_switching()) {
        throw std::invalid_argument("variant '" + to_string(cfg_.variant) +
                                    "' needs a fixed graph; use adaptive-switching for schedules");
    }
    const bool adaptive = is_adaptive(cfg_.variant);
    if (adaptive) gains0_ = DynamicGains(topology, cfg_);
    gain_count_ = adaptive ? gains0_.size() : 0;

    for (const auto& g : topology.graphs()) {
        std::vector<ActiveEdge> list;
        for (const auto& e : g.edges()) {
            list.push_back({e.i, e.j, e.weight, adaptive ? gains0_.index_of(e.i, e.j) : 0});
        }
        graph_edges_.push_back(std::move(list));
    }

    std::size_t max_dim = 0;
    for (auto d : game.action_dims()) max_dim = std::max(max_dim, d);
    scratch_.resize(max_dim);
    u_.resize(state_size_);
    rate_.resize(gain_count_);
}

double SeekerSystem::signal_time_s(double s) const {
    return cfg_.schedule_clock == ScheduleClock::Transformed ? s : warp_.warp(s);
}

void SeekerSystem::control(double t, std::span<const double> y, std::span<double> u,
                           std::span<double> gain_rate) {
    const auto x = y.first(state_size_);
    extended_pseudo_gradient_into(game_, x, u, scratch_);
    for (double& v : u) v = -v;

    const bool adaptive = gain_count_ > 0;
    const auto gains = y.subspan(state_size_, gain_count_);
    if (adaptive) std::fill(gain_rate.begin(), gain_rate.end(), 0.0);
    const std::span<const double> rates = gains0_.rates();

    for (const auto& e : graph_edges_[topology_.index_at(t)]) {
        const auto xi = x.subspan(e.i * dim_, dim_);
        const auto xj = x.subspan(e.j * dim_, dim_);
        const double w = e.weight * (adaptive ? gains[e.gain] : cfg_.kappa);
        kernels::accumulate_difference(-w, xi, xj, u.subspan(e.i * dim_, dim_));
        kernels::accumulate_difference(-w, xj, xi, u.subspan(e.j * dim_, dim_));
        if (adaptive) {
            gain_rate[e.gain] = rates[e.gain] * e.weight * kernels::squared_distance(xi, xj);
        }
    }
}

void SeekerSystem::scaled(double rate, double t, std::span<const double> y,
                          std::span<double> dy) {
    control(t, y, u_, rate_);
    for (std::size_t k = 0; k < state_size_; ++k) dy[k] = rate * u_[k];
    for (std::size_t k = 0; k < gain_count_; ++k) dy[state_size_ + k] = rate * rate_[k];
}

void SeekerSystem::derivative_s(double s, std::span<const double> y, std::span<double> dy) {
    scaled(warp_.theta(s), signal_time_s(s), y, dy);
}

void SeekerSystem::derivative_post(double t, std::span<const double> y, std::span<double> dy) {
    scaled(cfg_.post_gain, t, y, dy);
}

void SeekerSystem::derivative_baseline(double t, std::span<const double> y,
                                       std::span<double> dy) {
    scaled(1.0, t, y, dy);
}

double SeekerSystem::stiffness(double rate, double signal_time,
                               std::span<const double> y) const {
    const auto x = y.first(state_size_);
    const bool adaptive = gain_count_ > 0;
    const auto gains = y.subspan(state_size_, gain_count_);
    const std::span<const double> rates = gains0_.rates();
    std::vector<double> degree(players_, 0.0);
    double coupling = 0.0;
    for (const auto& e : graph_edges_[topology_.index_at(signal_time)]) {
        const double w = e.weight * (adaptive ? gains[e.gain] : cfg_.kappa);
        degree[e.i] += w;
        degree[e.j] += w;
        if (adaptive) {
            const double gap = std::sqrt(kernels::squared_distance(x.subspan(e.i * dim_, dim_),
                                                                   x.subspan(e.j * dim_, dim_)));
            coupling = std::max(coupling, std::sqrt(2.0 * rates[e.gain] * e.weight) * gap);
        }
    }
    const double dmax = degree.empty() ? 0.0 : *std::max_element(degree.begin(), degree.end());
    return std::abs(rate) * (2.0 * dmax + 2.0 * coupling);
}

double SeekerSystem::control_norm(double t, std::span<const double> y) {
    control(t, y, u_, rate_);
    return std::sqrt(kernels::squared_norm(u_));
}

namespace {

void check_state(const EstimateState& state, const Game& game) {
    if (state.players() != game.player_count() || state.block_dim() != game.total_dim()) {
        throw DimensionError("estimate state does not match the game (expected N = " +
                             std::to_string(game.player_count()) +
                             ", n = " + std::to_string(game.total_dim()) + ")");
    }
}

Vector flat_of(const EstimateState& state, const DynamicGains* gains, std::size_t gain_count) {
    Vector y(state.stacked().begin(), state.stacked().end());
    if (gain_count > 0) {
        if (gains == nullptr || gains->size() != gain_count) {
            throw DimensionError("adaptive variants need one gain per union-graph edge");
        }
        y.insert(y.end(), gains->values().begin(), gains->values().end());
    }
    return y;
}

AdaptiveDerivative split(const Vector& dy, std::size_t state_size) {
    AdaptiveDerivative out;
    out.state.assign(dy.begin(), dy.begin() + static_cast<std::ptrdiff_t>(state_size));
    out.gains.assign(dy.begin() + static_cast<std::ptrdiff_t>(state_size), dy.end());
    return out;
}

}  // namespace

Vector rhs_static_s(const EstimateState& state, double s, const Game& game,
                    const WeightedGraph& graph, const SeekerConfig& cfg) {
    require(cfg.variant == Variant::StaticGain, "rhs_static_s needs the static variant");
    require(s >= 0.0, "s must be nonnegative");
    check_state(state, game);
    const auto topology = TopologySchedule::fixed(graph);
    SeekerSystem sys(game, topology, cfg);
    Vector y = flat_of(state, nullptr, 0);
    Vector dy(y.size());
    sys.derivative_s(s, y, dy);
    return dy;
}

AdaptiveDerivative rhs_adaptive_s(const EstimateState& state, const DynamicGains& gains, double s,
                                  const Game& game, const TopologySchedule& topology,
                                  const SeekerConfig& cfg) {
    require(is_adaptive(cfg.variant), "rhs_adaptive_s needs an adaptive variant");
    require(s >= 0.0, "s must be nonnegative");
    check_state(state, game);
    SeekerSystem sys(game, topology, cfg);
    Vector y = flat_of(state, &gains, sys.gain_count());
    Vector dy(y.size());
    sys.derivative_s(s, y, dy);
    return split(dy, sys.state_size());
}

Vector rhs_baseline(const EstimateState& state, const Game& game, const WeightedGraph& graph,
                    double kappa) {
    check_state(state, game);
    SeekerConfig cfg;
    cfg.variant = Variant::BaselineExponential;
    cfg.kappa = kappa;
    const auto topology = TopologySchedule::fixed(graph);
    SeekerSystem sys(game, topology, cfg);
    Vector y = flat_of(state, nullptr, 0);
    Vector dy(y.size());
    sys.derivative_baseline(0.0, y, dy);
    return dy;
}

AdaptiveDerivative rhs_post_T(const EstimateState& state, const DynamicGains* gains, double t,
                              const Game& game, const TopologySchedule& topology,
                              const SeekerConfig& cfg) {
    require(is_prescribed_time(cfg.variant), "rhs_post_T needs a prescribed-time variant");
    check_state(state, game);
    SeekerSystem sys(game, topology, cfg);
    Vector y = flat_of(state, gains, sys.gain_count());
    Vector dy(y.size());
    sys.derivative_post(t, y, dy);
    return split(dy, sys.state_size());
}

GainCertificate gain_condition(double kappa, double iota, double eps, double lambda2) {
    require(eps > 0.0, "gain condition: eps must be positive");
    require(lambda2 > 0.0, "gain condition: lambda2 must be positive (graph connected)");
    GainCertificate c;
    const double need = iota * iota / eps + iota;
    c.margin = kappa * lambda2 - need;
    c.required_kappa = need / lambda2;
    c.satisfied = c.margin > 0.0;
    return c;
}

}  // namespace ptnash
