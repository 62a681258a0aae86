#include "ptnash/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace ptnash {

namespace {

// Phases within this distance below a boundary are treated as on it, so that
// t = k * Gamma * fraction lands in the new interval despite rounding.
constexpr double kBoundarySnap = 1e-12;

}  // namespace

TopologySchedule TopologySchedule::fixed(WeightedGraph g) {
    TopologySchedule s;
    s.mode_ = Mode::Fixed;
    s.graphs_.push_back(std::move(g));
    return s;
}

TopologySchedule TopologySchedule::periodic(std::vector<WeightedGraph> graphs, double period,
                                            std::vector<PeriodicEntry> entries) {
    if (graphs.empty()) throw std::invalid_argument("schedule needs at least one graph");
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw std::invalid_argument("schedule period must be positive");
    }
    if (entries.empty()) throw std::invalid_argument("periodic schedule needs entries");
    double prev = 0.0;
    for (const auto& e : entries) {
        if (!(e.until_fraction > prev)) {
            throw std::invalid_argument(
                "periodic schedule fractions must be strictly increasing (dwell > 0)");
        }
        prev = e.until_fraction;
    }
    if (std::abs(prev - 1.0) > 1e-12) {
        throw std::invalid_argument("last periodic entry must end at until_fraction = 1");
    }
    entries.back().until_fraction = 1.0;

    TopologySchedule s;
    s.mode_ = Mode::Periodic;
    s.graphs_ = std::move(graphs);
    s.period_ = period;
    s.periodic_ = std::move(entries);
    s.validate_indices();
    return s;
}

TopologySchedule TopologySchedule::aperiodic(std::vector<WeightedGraph> graphs,
                                             std::vector<SignalEntry> entries) {
    if (graphs.empty()) throw std::invalid_argument("schedule needs at least one graph");
    if (entries.empty() || entries.front().t_start != 0.0) {
        throw std::invalid_argument("aperiodic signal must start at t = 0");
    }
    for (std::size_t k = 1; k < entries.size(); ++k) {
        if (!(entries[k].t_start > entries[k - 1].t_start)) {
            throw std::invalid_argument("aperiodic signal start times must strictly increase");
        }
    }
    TopologySchedule s;
    s.mode_ = Mode::Aperiodic;
    s.graphs_ = std::move(graphs);
    s.signal_ = std::move(entries);
    s.validate_indices();
    return s;
}

void TopologySchedule::validate_indices() const {
    const std::size_t n = graphs_.front().node_count();
    for (const auto& g : graphs_) {
        if (g.node_count() != n) {
            throw std::invalid_argument("all scheduled graphs must have the same node count");
        }
    }
    auto check = [&](std::size_t idx) {
        if (idx >= graphs_.size()) {
            throw std::invalid_argument("schedule references missing graph index " +
                                        std::to_string(idx));
        }
    };
    for (const auto& e : periodic_) check(e.graph_index);
    for (const auto& e : signal_) check(e.graph_index);
}

std::optional<double> TopologySchedule::period() const {
    if (mode_ == Mode::Periodic) return period_;
    return std::nullopt;
}

std::size_t TopologySchedule::index_at(double t) const {
    if (t < 0.0) t = 0.0;
    switch (mode_) {
        case Mode::Fixed: return 0;
        case Mode::Periodic: {
            const double cycles = t / period_;
            double phase = cycles - std::floor(cycles);
            if (phase >= 1.0 - kBoundarySnap) phase = 0.0;
            for (const auto& e : periodic_) {
                if (phase < e.until_fraction - kBoundarySnap) return e.graph_index;
            }
            return periodic_.back().graph_index;
        }
        case Mode::Aperiodic: {
            auto it = std::upper_bound(
                signal_.begin(), signal_.end(), t + kBoundarySnap * std::max(1.0, t),
                [](double v, const SignalEntry& e) { return v < e.t_start; });
            return std::prev(it)->graph_index;
        }
    }
    return 0;
}

double TopologySchedule::min_dwell() const {
    switch (mode_) {
        case Mode::Fixed: return std::numeric_limits<double>::infinity();
        case Mode::Periodic: {
            double prev = 0.0;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& e : periodic_) {
                best = std::min(best, (e.until_fraction - prev) * period_);
                prev = e.until_fraction;
            }
            return best;
        }
        case Mode::Aperiodic: {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 1; k < signal_.size(); ++k) {
                best = std::min(best, signal_[k].t_start - signal_[k - 1].t_start);
            }
            return best;
        }
    }
    return 0.0;
}

std::vector<Interval> TopologySchedule::intervals(double a, double b) const {
    std::vector<Interval> out;
    if (!(b > a)) return out;
    auto push = [&](double s, double e, std::size_t idx) {
        const double lo = std::max(s, a);
        const double hi = std::min(e, b);
        if (hi > lo) out.push_back({lo, hi, idx});
    };
    switch (mode_) {
        case Mode::Fixed:
            push(a, b, 0);
            break;
        case Mode::Periodic: {
            const auto first = static_cast<long long>(std::floor(a / period_));
            for (long long k = first; static_cast<double>(k) * period_ < b; ++k) {
                const double base = static_cast<double>(k) * period_;
                double prev = 0.0;
                for (const auto& e : periodic_) {
                    push(base + prev * period_, base + e.until_fraction * period_, e.graph_index);
                    prev = e.until_fraction;
                }
            }
            break;
        }
        case Mode::Aperiodic:
            for (std::size_t k = 0; k < signal_.size(); ++k) {
                const double end = k + 1 < signal_.size()
                                       ? signal_[k + 1].t_start
                                       : std::numeric_limits<double>::infinity();
                push(signal_[k].t_start, end, signal_[k].graph_index);
            }
            break;
    }
    return out;
}

WeightedGraph TopologySchedule::union_graph() const {
    std::vector<const WeightedGraph*> ptrs;
    std::set<std::size_t> used;
    if (mode_ == Mode::Fixed) used.insert(0);
    for (const auto& e : periodic_) used.insert(e.graph_index);
    for (const auto& e : signal_) used.insert(e.graph_index);
    for (std::size_t idx : used) ptrs.push_back(&graphs_[idx]);
    return graph_union(ptrs);
}

JointConnectivityReport check_jointly_connected(const TopologySchedule& sched, double window,
                                                std::optional<double> horizon) {
    if (!(window > 0.0)) {
        throw std::invalid_argument("joint-connectivity window must be positive");
    }
    double span = window;
    switch (sched.mode()) {
        case TopologySchedule::Mode::Fixed:
            span = horizon.value_or(window);
            break;
        case TopologySchedule::Mode::Periodic:
            span = horizon.value_or(*sched.period());
            break;
        case TopologySchedule::Mode::Aperiodic:
            if (!horizon) {
                throw std::invalid_argument(
                    "aperiodic schedules need an explicit horizon for joint connectivity");
            }
            span = *horizon;
            break;
    }
    const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(span / window - 1e-9)));

    JointConnectivityReport report;
    report.jointly_connected = true;
    for (std::size_t k = 0; k < count; ++k) {
        WindowWitness w;
        w.start = static_cast<double>(k) * window;
        w.end = w.start + window;
        std::set<std::size_t> active;
        for (const auto& iv : sched.intervals(w.start, w.end)) active.insert(iv.graph_index);
        w.active_graphs.assign(active.begin(), active.end());
        std::vector<const WeightedGraph*> ptrs;
        for (std::size_t idx : w.active_graphs) ptrs.push_back(&sched.graphs()[idx]);
        w.connected = !ptrs.empty() && is_connected(graph_union(ptrs));
        report.jointly_connected = report.jointly_connected && w.connected;
        report.windows.push_back(std::move(w));
    }
    return report;
}

}  // namespace ptnash
