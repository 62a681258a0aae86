#pragma once

// Weighted undirected communication graphs and piecewise-constant switching
// schedules over them.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace ptnash {

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 1.0;
};

class WeightedGraph {
public:
    WeightedGraph() = default;
    // Edges are undirected; listing (i, j) sets both a_ij and a_ji. Rejects
    // self loops, out-of-range nodes, negative or non-finite weights.
    WeightedGraph(std::size_t node_count, const std::vector<Edge>& edges);

    // Rejects asymmetric, negative or non-zero-diagonal matrices.
    static WeightedGraph from_adjacency(const Eigen::MatrixXd& adjacency);

    [[nodiscard]] std::size_t node_count() const { return static_cast<std::size_t>(adj_.rows()); }
    [[nodiscard]] double weight(std::size_t i, std::size_t j) const { return adj_(i, j); }
    [[nodiscard]] const Eigen::MatrixXd& adjacency() const { return adj_; }
    // Positive-weight edges with i < j, in row-major order.
    [[nodiscard]] std::vector<Edge> edges() const;
    [[nodiscard]] std::vector<std::size_t> neighbors(std::size_t i) const;

private:
    explicit WeightedGraph(Eigen::MatrixXd adjacency) : adj_(std::move(adjacency)) {}

    Eigen::MatrixXd adj_;
};

// L = D - A
[[nodiscard]] Eigen::MatrixXd laplacian(const WeightedGraph& g);
[[nodiscard]] Eigen::VectorXd laplacian_spectrum(const WeightedGraph& g);
// Second-smallest Laplacian eigenvalue (0 for a single node).
[[nodiscard]] double algebraic_connectivity(const WeightedGraph& g);
// Breadth-first reachability over positive-weight edges.
[[nodiscard]] bool is_connected(const WeightedGraph& g);
// Entrywise max of adjacency matrices; all graphs must share a node count.
[[nodiscard]] WeightedGraph graph_union(const std::vector<const WeightedGraph*>& graphs);

[[nodiscard]] WeightedGraph cycle_graph(std::size_t nodes, double weight = 1.0);
[[nodiscard]] WeightedGraph complete_graph(std::size_t nodes, double weight = 1.0);
// The cycle's edges split into four disconnected subgraphs
// {e_01}, {e_12}, {e_23}, {e_34, ..., e_{N-1,0}}. Requires nodes >= 5.
[[nodiscard]] std::vector<WeightedGraph> cycle_partition(std::size_t nodes, double weight = 1.0);

// One entry of a periodic switching signal: the graph is active while the
// phase t/period mod 1 lies in [previous until_fraction, until_fraction).
struct PeriodicEntry {
    double until_fraction = 1.0;
    std::size_t graph_index = 0;
};

// One interval of an aperiodic switching signal, active from t_start until
// the next entry's t_start (the last entry runs forever).
struct SignalEntry {
    double t_start = 0.0;
    std::size_t graph_index = 0;
};

struct Interval {
    double start = 0.0;
    double end = 0.0;
    std::size_t graph_index = 0;
};

class TopologySchedule {
public:
    enum class Mode { Fixed, Periodic, Aperiodic };

    static TopologySchedule fixed(WeightedGraph g);
    static TopologySchedule periodic(std::vector<WeightedGraph> graphs, double period,
                                     std::vector<PeriodicEntry> entries);
    static TopologySchedule aperiodic(std::vector<WeightedGraph> graphs,
                                      std::vector<SignalEntry> entries);

    [[nodiscard]] Mode mode() const { return mode_; }
    [[nodiscard]] bool is_switching() const { return mode_ != Mode::Fixed; }
    [[nodiscard]] const std::vector<WeightedGraph>& graphs() const { return graphs_; }
    [[nodiscard]] std::size_t node_count() const { return graphs_.front().node_count(); }
    [[nodiscard]] std::optional<double> period() const;
    [[nodiscard]] const std::vector<PeriodicEntry>& periodic_entries() const { return periodic_; }
    [[nodiscard]] const std::vector<SignalEntry>& signal_entries() const { return signal_; }

    // Index of the graph active at t; right-continuous at switch instants.
    [[nodiscard]] std::size_t index_at(double t) const;
    [[nodiscard]] const WeightedGraph& graph_at(double t) const { return graphs_[index_at(t)]; }
    // Smallest interval length of the signal (the dwell time).
    [[nodiscard]] double min_dwell() const;
    // Activation intervals intersecting [a, b), clipped to it.
    [[nodiscard]] std::vector<Interval> intervals(double a, double b) const;
    // Union of every graph the schedule can activate.
    [[nodiscard]] WeightedGraph union_graph() const;

private:
    TopologySchedule() = default;
    void validate_indices() const;

    Mode mode_ = Mode::Fixed;
    std::vector<WeightedGraph> graphs_;
    double period_ = 0.0;
    std::vector<PeriodicEntry> periodic_;
    std::vector<SignalEntry> signal_;
};

[[nodiscard]] inline const WeightedGraph& graph_at(const TopologySchedule& s, double t) {
    return s.graph_at(t);
}

struct WindowWitness {
    double start = 0.0;
    double end = 0.0;
    std::vector<std::size_t> active_graphs;
    bool connected = false;
};

struct JointConnectivityReport {
    bool jointly_connected = false;
    std::vector<WindowWitness> windows;
};

// Checks that the union graph over each window [k nu, (k+1) nu) is connected.
// Periodic schedules are checked over one period, fixed schedules over one
// window; aperiodic schedules need `horizon`.
[[nodiscard]] JointConnectivityReport check_jointly_connected(
    const TopologySchedule& sched, double window, std::optional<double> horizon = std::nullopt);

}  // namespace ptnash
