#include "ptnash/graph.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace ptnash {

WeightedGraph::WeightedGraph(std::size_t node_count, const std::vector<Edge>& edges)
    : adj_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(node_count),
                                 static_cast<Eigen::Index>(node_count))) {
    if (node_count == 0) {
        throw std::invalid_argument("graph needs at least one node");
    }
    for (const auto& e : edges) {
        if (e.i >= node_count || e.j >= node_count) {
            throw std::invalid_argument("edge (" + std::to_string(e.i) + ", " +
                                        std::to_string(e.j) + ") references a missing node");
        }
        if (e.i == e.j) {
            throw std::invalid_argument("self loop at node " + std::to_string(e.i));
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw std::invalid_argument("edge weights must be finite and nonnegative");
        }
        adj_(e.i, e.j) = e.weight;
        adj_(e.j, e.i) = e.weight;
    }
}

WeightedGraph WeightedGraph::from_adjacency(const Eigen::MatrixXd& adjacency) {
    if (adjacency.rows() == 0 || adjacency.rows() != adjacency.cols()) {
        throw std::invalid_argument("adjacency must be a non-empty square matrix");
    }
    for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
        if (adjacency(i, i) != 0.0) {
            throw std::invalid_argument("adjacency diagonal must be zero (no self loops)");
        }
        for (Eigen::Index j = 0; j < adjacency.cols(); ++j) {
            const double w = adjacency(i, j);
            if (!std::isfinite(w) || w < 0.0) {
                throw std::invalid_argument("adjacency weights must be finite and nonnegative");
            }
            if (w != adjacency(j, i)) {
                throw std::invalid_argument("adjacency must be symmetric");
            }
        }
    }
    return WeightedGraph(adjacency);
}

std::vector<Edge> WeightedGraph::edges() const {
    std::vector<Edge> out;
    const auto n = adj_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (adj_(i, j) > 0.0) {
                out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), adj_(i, j)});
            }
        }
    }
    return out;
}

std::vector<std::size_t> WeightedGraph::neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (Eigen::Index j = 0; j < adj_.cols(); ++j) {
        if (adj_(static_cast<Eigen::Index>(i), j) > 0.0) out.push_back(static_cast<std::size_t>(j));
    }
    return out;
}

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
    const Eigen::MatrixXd& a = g.adjacency();
    Eigen::MatrixXd l = -a;
    l.diagonal() = a.rowwise().sum();
    return l;
}

Eigen::VectorXd laplacian_spectrum(const WeightedGraph& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(g), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Laplacian eigensolve failed");
    }
    return solver.eigenvalues();  // ascending
}

double algebraic_connectivity(const WeightedGraph& g) {
    if (g.node_count() < 2) return 0.0;
    return laplacian_spectrum(g)(1);
}

bool is_connected(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                queue.push_back(w);
            }
        }
    }
    return reached == n;
}

WeightedGraph graph_union(const std::vector<const WeightedGraph*>& graphs) {
    if (graphs.empty()) {
        throw std::invalid_argument("union of no graphs");
    }
    Eigen::MatrixXd acc = graphs.front()->adjacency();
    for (const auto* g : graphs) {
        if (g->node_count() != static_cast<std::size_t>(acc.rows())) {
            throw std::invalid_argument("graph union: node counts differ");
        }
        acc = acc.cwiseMax(g->adjacency());
    }
    return WeightedGraph::from_adjacency(acc);
}

WeightedGraph cycle_graph(std::size_t nodes, double weight) {
    if (nodes < 3) {
        throw std::invalid_argument("cycle graph needs at least 3 nodes");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < nodes; ++i) edges.push_back({i, (i + 1) % nodes, weight});
    return WeightedGraph(nodes, edges);
}

WeightedGraph complete_graph(std::size_t nodes, double weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = i + 1; j < nodes; ++j) edges.push_back({i, j, weight});
    }
    return WeightedGraph(nodes, edges);
}

std::vector<WeightedGraph> cycle_partition(std::size_t nodes, double weight) {
    if (nodes < 5) {
        throw std::invalid_argument("cycle partition needs at least 5 nodes");
    }
    std::vector<WeightedGraph> out;
    out.emplace_back(nodes, std::vector<Edge>{{0, 1, weight}});
    out.emplace_back(nodes, std::vector<Edge>{{1, 2, weight}});
    out.emplace_back(nodes, std::vector<Edge>{{2, 3, weight}});
    std::vector<Edge> rest;
    for (std::size_t i = 3; i < nodes; ++i) rest.push_back({i, (i + 1) % nodes, weight});
    out.emplace_back(nodes, rest);
    return out;
}

}  // namespace ptnash
