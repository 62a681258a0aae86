#include "ptnash/game.hpp"

#include "ptnash/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ptnash {

SelectionMatrix::SelectionMatrix(std::size_t player, std::size_t offset, std::size_t dim,
                                 std::size_t total)
    : player_(player), offset_(offset), dim_(dim), total_(total) {
    if (offset + dim > total) {
        throw DimensionError("selection block exceeds the action vector");
    }
}

Vector SelectionMatrix::apply(std::span<const double> full) const {
    if (full.size() != total_) {
        throw DimensionError("selection: expected vector of length " + std::to_string(total_));
    }
    return Vector(full.begin() + static_cast<std::ptrdiff_t>(offset_),
                  full.begin() + static_cast<std::ptrdiff_t>(offset_ + dim_));
}

Vector SelectionMatrix::embed(std::span<const double> local) const {
    Vector out(total_, 0.0);
    embed_into(local, out);
    return out;
}

void SelectionMatrix::embed_into(std::span<const double> local, std::span<double> out) const {
    if (local.size() != dim_ || out.size() != total_) {
        throw DimensionError("selection embed: dimension mismatch");
    }
    std::fill(out.begin(), out.end(), 0.0);
    std::copy(local.begin(), local.end(), out.begin() + static_cast<std::ptrdiff_t>(offset_));
}

Game::Game(std::string name, std::vector<Player> players, bool linear_pseudo_gradient)
    : name_(std::move(name)), players_(std::move(players)), linear_(linear_pseudo_gradient) {
    if (players_.empty()) {
        throw std::invalid_argument("game needs at least one player");
    }
    dims_.reserve(players_.size());
    offsets_.reserve(players_.size());
    for (const auto& p : players_) {
        if (p.action_dim == 0) {
            throw std::invalid_argument("player action dimension must be positive");
        }
        if (!p.cost) {
            throw std::invalid_argument("player cost evaluator is required");
        }
        offsets_.push_back(total_dim_);
        dims_.push_back(p.action_dim);
        total_dim_ += p.action_dim;
    }
}

void Game::check_player(std::size_t i) const {
    if (i >= players_.size()) {
        throw IndexError("player index " + std::to_string(i) + " out of range (N = " +
                         std::to_string(players_.size()) + ")");
    }
}

void Game::check_point(std::span<const double> x) const {
    if (x.size() != total_dim_) {
        throw DimensionError("action vector has length " + std::to_string(x.size()) +
                             ", expected " + std::to_string(total_dim_));
    }
}

std::size_t Game::action_dim(std::size_t i) const {
    check_player(i);
    return dims_[i];
}

std::size_t Game::offset(std::size_t i) const {
    check_player(i);
    return offsets_[i];
}

SelectionMatrix Game::selection(std::size_t i) const {
    check_player(i);
    return SelectionMatrix(i, offsets_[i], dims_[i], total_dim_);
}

bool Game::has_analytic_gradient(std::size_t i) const {
    check_player(i);
    return static_cast<bool>(players_[i].gradient);
}

double Game::cost(std::size_t i, std::span<const double> x) const {
    check_player(i);
    check_point(x);
    return players_[i].cost(x);
}

void Game::gradient(std::size_t i, std::span<const double> x, std::span<double> out) const {
    check_player(i);
    check_point(x);
    if (out.size() != dims_[i]) {
        throw DimensionError("gradient output has wrong length");
    }
    if (players_[i].gradient) {
        players_[i].gradient(x, out);
    } else {
        finite_difference_gradient(i, x, out);
    }
}

void Game::finite_difference_gradient(std::size_t i, std::span<const double> x,
                                      std::span<double> out) const {
    check_player(i);
    check_point(x);
    Vector probe(x.begin(), x.end());
    const auto& cost = players_[i].cost;
    for (std::size_t k = 0; k < dims_[i]; ++k) {
        const std::size_t c = offsets_[i] + k;
        const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
        probe[c] = x[c] + h;
        const double up = cost(probe);
        probe[c] = x[c] - h;
        const double down = cost(probe);
        probe[c] = x[c];
        out[k] = (up - down) / (2.0 * h);
    }
}

double eval_cost(const Game& game, std::size_t i, std::span<const double> x) {
    return game.cost(i, x);
}

Vector partial_gradient(const Game& game, std::size_t i, std::span<const double> x) {
    Vector g(game.action_dim(i));
    game.gradient(i, x, g);
    return g;
}

Vector pseudo_gradient(const Game& game, std::span<const double> x) {
    Vector f(game.total_dim());
    for (std::size_t i = 0; i < game.player_count(); ++i) {
        std::span<double> block(f.data() + game.offset(i), game.action_dim(i));
        game.gradient(i, x, block);
    }
    return f;
}

EstimateState::EstimateState(std::size_t players, std::size_t total_dim)
    : players_(players), dim_(total_dim), data_(players * total_dim, 0.0) {}

EstimateState::EstimateState(std::size_t players, std::size_t total_dim, Vector stacked)
    : players_(players), dim_(total_dim), data_(std::move(stacked)) {
    if (data_.size() != players_ * dim_) {
        throw DimensionError("stacked estimate has length " + std::to_string(data_.size()) +
                             ", expected N*n = " + std::to_string(players_ * dim_));
    }
}

EstimateState EstimateState::consensus(std::size_t players, std::span<const double> profile) {
    EstimateState s(players, profile.size());
    for (std::size_t i = 0; i < players; ++i) {
        std::copy(profile.begin(), profile.end(), s.block(i).begin());
    }
    return s;
}

EstimateState EstimateState::from_blocks(const std::vector<Vector>& blocks) {
    if (blocks.empty()) {
        throw DimensionError("no estimate blocks");
    }
    EstimateState s(blocks.size(), blocks.front().size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].size() != s.dim_) {
            throw DimensionError("estimate blocks have unequal lengths");
        }
        std::copy(blocks[i].begin(), blocks[i].end(), s.block(i).begin());
    }
    return s;
}

std::span<double> EstimateState::block(std::size_t i) {
    if (i >= players_) throw IndexError("estimate block index out of range");
    return {data_.data() + i * dim_, dim_};
}

std::span<const double> EstimateState::block(std::size_t i) const {
    if (i >= players_) throw IndexError("estimate block index out of range");
    return {data_.data() + i * dim_, dim_};
}

std::vector<Vector> EstimateState::blocks() const {
    std::vector<Vector> out;
    out.reserve(players_);
    for (std::size_t i = 0; i < players_; ++i) {
        auto b = block(i);
        out.emplace_back(b.begin(), b.end());
    }
    return out;
}

Vector EstimateState::average() const {
    Vector avg(dim_, 0.0);
    for (std::size_t i = 0; i < players_; ++i) {
        kernels::axpy(1.0, block(i), avg);
    }
    for (double& v : avg) v /= static_cast<double>(players_);
    return avg;
}

void extended_pseudo_gradient_into(const Game& game, std::span<const double> stacked,
                                   std::span<double> out, std::span<double> scratch) {
    const std::size_t n = game.total_dim();
    const std::size_t players = game.player_count();
    if (stacked.size() != players * n || out.size() != players * n) {
        throw DimensionError("extended pseudo-gradient: stacked length must be N*n");
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < players; ++i) {
        const std::size_t ni = game.action_dim(i);
        auto g = scratch.first(ni);
        game.gradient(i, stacked.subspan(i * n, n), g);
        std::copy(g.begin(), g.end(), out.begin() + static_cast<std::ptrdiff_t>(i * n + game.offset(i)));
    }
}

Vector extended_pseudo_gradient(const Game& game, const EstimateState& state) {
    if (state.players() != game.player_count() || state.block_dim() != game.total_dim()) {
        throw DimensionError("estimate state does not match the game");
    }
    Vector out(state.size());
    std::size_t max_dim = 0;
    for (auto d : game.action_dims()) max_dim = std::max(max_dim, d);
    Vector scratch(max_dim);
    extended_pseudo_gradient_into(game, state.stacked(), out, scratch);
    return out;
}

Box Box::uniform(std::size_t dim, double lo, double hi) {
    return Box{Vector(dim, lo), Vector(dim, hi)};
}

RegularityEstimate estimate_regularity_constants(const Game& game, std::size_t sample_count,
                                                 const Box& box, std::uint64_t seed) {
    const std::size_t n = game.total_dim();
    if (sample_count < 2) {
        throw std::invalid_argument("regularity estimate needs at least 2 samples");
    }
    if (box.lower.size() != n || box.upper.size() != n) {
        throw DimensionError("sampling box dimension does not match the game");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!(box.upper[k] > box.lower[k])) {
            throw std::invalid_argument("sampling box has zero volume along coordinate " +
                                        std::to_string(k));
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](Vector& p) {
        for (std::size_t k = 0; k < n; ++k) {
            p[k] = box.lower[k] + (box.upper[k] - box.lower[k]) * unit(rng);
        }
    };

    RegularityEstimate est;
    est.monotonicity = std::numeric_limits<double>::infinity();
    est.lipschitz = 0.0;

    auto accumulate = [&](const Vector& x, const Vector& y) {
        Vector dx(n);
        for (std::size_t k = 0; k < n; ++k) dx[k] = x[k] - y[k];
        const double dist2 = kernels::squared_norm(dx);
        if (dist2 <= 0.0) return;
        const Vector fx = pseudo_gradient(game, x);
        const Vector fy = pseudo_gradient(game, y);
        double inner = 0.0;
        double df2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double df = fx[k] - fy[k];
            inner += dx[k] * df;
            df2 += df * df;
        }
        est.monotonicity = std::min(est.monotonicity, inner / dist2);
        est.lipschitz = std::max(est.lipschitz, std::sqrt(df2 / dist2));
        ++est.pairs;
    };

    // Far pairs probe the global envelope; near pairs probe the local
    // Jacobian, where nonlinear games tend to attain the extremes.
    Vector x(n), y(n), near(n);
    for (std::size_t s = 0; s < sample_count; ++s) {
        draw(x);
        draw(y);
        accumulate(x, y);
        for (std::size_t k = 0; k < n; ++k) {
            const double width = box.upper[k] - box.lower[k];
            near[k] = x[k] + 1e-4 * width * (2.0 * unit(rng) - 1.0);
        }
        accumulate(x, near);
    }
    return est;
}

double consensus_residual(std::span<const double> stacked, std::size_t players) {
    if (players == 0 || stacked.size() % players != 0) {
        throw DimensionError("stacked vector length is not a multiple of the player count");
    }
    const std::size_t n = stacked.size() / players;
    double worst = 0.0;
    for (std::size_t i = 0; i < players; ++i) {
        for (std::size_t j = i + 1; j < players; ++j) {
            worst = std::max(worst, kernels::squared_distance(stacked.subspan(i * n, n),
                                                              stacked.subspan(j * n, n)));
        }
    }
    return std::sqrt(worst);
}

double consensus_residual(const EstimateState& state) {
    return consensus_residual(state.stacked(), state.players());
}

EquilibriumReport is_equilibrium_profile(const Game& game, const EstimateState& state, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("equilibrium tolerance must be positive");
    }
    if (state.players() != game.player_count() || state.block_dim() != game.total_dim()) {
        throw DimensionError("estimate state does not match the game");
    }
    EquilibriumReport r;
    r.consensus_residual = consensus_residual(state);
    const Vector f = pseudo_gradient(game, state.average());
    r.stationarity_residual = std::sqrt(kernels::squared_norm(f));
    r.is_equilibrium = r.consensus_residual <= tol && r.stationarity_residual <= tol;
    return r;
}

}  // namespace ptnash
