#pragma once

// N-player games over unconstrained action spaces, their pseudo-gradients,
// and the stacked estimate space each player works in.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptnash {

using Vector = std::vector<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

using CostFn = std::function<double(std::span<const double> x)>;
// Writes the player's partial gradient (length n_i) into `out`.
using GradientFn = std::function<void(std::span<const double> x, std::span<double> out)>;

struct Player {
    std::size_t action_dim = 1;
    CostFn cost;
    GradientFn gradient;  // empty: central finite differences of `cost`
};

// Implicit R_i: picks player i's coordinates [offset, offset + dim) out of
// the full action vector.
class SelectionMatrix {
public:
    SelectionMatrix(std::size_t player, std::size_t offset, std::size_t dim, std::size_t total);

    [[nodiscard]] std::size_t player() const { return player_; }
    [[nodiscard]] std::size_t offset() const { return offset_; }
    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t total_dim() const { return total_; }

    // R_i v
    [[nodiscard]] Vector apply(std::span<const double> full) const;
    // R_i^T g
    [[nodiscard]] Vector embed(std::span<const double> local) const;
    // out = R_i^T g, overwriting all of `out`
    void embed_into(std::span<const double> local, std::span<double> out) const;

private:
    std::size_t player_;
    std::size_t offset_;
    std::size_t dim_;
    std::size_t total_;
};

class Game {
public:
    // `linear_pseudo_gradient` declares F affine (quadratic costs), which
    // enables the oracle's direct linear-solve path.
    Game(std::string name, std::vector<Player> players, bool linear_pseudo_gradient = false);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] std::size_t player_count() const { return players_.size(); }
    [[nodiscard]] std::size_t total_dim() const { return total_dim_; }
    [[nodiscard]] std::size_t action_dim(std::size_t i) const;
    [[nodiscard]] std::size_t offset(std::size_t i) const;
    [[nodiscard]] SelectionMatrix selection(std::size_t i) const;
    [[nodiscard]] bool has_analytic_gradient(std::size_t i) const;
    [[nodiscard]] bool is_linear() const { return linear_; }
    [[nodiscard]] const std::vector<std::size_t>& action_dims() const { return dims_; }

    [[nodiscard]] double cost(std::size_t i, std::span<const double> x) const;
    // Analytic gradient when registered, else central differences with
    // per-coordinate step 1e-6 * max(1, |x_k|).
    void gradient(std::size_t i, std::span<const double> x, std::span<double> out) const;
    void finite_difference_gradient(std::size_t i, std::span<const double> x,
                                    std::span<double> out) const;

private:
    void check_player(std::size_t i) const;
    void check_point(std::span<const double> x) const;

    std::string name_;
    std::vector<Player> players_;
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> offsets_;
    std::size_t total_dim_ = 0;
    bool linear_ = false;
};

[[nodiscard]] double eval_cost(const Game& game, std::size_t i, std::span<const double> x);
[[nodiscard]] Vector partial_gradient(const Game& game, std::size_t i, std::span<const double> x);
// F(x) = col(grad_1 J_1(x), ..., grad_N J_N(x))
[[nodiscard]] Vector pseudo_gradient(const Game& game, std::span<const double> x);

// Stacked estimates: N blocks of length n, block i is player i's estimate of
// the whole action profile. Block i, coordinates of player i, is player i's
// actual action.
class EstimateState {
public:
    EstimateState() = default;
    EstimateState(std::size_t players, std::size_t total_dim);
    EstimateState(std::size_t players, std::size_t total_dim, Vector stacked);

    static EstimateState consensus(std::size_t players, std::span<const double> profile);
    static EstimateState from_blocks(const std::vector<Vector>& blocks);

    [[nodiscard]] std::size_t players() const { return players_; }
    [[nodiscard]] std::size_t block_dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    [[nodiscard]] std::span<double> block(std::size_t i);
    [[nodiscard]] std::span<const double> block(std::size_t i) const;
    [[nodiscard]] std::span<double> stacked() { return data_; }
    [[nodiscard]] std::span<const double> stacked() const { return data_; }
    [[nodiscard]] std::vector<Vector> blocks() const;
    // Block average x-bar.
    [[nodiscard]] Vector average() const;

private:
    std::size_t players_ = 0;
    std::size_t dim_ = 0;
    Vector data_;
};

// Block i of the result is R_i^T grad_i J_i(x^i): player i's own partial
// gradient at player i's own estimate.
[[nodiscard]] Vector extended_pseudo_gradient(const Game& game, const EstimateState& state);
// Same, on a raw stacked vector; `scratch` must hold max n_i doubles.
void extended_pseudo_gradient_into(const Game& game, std::span<const double> stacked,
                                   std::span<double> out, std::span<double> scratch);

struct Box {
    Vector lower;
    Vector upper;

    static Box uniform(std::size_t dim, double lo, double hi);
};

// Sampled envelopes of the strong-monotonicity and Lipschitz constants of F.
// These are empirical envelopes over the drawn pairs, not certificates: the
// true global constants satisfy eps <= monotonicity and iota >= lipschitz.
struct RegularityEstimate {
    double monotonicity = 0.0;  // min (x-y)'(F(x)-F(y)) / |x-y|^2
    double lipschitz = 0.0;     // max |F(x)-F(y)| / |x-y|
    std::size_t pairs = 0;
};

[[nodiscard]] RegularityEstimate estimate_regularity_constants(const Game& game,
                                                               std::size_t sample_count,
                                                               const Box& box,
                                                               std::uint64_t seed = 1);

struct EquilibriumReport {
    bool is_equilibrium = false;
    double consensus_residual = 0.0;     // max_ij |x^i - x^j|
    double stationarity_residual = 0.0;  // |F(x-bar)|
};

[[nodiscard]] EquilibriumReport is_equilibrium_profile(const Game& game,
                                                       const EstimateState& state, double tol);

// max_ij |x^i - x^j|
[[nodiscard]] double consensus_residual(const EstimateState& state);
[[nodiscard]] double consensus_residual(std::span<const double> stacked, std::size_t players);

}  // namespace ptnash
