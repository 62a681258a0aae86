#pragma once

// Bundled games and the name-keyed registry the scenario loader uses.

#include "ptnash/game.hpp"

#include <map>
#include <string>
#include <vector>

namespace ptnash {

// J_i = a_i (x_i - b_i)^2 + (c * sum_j x_j + d) x_i, scalar actions.
struct EnergyGameParams {
    Vector a;  // length N, or length 1 (broadcast)
    Vector b;  // length N
    double c = 0.1;
    double d = 10.0;
};

[[nodiscard]] Game make_energy_game(const EnergyGameParams& params);

// Five-player non-quadratic game:
//   J_1 = x_1^2/2 + x_1 (x_2 + x_3 + x_4 + x_5)
//   J_2 = e^{x_2/2}/2 + x_2 x_4
//   J_3 = x_3^2/2 + x_1^3
//   J_4 = ln(e^{x_4}) + x_4^2 + x_3^3
//   J_5 = x_5^2 - 5 x_5 + x_1^3 x_2 + x_3 x_4^4
[[nodiscard]] Game make_nonquadratic_game();

// Scalar-action game with affine pseudo-gradient F(x) = M x + q, realised by
// J_i = M_ii x_i^2 / 2 + sum_{j != i} M_ij x_i x_j + q_i x_i.
[[nodiscard]] Game make_quadratic_game(const std::vector<Vector>& matrix, const Vector& offset);

// Registry parameters: every value is a list of reals (scalars are length 1).
using GameParameters = std::map<std::string, Vector>;

// Known names: "energy", "nonquadratic", "quadratic".
//   energy:       a, b, c, d
//   nonquadratic: (none)
//   quadratic:    matrix (row-major, n*n entries), offset (n entries)
[[nodiscard]] Game make_game(const std::string& name, const GameParameters& params);
[[nodiscard]] std::vector<std::string> registered_games();

}  // namespace ptnash
