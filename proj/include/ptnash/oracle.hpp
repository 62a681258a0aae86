#pragma once

// Ground-truth equilibria by root-finding on the pseudo-gradient, F(x*) = 0.

#include "ptnash/dynamics.hpp"
#include "ptnash/game.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ptnash {

struct OracleResult {
    Vector x_star;
    double residual = 0.0;  // |F(x_star)|
    std::size_t iterations = 0;
    bool converged = false;
    std::string message;
};

// Forward-difference Jacobian of F, column step 1e-7 * max(1, |x_k|).
[[nodiscard]] Eigen::MatrixXd pseudo_gradient_jacobian(const Game& game,
                                                       std::span<const double> x);

// Damped Newton. Each step halves the Newton increment (at most 30 times)
// until |F| decreases; the best iterate is returned. A singular Jacobian or
// an exhausted budget yields converged = false with a message.
[[nodiscard]] OracleResult solve_ne(const Game& game, std::span<const double> x0,
                                    double tol = 1e-10, std::size_t max_iter = 100);

// Direct solve for games with affine F: assembles the constant Jacobian by
// unit central differences and solves J x = -F(0). Throws unless
// game.is_linear().
[[nodiscard]] OracleResult solve_linear_ne(const Game& game);

struct VerificationReport {
    bool passed = false;
    bool consensus_ok = false;
    bool stationarity_ok = false;
    double tol = 0.0;
    double consensus_residual = 0.0;  // terminal max_ij |x^i - x^j|
    double max_distance = 0.0;        // terminal max_i |x^i - x*|
    Vector block_distances;
};

// Throws std::invalid_argument if the oracle did not converge or the record
// is empty.
[[nodiscard]] VerificationReport verify_against_oracle(const RunRecord& record,
                                                       const OracleResult& oracle, double tol);

}  // namespace ptnash
