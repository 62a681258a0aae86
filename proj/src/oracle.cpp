#include "ptnash/oracle.hpp"

#include "ptnash/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptnash {

namespace {

double residual_norm(const Vector& f) { return std::sqrt(kernels::squared_norm(f)); }

Eigen::Map<const Eigen::VectorXd> as_eigen(const Vector& v) {
    return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

Eigen::MatrixXd pseudo_gradient_jacobian(const Game& game, std::span<const double> x) {
    const std::size_t n = game.total_dim();
    if (x.size() != n) throw DimensionError("Jacobian point has the wrong dimension");
    const Vector f0 = pseudo_gradient(game, x);
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Vector probe(x.begin(), x.end());
    for (std::size_t k = 0; k < n; ++k) {
        const double h = 1e-7 * std::max(1.0, std::abs(x[k]));
        probe[k] = x[k] + h;
        const Vector f1 = pseudo_gradient(game, probe);
        probe[k] = x[k];
        for (std::size_t r = 0; r < n; ++r) {
            jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = (f1[r] - f0[r]) / h;
        }
    }
    return jac;
}

OracleResult solve_ne(const Game& game, std::span<const double> x0, double tol,
                      std::size_t max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("oracle tolerance must be positive");
    const std::size_t n = game.total_dim();
    if (x0.size() != n) throw DimensionError("oracle start point has the wrong dimension");

    OracleResult out;
    Vector x(x0.begin(), x0.end());
    Vector f = pseudo_gradient(game, x);
    double norm = residual_norm(f);
    out.x_star = x;
    out.residual = norm;

    for (std::size_t it = 0; it < max_iter; ++it) {
        if (norm <= tol) {
            out.converged = true;
            return out;
        }
        const Eigen::MatrixXd jac = pseudo_gradient_jacobian(game, x);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
        if (qr.rank() < static_cast<Eigen::Index>(n)) {
            out.message = "singular Jacobian at iteration " + std::to_string(it);
            return out;
        }
        const Eigen::VectorXd step = qr.solve(-as_eigen(f));

        double alpha = 1.0;
        bool improved = false;
        Vector trial(n);
        Vector f_trial;
        for (int halving = 0; halving <= 30; ++halving) {
            for (std::size_t k = 0; k < n; ++k) {
                trial[k] = x[k] + alpha * step(static_cast<Eigen::Index>(k));
            }
            f_trial = pseudo_gradient(game, trial);
            const double trial_norm = residual_norm(f_trial);
            if (std::isfinite(trial_norm) && trial_norm < norm) {
                x = trial;
                f = std::move(f_trial);
                norm = trial_norm;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        out.iterations = it + 1;
        out.x_star = x;
        out.residual = norm;
        if (!improved) {
            out.converged = norm <= tol;
            if (!out.converged) out.message = "no residual decrease after 30 halvings";
            return out;
        }
    }
    out.converged = norm <= tol;
    if (!out.converged) out.message = "iteration budget exhausted";
    return out;
}

OracleResult solve_linear_ne(const Game& game) {
    if (!game.is_linear()) {
        throw std::invalid_argument("direct solve needs a game with affine pseudo-gradient");
    }
    const std::size_t n = game.total_dim();
    const Vector zero(n, 0.0);
    const Vector f0 = pseudo_gradient(game, zero);
    // Unit central differences are exact for affine F up to rounding.
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Vector probe = zero;
    for (std::size_t k = 0; k < n; ++k) {
        probe[k] = 1.0;
        const Vector up = pseudo_gradient(game, probe);
        probe[k] = -1.0;
        const Vector down = pseudo_gradient(game, probe);
        probe[k] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = 0.5 * (up[r] - down[r]);
        }
    }
    OracleResult out;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) {
        out.message = "constant Jacobian is singular";
        out.x_star = zero;
        out.residual = residual_norm(f0);
        return out;
    }
    const Eigen::VectorXd sol = lu.solve(-as_eigen(f0));
    out.x_star.assign(sol.data(), sol.data() + sol.size());
    out.residual = residual_norm(pseudo_gradient(game, out.x_star));
    out.iterations = 1;
    out.converged = true;
    return out;
}

VerificationReport verify_against_oracle(const RunRecord& record, const OracleResult& oracle,
                                         double tol) {
    if (!oracle.converged) {
        throw std::invalid_argument("cannot verify against a non-converged oracle");
    }
    if (record.size() == 0) throw std::invalid_argument("empty run record");
    if (oracle.x_star.size() != record.dim) {
        throw DimensionError("oracle profile does not match the record");
    }
    VerificationReport r;
    r.tol = tol;
    const EstimateState last = record.final_state();
    r.consensus_residual = consensus_residual(last);
    for (std::size_t i = 0; i < last.players(); ++i) {
        const double d = std::sqrt(kernels::squared_distance(last.block(i), oracle.x_star));
        r.block_distances.push_back(d);
        r.max_distance = std::max(r.max_distance, d);
    }
    r.consensus_ok = r.consensus_residual <= tol;
    r.stationarity_ok = r.max_distance <= tol;
    r.passed = r.consensus_ok && r.stationarity_ok;
    return r;
}

}  // namespace ptnash
