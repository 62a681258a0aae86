#include "ptnash/games.hpp"

#include <cmath>
#include <stdexcept>

namespace ptnash {

namespace {

double sum_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

double scalar_param(const GameParameters& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (it->second.size() != 1) {
        throw std::invalid_argument("game parameter '" + key + "' must be a scalar");
    }
    return it->second.front();
}

}  // namespace

Game make_energy_game(const EnergyGameParams& params) {
    const std::size_t n = params.b.size();
    if (n == 0) {
        throw std::invalid_argument("energy game: b must list one value per player");
    }
    Vector a = params.a.empty() ? Vector{1.0} : params.a;
    if (a.size() == 1) a.assign(n, a.front());
    if (a.size() != n) {
        throw std::invalid_argument("energy game: a must have length 1 or N");
    }
    for (double ai : a) {
        if (!(ai > 0.0)) throw std::invalid_argument("energy game: a_i must be positive");
    }

    const double c = params.c;
    const double d = params.d;
    std::vector<Player> players;
    players.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = a[i];
        const double bi = params.b[i];
        Player p;
        p.action_dim = 1;
        p.cost = [=](std::span<const double> x) {
            const double dev = x[i] - bi;
            return ai * dev * dev + (c * sum_of(x) + d) * x[i];
        };
        p.gradient = [=](std::span<const double> x, std::span<double> out) {
            out[0] = 2.0 * ai * (x[i] - bi) + c * sum_of(x) + d + c * x[i];
        };
        players.push_back(std::move(p));
    }
    return Game("energy", std::move(players), /*linear_pseudo_gradient=*/true);
}

Game make_nonquadratic_game() {
    std::vector<Player> players(5);
    players[0].cost = [](std::span<const double> x) {
        return 0.5 * x[0] * x[0] + x[0] * (x[1] + x[2] + x[3] + x[4]);
    };
    players[0].gradient = [](std::span<const double> x, std::span<double> out) {
        out[0] = x[0] + x[1] + x[2] + x[3] + x[4];
    };

    players[1].cost = [](std::span<const double> x) {
        return 0.5 * std::exp(0.5 * x[1]) + x[1] * x[3];
    };
    players[1].gradient = [](std::span<const double> x, std::span<double> out) {
        out[0] = 0.25 * std::exp(0.5 * x[1]) + x[3];
    };

    players[2].cost = [](std::span<const double> x) {
        return 0.5 * x[2] * x[2] + x[0] * x[0] * x[0];
    };
    players[2].gradient = [](std::span<const double> x, std::span<double> out) {
        out[0] = x[2];
    };

    // ln(e^{x_4}) is evaluated as x_4 to stay finite for large arguments.
    players[3].cost = [](std::span<const double> x) {
        return x[3] + x[3] * x[3] + x[2] * x[2] * x[2];
    };
    players[3].gradient = [](std::span<const double> x, std::span<double> out) {
        out[0] = 1.0 + 2.0 * x[3];
    };

    players[4].cost = [](std::span<const double> x) {
        const double x4sq = x[3] * x[3];
        return x[4] * x[4] - 5.0 * x[4] + x[0] * x[0] * x[0] * x[1] + x[2] * x4sq * x4sq;
    };
    players[4].gradient = [](std::span<const double> x, std::span<double> out) {
        out[0] = 2.0 * x[4] - 5.0;
    };
    return Game("nonquadratic", std::move(players));
}

Game make_quadratic_game(const std::vector<Vector>& matrix, const Vector& offset) {
    const std::size_t n = offset.size();
    if (n == 0 || matrix.size() != n) {
        throw std::invalid_argument("quadratic game: matrix must be n x n with n = offset size");
    }
    for (const auto& row : matrix) {
        if (row.size() != n) {
            throw std::invalid_argument("quadratic game: matrix rows must have length n");
        }
    }
    std::vector<Player> players;
    players.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector row = matrix[i];
        const double qi = offset[i];
        Player p;
        p.cost = [=](std::span<const double> x) {
            double cross = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) cross += row[j] * x[j];
            }
            return 0.5 * row[i] * x[i] * x[i] + x[i] * cross + qi * x[i];
        };
        p.gradient = [=](std::span<const double> x, std::span<double> out) {
            double g = qi;
            for (std::size_t j = 0; j < n; ++j) g += row[j] * x[j];
            out[0] = g;
        };
        players.push_back(std::move(p));
    }
    return Game("quadratic", std::move(players), /*linear_pseudo_gradient=*/true);
}

Game make_game(const std::string& name, const GameParameters& params) {
    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, _] : params) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || key == a;
            if (!ok) {
                throw std::invalid_argument("game '" + name + "' has no parameter '" + key + "'");
            }
        }
    };

    if (name == "energy") {
        reject_unknown({"a", "b", "c", "d"});
        EnergyGameParams p;
        if (auto it = params.find("a"); it != params.end()) p.a = it->second;
        if (auto it = params.find("b"); it != params.end()) {
            p.b = it->second;
        } else {
            p.b = {10.0, 15.0, 20.0, 25.0, 30.0};
        }
        p.c = scalar_param(params, "c", 0.1);
        p.d = scalar_param(params, "d", 10.0);
        return make_energy_game(p);
    }
    if (name == "nonquadratic") {
        reject_unknown({});
        return make_nonquadratic_game();
    }
    if (name == "quadratic") {
        reject_unknown({"matrix", "offset"});
        auto m = params.find("matrix");
        auto q = params.find("offset");
        if (m == params.end() || q == params.end()) {
            throw std::invalid_argument("quadratic game needs 'matrix' and 'offset'");
        }
        const std::size_t n = q->second.size();
        if (m->second.size() != n * n) {
            throw std::invalid_argument("quadratic game: matrix must have n*n entries");
        }
        std::vector<Vector> rows(n, Vector(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) rows[i][j] = m->second[i * n + j];
        }
        return make_quadratic_game(rows, q->second);
    }
    throw std::invalid_argument("unknown game '" + name + "'");
}

std::vector<std::string> registered_games() { return {"energy", "nonquadratic", "quadratic"}; }

}  // namespace ptnash
