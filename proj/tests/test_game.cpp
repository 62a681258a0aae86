#include "ptnash/game.hpp"
#include "ptnash/games.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace ptnash;
using Catch::Approx;

TEST_CASE("energy cost by hand", "[game]") {
    const auto g = fixture::energy();
    const Vector x{10, 15, 20, 25, 30};
    CHECK(eval_cost(g, 0, x) == Approx(200.0).epsilon(1e-15));
}

TEST_CASE("quadratic game vanishes at its targets", "[game]") {
    const auto g = make_energy_game({{1.0}, {1, 2, 3}, 0.0, 0.0});
    const Vector x{1, 2, 3};
    for (std::size_t i = 0; i < 3; ++i) CHECK(eval_cost(g, i, x) == 0.0);
}

TEST_CASE("example 2 cost by hand", "[game]") {
    const auto g = make_nonquadratic_game();
    const Vector x{1, 0, 0, 0, 0};
    CHECK(eval_cost(g, 2, x) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("energy partial gradient: closed form", "[game]") {
    const auto g = fixture::energy();
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        const auto x = fixture::random_vector(rng, 5, -10, 10);
        double sum = 0.0;
        for (double v : x) sum += v;
        const auto grad = partial_gradient(g, 0, x);
        CHECK(grad[0] == Approx(2 * (x[0] - 10) + 0.1 * sum + 0.1 * x[0] + 10).epsilon(1e-12));
    }
}

TEST_CASE("gradients at published and oracle equilibria", "[game]") {
    const auto g = fixture::energy();
    CHECK(std::abs(partial_gradient(g, 0, fixture::kEnergyNe)[0]) <= 2e-3);
    CHECK(fixture::norm(pseudo_gradient(g, fixture::kEnergyNe)) <= 5e-3);

    const auto e2 = make_nonquadratic_game();
    Vector x{0.3, -1.0, 2.0, 0.7, 2.5};
    CHECK(std::abs(partial_gradient(e2, 4, x)[0]) <= 1e-15);
}

TEST_CASE("energy pseudo-gradient at the origin", "[game]") {
    const auto g = fixture::energy();
    const auto f = pseudo_gradient(g, Vector(5, 0.0));
    const Vector expected{-10, -20, -30, -40, -50};
    for (std::size_t i = 0; i < 5; ++i) CHECK(f[i] == Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("single-player identity game", "[game]") {
    Player p;
    p.cost = [](std::span<const double> x) { return 0.5 * x[0] * x[0]; };
    p.gradient = [](std::span<const double> x, std::span<double> out) { out[0] = x[0]; };
    const Game g("identity", {p});
    CHECK(pseudo_gradient(g, Vector{0.0})[0] == 0.0);
    CHECK(pseudo_gradient(g, Vector{3.5})[0] == 3.5);
}

TEST_CASE("argument checks", "[game]") {
    const auto g = fixture::energy();
    CHECK_THROWS_AS(eval_cost(g, 5, Vector(5, 0.0)), IndexError);
    CHECK_THROWS_AS(eval_cost(g, 0, Vector(4, 0.0)), DimensionError);
    CHECK_THROWS_AS(pseudo_gradient(g, Vector(6, 0.0)), DimensionError);
    CHECK_THROWS(make_game("no-such-game", {}));
}

TEST_CASE("analytic gradients match central differences (100 random points)", "[game][hygiene]") {
    std::mt19937_64 rng(2024);
    for (const auto& g : {fixture::energy(), make_nonquadratic_game()}) {
        INFO(g.name());
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const auto x = fixture::random_vector(rng, g.total_dim(), -10, 10);
            for (std::size_t i = 0; i < g.player_count(); ++i) {
                REQUIRE(g.has_analytic_gradient(i));
                Vector a(g.action_dim(i)), fd(g.action_dim(i));
                g.gradient(i, x, a);
                g.finite_difference_gradient(i, x, fd);
                for (std::size_t c = 0; c < a.size(); ++c) {
                    worst = std::max(worst, std::abs(a[c] - fd[c]) / std::max(1.0, std::abs(a[c])));
                }
            }
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("finite differences stand in for a missing gradient", "[game]") {
    Player p;
    p.cost = [](std::span<const double> x) { return std::cos(x[0]) + x[0] * x[1]; };
    Player q;
    q.cost = [](std::span<const double> x) { return x[1] * x[1] * x[1]; };
    const Game g("fd", {p, q});
    CHECK_FALSE(g.has_analytic_gradient(0));
    const Vector x{0.4, 2.0};
    CHECK(partial_gradient(g, 0, x)[0] == Approx(-std::sin(0.4) + 2.0).epsilon(1e-8));
    CHECK(partial_gradient(g, 1, x)[0] == Approx(12.0).epsilon(1e-8));
}

TEST_CASE("selection matrix algebra", "[game]") {
    std::mt19937_64 rng(3);
    const SelectionMatrix r(1, 2, 3, 7);
    const auto g = fixture::random_vector(rng, 3, -1, 1);
    CHECK(r.apply(r.embed(g)) == g);
    const auto v = fixture::random_vector(rng, 7, -1, 1);
    const auto p = r.embed(r.apply(v));
    for (std::size_t k = 0; k < 7; ++k) {
        if (k >= 2 && k < 5) CHECK(p[k] == v[k]);
        else CHECK(p[k] == 0.0);
    }
}

TEST_CASE("estimate state blocks round-trip", "[game]") {
    std::vector<Vector> blocks{{1, 2}, {3, 4}, {5, 6}};
    const auto s = EstimateState::from_blocks(blocks);
    CHECK(s.size() == 6);
    CHECK(s.blocks() == blocks);
    CHECK(EstimateState::from_blocks(s.blocks()).blocks() == blocks);
    CHECK(s.average() == Vector{3, 4});
    CHECK_THROWS(EstimateState(3, 2, Vector(5, 0.0)));
}

TEST_CASE("extended pseudo-gradient: decoupled quadratic by hand", "[game]") {
    Player p;
    p.cost = [](std::span<const double> x) { return 0.5 * x[0] * x[0]; };
    p.gradient = [](std::span<const double> x, std::span<double> out) { out[0] = x[0]; };
    Player q;
    q.cost = [](std::span<const double> x) { return 0.5 * x[1] * x[1]; };
    q.gradient = [](std::span<const double> x, std::span<double> out) { out[0] = x[1]; };
    const Game g("decoupled", {p, q});
    const auto s = EstimateState::from_blocks({{1, 7}, {9, 2}});
    CHECK(extended_pseudo_gradient(g, s) == Vector{1, 0, 0, 2});
}

TEST_CASE("extended pseudo-gradient on consensus and heterogeneous states", "[game]") {
    const auto g = fixture::energy();
    const auto eq = extended_pseudo_gradient(g, EstimateState::consensus(5, fixture::kEnergyNe));
    for (std::size_t i = 0; i < 5; ++i) {
        double n = 0.0;
        for (std::size_t k = 0; k < 5; ++k) n += eq[i * 5 + k] * eq[i * 5 + k];
        CHECK(std::sqrt(n) <= 5e-3);
    }

    std::mt19937_64 rng(11);
    const auto y = fixture::random_vector(rng, 5, -10, 10);
    const auto ext = extended_pseudo_gradient(g, EstimateState::consensus(5, y));
    const auto f = pseudo_gradient(g, y);
    Vector folded(5, 0.0);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t k = 0; k < 5; ++k) folded[k] += ext[i * 5 + k];
    CHECK(fixture::max_abs_diff(folded, f) <= 1e-12);

    const auto het = fixture::paper_initial_state();
    const auto e = extended_pseudo_gradient(g, het);
    for (std::size_t i = 0; i < 5; ++i) {
        Vector block(het.block(i).begin(), het.block(i).end());
        Vector fd(1);
        g.finite_difference_gradient(i, block, fd);
        CHECK(e[i * 5 + i] == Approx(fd[0]).epsilon(1e-6));
        for (std::size_t k = 0; k < 5; ++k)
            if (k != i) CHECK(e[i * 5 + k] == 0.0);
    }
}

TEST_CASE("regularity envelopes", "[game]") {
    const auto box = Box::uniform(5, -20, 20);
    const auto energy = estimate_regularity_constants(fixture::energy(), 2000, box, 1);
    CHECK(energy.monotonicity >= 1.9);
    CHECK(energy.lipschitz <= 2.6 + 1e-9);
    CHECK(energy.monotonicity >= 2.1 - 1e-9);  // symmetric-part eigenvalues 2.1 (x4), 2.6

    Player p;
    p.cost = [](std::span<const double> x) { return 0.5 * x[0] * x[0]; };
    p.gradient = [](std::span<const double> x, std::span<double> out) { out[0] = x[0]; };
    Player q = p;
    q.cost = [](std::span<const double> x) { return 0.5 * x[1] * x[1]; };
    q.gradient = [](std::span<const double> x, std::span<double> out) { out[0] = x[1]; };
    const auto id = estimate_regularity_constants(Game("id", {p, q}), 200, Box::uniform(2, -1, 1), 5);
    CHECK(id.monotonicity == Approx(1.0).epsilon(1e-12));
    CHECK(id.lipschitz == Approx(1.0).epsilon(1e-12));

    const auto e2 = estimate_regularity_constants(make_nonquadratic_game(), 2000,
                                                  Box::uniform(5, -5, 5), 1);
    CHECK(std::isfinite(e2.monotonicity));
    CHECK(e2.lipschitz > 0.0);

    CHECK_THROWS(estimate_regularity_constants(fixture::energy(), 1, box, 1));
    CHECK_THROWS(estimate_regularity_constants(fixture::energy(), 10, Box::uniform(5, 1, 1), 1));
}

TEST_CASE("equilibrium profile test", "[game]") {
    const auto g = fixture::energy();
    CHECK(is_equilibrium_profile(g, EstimateState::consensus(5, fixture::kEnergyNe), 1e-2).is_equilibrium);

    auto split = EstimateState::consensus(5, fixture::kEnergyNe);
    split.block(1)[0] += 1.0;
    const auto r = is_equilibrium_profile(g, split, 1e-2);
    CHECK_FALSE(r.is_equilibrium);
    CHECK(r.consensus_residual == Approx(1.0));

    const auto e2 = make_nonquadratic_game();
    CHECK(is_equilibrium_profile(e2, EstimateState::consensus(5, fixture::kExample2Oracle), 1e-4)
              .is_equilibrium);
}
