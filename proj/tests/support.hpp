#pragma once

// Shared fixtures: bundled-game builders, the reference initial state and
// scenario lookup.

#include "ptnash/dynamics.hpp"
#include "ptnash/games.hpp"
#include "ptnash/graph.hpp"
#include "ptnash/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace fixture {

inline const ptnash::Vector kEnergyNe{2.0147, 6.7766, 11.5385, 16.3004, 21.0623};
inline const ptnash::Vector kExample2Oracle{-3.386294361119891, 1.386294361119891, 0.0, -0.5, 2.5};
inline const ptnash::Vector kExample2Printed{-4.6589, 4.1589, 0.0, -2.0, 2.5};

inline ptnash::Game energy() {
    return ptnash::make_energy_game({{1.0}, {10, 15, 20, 25, 30}, 0.1, 10.0});
}

// Own actions (-2, ..., -10); the other four slots take 15, 10, 5, 0 in
// ascending j, skipping j = i.
inline ptnash::EstimateState paper_initial_state() {
    const double own[] = {-2, -4, -6, -8, -10};
    const double others[] = {15, 10, 5, 0};
    std::vector<ptnash::Vector> blocks(5, ptnash::Vector(5));
    for (std::size_t i = 0; i < 5; ++i) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < 5; ++j) blocks[i][j] = (i == j) ? own[i] : others[k++];
    }
    return ptnash::EstimateState::from_blocks(blocks);
}

inline std::filesystem::path scenario_path(const std::string& name) {
    return std::filesystem::path(PTNASH_SCENARIO_DIR) / (name + ".scn");
}

inline ptnash::Scenario scenario(const std::string& name) {
    return ptnash::load_scenario(scenario_path(name));
}

inline ptnash::Vector random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    ptnash::Vector v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

inline double norm(const ptnash::Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double distance(const ptnash::Vector& a, const ptnash::Vector& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

inline double max_abs_diff(const ptnash::Vector& a, const ptnash::Vector& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace fixture
