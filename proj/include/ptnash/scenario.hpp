#pragma once

// Scenario files: YAML with sections game / topology / seeker / init / run /
// verify / check / output. The README documents every key; unknown keys are
// rejected so typos surface as errors rather than silent defaults.

#include "ptnash/dynamics.hpp"
#include "ptnash/game.hpp"
#include "ptnash/games.hpp"
#include "ptnash/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptnash {

// Parse or validation failure. what() carries "<source>:<line>:<col>: <field>: <reason>"
// when a position is known.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GameSpec {
    std::string name = "energy";
    GameParameters params;
    std::optional<Vector> reference_ne;  // externally reported profile to compare with
};

struct GraphSpec {
    std::string preset;       // "cycle", "complete", or empty for explicit edges
    double weight = 1.0;      // preset edge weight
    std::vector<Edge> edges;  // explicit edges (preset empty)
};

struct TopologySpec {
    enum class Mode { Fixed, Switching };
    Mode mode = Mode::Fixed;
    // Fixed: exactly one graph (default: the N-cycle). Switching: default is
    // the four-piece cycle partition.
    std::vector<GraphSpec> graphs;
    enum class Signal { Periodic, Aperiodic };
    Signal signal = Signal::Periodic;
    double period = 0.4;
    std::vector<PeriodicEntry> periodic;  // default: equal quarters, graphs 0..3
    std::vector<SignalEntry> aperiodic;
    std::optional<double> window;         // joint-connectivity window (default: period)
};

struct InitSpec {
    enum class Mode { OwnOthers, Blocks, Random };
    Mode mode = Mode::OwnOthers;
    Vector own;                 // length n: player i's own coordinates come from here
    Vector others;              // length n - n_i: remaining coordinates, ascending
    std::vector<Vector> blocks; // N blocks of length n
    std::uint64_t seed = 1;
    double scale = 1.0;
    double radius = 20.0;       // entries uniform in [-radius, radius] * scale
};

struct CheckSpec {
    double box_lower = -20.0;
    double box_upper = 20.0;
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
};

struct Scenario {
    std::string name = "scenario";
    std::string source;  // file path, or "<string>"
    GameSpec game;
    TopologySpec topology;
    SeekerConfig seeker;
    InitSpec init;
    double horizon = 0.0;
    double sample_dt = 0.01;
    double relative_tol = 1e-2;  // verification tolerance, relative to |x*|
    CheckSpec check;
    std::string output_dir;      // default "out/<name>"
};

// Parses YAML text; `source` labels diagnostics. Throws ScenarioError.
[[nodiscard]] Scenario parse_scenario(const std::string& text,
                                      const std::string& source = "<string>");
// Reads and parses a file. The default name is the file stem.
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

// Fully defaulted YAML rendering; parse_scenario(to_yaml(s)) reproduces s.
[[nodiscard]] std::string to_yaml(const Scenario& scn);
// FNV-1a 64 of to_yaml, as 16 hex digits.
[[nodiscard]] std::string scenario_hash(const Scenario& scn);

// Builders. Each validates against the game and throws ScenarioError with
// the offending field.
[[nodiscard]] Game build_game(const Scenario& scn);
[[nodiscard]] TopologySchedule build_topology(const Scenario& scn, std::size_t players);
[[nodiscard]] EstimateState build_initial_state(const Scenario& scn, const Game& game);
// Joint-connectivity window: explicit, else the period, else the horizon.
[[nodiscard]] double connectivity_window(const Scenario& scn);

}  // namespace ptnash
