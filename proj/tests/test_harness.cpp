#include "ptnash/harness.hpp"
#include "support.hpp"

#include <json.hpp>
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ptnash;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

const char* kMinimal = R"(
game:
  name: energy
  params: {a: 1, b: [10, 15, 20, 25, 30], c: 0.1, d: 10}
seeker:
  variant: static
  T: 1.2
  c: 20
  kappa: 2
run:
  horizon: 2.2
)";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::filesystem::path scratch_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("ptnash_test_" + tag);
    std::filesystem::remove_all(p);
    return p;
}

std::string parse_error(const std::string& text) {
    try {
        (void)parse_scenario(text, "case.scn");
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("bundled static scenario pins the reference parameters", "[scenario]") {
    const auto s = fixture::scenario("energy_static");
    CHECK(s.name == "energy_static");
    CHECK(s.seeker.variant == Variant::StaticGain);
    CHECK(s.seeker.prescribed_time.value() == 1.2);
    CHECK(s.seeker.post_gain == 20.0);
    CHECK(s.seeker.kappa == 2.0);
    const auto g = build_game(s);
    const auto topo = build_topology(s, g.player_count());
    CHECK_FALSE(topo.is_switching());
    CHECK(topo.graphs().front().adjacency() == cycle_graph(5).adjacency());
    CHECK(build_initial_state(s, g).stacked().size() == 25);
    const auto x0 = build_initial_state(s, g);
    const auto ref = fixture::paper_initial_state();
    CHECK(std::equal(x0.stacked().begin(), x0.stacked().end(), ref.stacked().begin()));
}

TEST_CASE("bundled switching scenario", "[scenario]") {
    const auto s = fixture::scenario("energy_switching");
    const auto topo = build_topology(s, 5);
    CHECK(topo.is_switching());
    CHECK(topo.period().value() == 0.4);
    CHECK(topo.graphs().size() == 4);
    CHECK(connectivity_window(s) == 0.4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(topo.graphs()[k].adjacency() == cycle_partition(5)[k].adjacency());
    }
}

TEST_CASE("defaults for an unspecified topology and initial state", "[scenario]") {
    const auto s = parse_scenario(kMinimal);
    const auto g = build_game(s);
    CHECK(build_topology(s, 5).graphs().front().adjacency() == cycle_graph(5).adjacency());
    const auto x0 = build_initial_state(s, g);
    const auto ref = fixture::paper_initial_state();
    CHECK(std::equal(x0.stacked().begin(), x0.stacked().end(), ref.stacked().begin()));
    CHECK(s.sample_dt == 0.01);
    CHECK(s.relative_tol == 0.01);
    CHECK(s.seeker.s_max == 18.0);
    CHECK(s.seeker.ds == 1e-3);
    CHECK(s.output_dir == "out/scenario");
}

TEST_CASE("parse diagnostics", "[scenario]") {
    std::string t = kMinimal;
    t.replace(t.find("  T: 1.2\n"), 9, "");
    CHECK_THAT(parse_error(t), ContainsSubstring("seeker.T") && ContainsSubstring("required"));

    t = kMinimal;
    t.replace(t.find("  kappa: 2"), 10, "  kapa: 2");
    const auto unknown = parse_error(t);
    CHECK_THAT(unknown, ContainsSubstring("case.scn:9:3:") && ContainsSubstring("seeker.kapa") &&
                            ContainsSubstring("unknown key"));

    t = kMinimal;
    t.replace(t.find("kappa: 2"), 8, "kappa: two");
    CHECK_THAT(parse_error(t), ContainsSubstring("seeker.kappa") && ContainsSubstring("expected a number"));

    t = kMinimal;
    t.replace(t.find("run:\n  horizon: 2.2\n"), 20, "");
    CHECK_THAT(parse_error(t), ContainsSubstring("run.horizon"));

    CHECK_THAT(parse_error("game: [1, 2"), ContainsSubstring("case.scn"));
    CHECK_THAT(parse_error(std::string(kMinimal) + "extra: 1\n"), ContainsSubstring("unknown key"));
}

TEST_CASE("builder validation names the field", "[scenario]") {
    std::string t = std::string(kMinimal) + "init:\n  own: [1, 2]\n  others: [1, 2, 3, 4]\n";
    const auto s = parse_scenario(t);
    CHECK_THROWS_WITH(build_initial_state(s, build_game(s)), ContainsSubstring("init.own"));

    t = std::string(kMinimal) +
        "topology:\n  mode: switching\n  graphs:\n    - preset: cycle\n  schedule:\n    kind: periodic\n"
        "    period: 0.4\n    entries: [[1.0, 3]]\n";
    const auto sw = parse_scenario(t);
    CHECK_THROWS_AS(build_topology(sw, 5), ScenarioError);
    CHECK_THROWS_AS(load_scenario(fixture::scenario_path("does_not_exist")), ScenarioError);
}

TEST_CASE("full rendering round-trips", "[scenario]") {
    for (const char* name : {"energy_static", "energy_adaptive", "energy_switching",
                             "nonquadratic_switching", "baseline_k1", "baseline_k10",
                             "energy_static_T06"}) {
        INFO(name);
        const auto s = fixture::scenario(name);
        const auto text = to_yaml(s);
        const auto back = parse_scenario(text);
        CHECK(to_yaml(back) == text);
        CHECK(scenario_hash(back) == scenario_hash(s));
    }
    auto a = fixture::scenario("energy_static");
    const auto h = scenario_hash(a);
    CHECK(h.size() == 16);
    a.seeker.kappa = 3.0;
    CHECK(scenario_hash(a) != h);
}

TEST_CASE("oracle report and reference comparison", "[harness]") {
    const auto game = build_game(fixture::scenario("energy_static"));
    const auto rep = compute_oracle(game);
    REQUIRE(rep.newton.converged);
    REQUIRE(rep.direct_distance.has_value());
    CHECK(*rep.direct_distance <= 1e-10);
    const auto cmp = compare_reference(game, fixture::kEnergyNe, rep.newton.x_star);
    CHECK(cmp.agrees);

    const auto e2 = make_nonquadratic_game();
    const auto o2 = compute_oracle(e2);
    const auto c2 = compare_reference(e2, fixture::kExample2Printed, o2.newton.x_star);
    CHECK_FALSE(c2.stationary);
    CHECK_FALSE(c2.agrees);
    CHECK(c2.worst_component == 3);
    CHECK(c2.difference[3] == Approx(1.5).epsilon(1e-9));
    CHECK_THAT(c2.explanation, ContainsSubstring("x_4"));
}

TEST_CASE("run writes every output file", "[harness]") {
    const auto dir = scratch_dir("run");
    const auto r = run_scenario(fixture::scenario("energy_adaptive"), {true, dir});
    CHECK(r.verification.passed);
    REQUIRE(std::filesystem::exists(dir / "trajectory.csv"));
    REQUIRE(std::filesystem::exists(dir / "gains.csv"));
    REQUIRE(std::filesystem::exists(dir / "summary.json"));
    REQUIRE(std::filesystem::exists(dir / "scenario.yaml"));

    std::istringstream csv(slurp(dir / "trajectory.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header.rfind("t,x[0][0],x[0][1]", 0) == 0);
    CHECK_THAT(header, ContainsSubstring("x[4][4],rel_error,consensus_residual,u_norm,lyapunov"));
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == r.record.size());

    std::istringstream gains(slurp(dir / "gains.csv"));
    std::getline(gains, header);
    CHECK(header == "t,k[0-1],k[0-4],k[1-2],k[2-3],k[3-4]");

    const auto js = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(js["verification"]["passed"] == true);
    CHECK(js["convergence_time"].size() == 3);
    CHECK(js["oracle"]["x_star"].size() == 5);
    CHECK(js["scenario_hash"] == r.hash);
    CHECK(parse_scenario(slurp(dir / "scenario.yaml")).seeker.variant == Variant::Adaptive);
    std::filesystem::remove_all(dir);
}

TEST_CASE("identical scenarios give bit-identical files", "[harness]") {
    const auto a = scratch_dir("det_a");
    const auto b = scratch_dir("det_b");
    auto s = fixture::scenario("energy_switching");
    s.init.mode = InitSpec::Mode::Random;
    s.init.seed = 99;
    const auto ra = run_scenario(s, {true, a});
    const auto rb = run_scenario(s, {true, b});
    CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
    CHECK(slurp(a / "gains.csv") == slurp(b / "gains.csv"));
    CHECK(ra.record.seed == 99);
    for (std::size_t k = 0; k < ra.convergence.size(); ++k) {
        CHECK(ra.convergence[k].time == rb.convergence[k].time);
    }
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST_CASE("zero-horizon run reports the initial error only", "[harness]") {
    auto s = parse_scenario(kMinimal);
    s.horizon = 0.0;
    const auto r = run_scenario(s, {false, std::nullopt});
    REQUIRE(r.record.size() == 1);
    CHECK(r.record.times.front() == 0.0);
    CHECK(r.terminal_error == r.record.rel_error.front());
    CHECK(r.terminal_error > 0.1);
    CHECK_FALSE(r.error_at_T.has_value());
    CHECK_FALSE(r.verification.passed);
    const auto js = nlohmann::json::parse(summary_json(r));
    CHECK(js["terminal_error"].get<double>() == r.terminal_error);
}

TEST_CASE("compare orders and validates", "[harness]") {
    const auto a = fixture::scenario("energy_static");
    auto b = a;
    b.name = "energy_static_copy";
    const auto same = compare({a, b});
    REQUIRE(same.rows.size() == 2);
    REQUIRE(same.rows[0].time.has_value());
    CHECK(std::abs(*same.rows[0].time - *same.rows[1].time) <= a.sample_dt);

    auto other = a;
    other.game.params["d"] = {11.0};
    CHECK_THROWS_AS(compare({a, other}), std::invalid_argument);
    auto moved = a;
    moved.init.own[0] = 0.0;
    CHECK_THROWS_AS(compare({a, moved}), std::invalid_argument);
    CHECK_THROWS_AS(compare({a}), std::invalid_argument);

    const auto t = compare({a, fixture::scenario("energy_static_T06")});
    REQUIRE(t.rows[0].time.has_value());
    REQUIRE(t.rows[1].time.has_value());
    CHECK(t.rows[0].name == "energy_static_T06");
    CHECK(*t.rows[0].time <= 0.6 + 1e-9);
    CHECK(*t.rows[0].time > 0.3);
    CHECK(*t.rows[1].time <= 1.2 + 1e-9);
    CHECK(*t.rows[1].time > 0.6);
    CHECK_THAT(comparison_csv(t), ContainsSubstring("scenario,variant,kappa,c,T,convergence_time"));
}

TEST_CASE("sweep from the zero state", "[harness]") {
    const auto rep = sweep_initial_conditions(fixture::scenario("energy_static"), 1, {0.0}, 1);
    REQUIRE(rep.scales.size() == 1);
    REQUIRE(rep.scales[0].max_error_at_T.has_value());
    CHECK(*rep.scales[0].max_error_at_T <= 1e-2);
    CHECK_THROWS(sweep_initial_conditions(fixture::scenario("energy_static"), 0, {1.0}, 1));
}

TEST_CASE("assumption diagnostics", "[harness]") {
    const auto fixed = check_assumptions(fixture::scenario("energy_static"));
    REQUIRE(fixed.graphs.size() == 1);
    CHECK(fixed.graphs[0].connected);
    CHECK(fixed.graphs[0].lambda2 == Approx(1.381966011250105).epsilon(1e-9));
    CHECK(fixed.strongly_monotone);
    REQUIRE(fixed.certificate.has_value());
    CHECK_FALSE(fixed.certificate->satisfied);

    const auto sw = check_assumptions(fixture::scenario("energy_switching"));
    CHECK(sw.switching);
    REQUIRE(sw.graphs.size() == 4);
    for (const auto& g : sw.graphs) {
        CHECK_FALSE(g.connected);
        CHECK(g.lambda2 < 1e-10);
    }
    CHECK(sw.joint.jointly_connected);
    CHECK(sw.union_lambda2 > 1.0);

    const auto e2 = check_assumptions(fixture::scenario("nonquadratic_switching"));
    CHECK_FALSE(e2.strongly_monotone);
    bool flagged = false;
    for (const auto& n : e2.notes) flagged = flagged || n.find("strong monotonicity not verified") != std::string::npos;
    CHECK(flagged);
    CHECK_THAT(render_assumptions(e2), ContainsSubstring("strong monotonicity not verified"));
}

TEST_CASE("every bundled scenario loads, runs and passes", "[harness]") {
    for (const auto& entry : std::filesystem::directory_iterator(PTNASH_SCENARIO_DIR)) {
        if (entry.path().extension() != ".scn") continue;
        INFO(entry.path().filename().string());
        const auto r = run_scenario(load_scenario(entry.path()), {false, std::nullopt});
        CHECK_FALSE(r.record.aborted);
        CHECK(r.verification.passed);
    }
}
