// ptnash: run, compare, sweep and inspect Nash-seeking scenarios.
// Exit status: 0 pass, 2 verification failure, 1 error.

#include "ptnash/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace {

struct Overrides {
    std::optional<std::string> out_dir;
    std::optional<double> ds;
    std::optional<double> s_max;
    std::optional<double> sample_dt;
};

ptnash::Scenario load(const std::string& path, const Overrides& o) {
    ptnash::Scenario scn = ptnash::load_scenario(path);
    if (o.ds) scn.seeker.ds = *o.ds;
    if (o.s_max) scn.seeker.s_max = *o.s_max;
    if (o.sample_dt) {
        if (!(*o.sample_dt > 0.0)) throw std::invalid_argument("--sample-dt must be positive");
        scn.sample_dt = *o.sample_dt;
    }
    if (o.out_dir) scn.output_dir = (std::filesystem::path(*o.out_dir) / scn.name).string();
    scn.seeker.validate();
    return scn;
}

std::filesystem::path base_dir(const Overrides& o) {
    return o.out_dir ? std::filesystem::path(*o.out_dir) : std::filesystem::path("out");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prescribed-time Nash equilibrium seeking over networks"};
    app.require_subcommand(1);
    Overrides o;
    app.add_option("--out-dir", o.out_dir, "Output base directory (runs go to <dir>/<name>)");
    app.add_option("--ds", o.ds, "s-domain step");
    app.add_option("--s-max", o.s_max, "s-domain horizon");
    app.add_option("--sample-dt", o.sample_dt, "Sampling interval in t-units");

    std::string scenario;
    std::vector<std::string> scenarios;

    auto* run = app.add_subcommand("run", "Run a scenario, verify against the oracle, write outputs");
    run->add_option("scenario", scenario, "Scenario file")->required();
    run->fallthrough();

    double threshold = 1e-2;
    auto* cmp = app.add_subcommand("compare", "Convergence-time table over several scenarios");
    cmp->add_option("scenarios", scenarios, "Scenario files (>= 2)")->required()->expected(2, -1);
    cmp->add_option("--threshold", threshold, "Relative-error threshold")->capture_default_str();
    cmp->fallthrough();

    std::size_t count = 20;
    std::vector<double> scales{1.0, 10.0, 100.0};
    std::uint64_t seed = 1;
    auto* sweep = app.add_subcommand("sweep", "Random initial conditions at several scales");
    sweep->add_option("scenario", scenario, "Scenario file")->required();
    sweep->add_option("--count", count, "Runs per scale")->capture_default_str();
    sweep->add_option("--scales", scales, "Initial-condition scales")->delimiter(',');
    sweep->add_option("--seed", seed, "Base seed")->capture_default_str();
    sweep->fallthrough();

    auto* orc = app.add_subcommand("oracle", "Solve F(x) = 0 for the scenario's game");
    orc->add_option("scenario", scenario, "Scenario file")->required();
    orc->fallthrough();

    auto* chk = app.add_subcommand("check", "Connectivity, regularity and gain diagnostics");
    chk->add_option("scenario", scenario, "Scenario file")->required();
    chk->fallthrough();

    auto* show = app.add_subcommand("show", "Print the scenario with every default filled in");
    show->add_option("scenario", scenario, "Scenario file")->required();
    show->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto scn = load(scenario, o);
            const auto r = ptnash::run_scenario(scn);
            std::cout << ptnash::render_run(r);
            return r.verification.passed && !r.record.aborted ? 0 : 2;
        }
        if (*cmp) {
            std::vector<ptnash::Scenario> list;
            for (const auto& s : scenarios) list.push_back(load(s, o));
            const auto table = ptnash::compare(list, threshold);
            const auto dir = base_dir(o);
            std::filesystem::create_directories(dir);
            std::ofstream(dir / "comparison.csv") << ptnash::comparison_csv(table);
            std::cout << ptnash::render_comparison(table);
            std::cout << "table written to " << (dir / "comparison.csv").string() << '\n';
            return 0;
        }
        if (*sweep) {
            const auto scn = load(scenario, o);
            const auto rep = ptnash::sweep_initial_conditions(scn, count, scales, seed);
            std::cout << ptnash::render_sweep(rep);
            bool ok = true;
            for (const auto& s : rep.scales) {
                if (s.aborted > 0) ok = false;
                if (s.max_error_at_T && !(*s.max_error_at_T <= scn.relative_tol)) ok = false;
            }
            return ok ? 0 : 2;
        }
        if (*orc) {
            const auto scn = load(scenario, o);
            const auto game = ptnash::build_game(scn);
            const auto rep = ptnash::compute_oracle(game);
            std::cout << "game       " << scn.game.name << '\n';
            std::cout << "x*         ";
            for (std::size_t k = 0; k < rep.newton.x_star.size(); ++k) {
                std::cout << (k ? " " : "") << std::setprecision(10) << rep.newton.x_star[k];
            }
            std::cout << "\nresidual   " << std::setprecision(3) << rep.newton.residual << '\n';
            std::cout << "iterations " << rep.newton.iterations << '\n';
            std::cout << "converged  " << (rep.newton.converged ? "true" : "false") << '\n';
            if (!rep.newton.message.empty()) std::cout << "message    " << rep.newton.message << '\n';
            if (rep.direct_distance) {
                std::cout << "direct     |x_newton - x_direct| = " << *rep.direct_distance << '\n';
            }
            if (scn.game.reference_ne && rep.newton.converged) {
                const auto c = ptnash::compare_reference(game, *scn.game.reference_ne, rep.newton.x_star);
                std::cout << "reference  " << c.explanation << '\n';
            }
            return rep.newton.converged ? 0 : 2;
        }
        if (*chk) {
            const auto scn = load(scenario, o);
            std::cout << ptnash::render_assumptions(ptnash::check_assumptions(scn));
            return 0;
        }
        if (*show) {
            std::cout << ptnash::to_yaml(load(scenario, o));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
