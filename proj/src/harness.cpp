#include "ptnash/harness.hpp"

#include "ptnash/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

namespace ptnash {

namespace {

using nlohmann::json;

double norm2(std::span<const double> v) { return std::sqrt(kernels::squared_norm(v)); }

// Shortest round-trip decimal form.
std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits = 4) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

std::string profile_text(const Vector& v, int digits = 6) {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) os << ", ";
        const double x = std::abs(v[k]) < 0.5 * std::pow(10.0, -digits) ? 0.0 : v[k];
        os << std::fixed << std::setprecision(digits) << x;
    }
    os << ')';
    return os.str();
}

std::string time_text(const std::optional<double>& t) {
    return t ? fixed(*t, 6) + " s" : std::string("not reached");
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Runs fn(k) for k in [0, n) on up to hardware_concurrency threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct Prepared {
    Game game;
    TopologySchedule topology;
    EstimateState x0;
};

Prepared prepare(const Scenario& scn) {
    Game game = build_game(scn);
    TopologySchedule topology = build_topology(scn, game.player_count());
    EstimateState x0 = build_initial_state(scn, game);
    return {std::move(game), std::move(topology), std::move(x0)};
}

RunResult execute(const Scenario& scn, const Prepared& p, const OracleReport& oracle) {
    const auto started = std::chrono::steady_clock::now();
    RunResult r;
    r.scenario = scn;
    r.hash = scenario_hash(scn);
    r.oracle = oracle;

    IntegrationOptions io;
    io.horizon = scn.horizon;
    io.sample_dt = scn.sample_dt;
    io.reference = oracle.newton.x_star;
    r.record = integrate(p.game, p.topology, scn.seeker, p.x0, io);
    r.record.scenario_hash = r.hash;
    r.record.seed = scn.init.mode == InitSpec::Mode::Random ? scn.init.seed : 0;

    const double xnorm = norm2(oracle.newton.x_star);
    r.tolerance = scn.relative_tol * (xnorm > 0.0 ? xnorm : 1.0);
    r.verification = verify_against_oracle(r.record, oracle.newton, r.tolerance);
    for (double th : kConvergenceThresholds) {
        r.convergence.push_back({th, convergence_time(r.record, th)});
    }
    const auto& T = r.record.prescribed_time;
    if (T && !r.record.aborted && r.record.times.back() >= *T) {
        r.error_at_T = r.record.rel_error[sample_index_at(r.record, *T)];
    }
    r.terminal_error = r.record.rel_error.back();
    if (scn.game.reference_ne) {
        r.reference = compare_reference(p.game, *scn.game.reference_ne, oracle.newton.x_star);
    }
    r.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
}

void write_outputs(RunResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "trajectory.csv", std::ios::binary);
        write_trajectory_csv(r.record, f);
    }
    if (!r.record.gains.empty()) {
        std::ofstream f(dir / "gains.csv", std::ios::binary);
        write_gains_csv(r.record, f);
    }
    {
        std::ofstream f(dir / "scenario.yaml", std::ios::binary);
        f << to_yaml(r.scenario);
    }
    r.output_dir = dir;
    std::ofstream f(dir / "summary.json", std::ios::binary);
    f << summary_json(r) << '\n';
}

}  // namespace

OracleReport compute_oracle(const Game& game) {
    const std::size_t n = game.total_dim();
    OracleReport rep;
    const double starts[] = {0.0, 1.0, -1.0, 5.0, -5.0};
    for (double s0 : starts) {
        rep.newton = solve_ne(game, Vector(n, s0));
        if (rep.newton.converged) break;
    }
    if (game.is_linear()) {
        const OracleResult direct = solve_linear_ne(game);
        if (direct.converged) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double d = direct.x_star[k] - rep.newton.x_star[k];
                d2 += d * d;
            }
            rep.direct_distance = std::sqrt(d2);
        }
    }
    return rep;
}

ReferenceComparison compare_reference(const Game& game, const Vector& profile,
                                      const Vector& oracle_x) {
    if (profile.size() != game.total_dim()) {
        throw DimensionError("reference profile has length " + std::to_string(profile.size()) +
                             ", the game needs " + std::to_string(game.total_dim()));
    }
    ReferenceComparison c;
    c.profile = profile;
    c.pseudo_gradient = pseudo_gradient(game, profile);
    c.residual = norm2(c.pseudo_gradient);
    c.stationary = c.residual <= 1e-6;
    double worst = -1.0;
    for (std::size_t k = 0; k < c.pseudo_gradient.size(); ++k) {
        if (std::abs(c.pseudo_gradient[k]) > worst) {
            worst = std::abs(c.pseudo_gradient[k]);
            c.worst_component = k;
        }
    }
    c.difference.resize(profile.size());
    for (std::size_t k = 0; k < profile.size(); ++k) c.difference[k] = oracle_x[k] - profile[k];
    c.distance = norm2(c.difference);

    double max_gap = 0.0;
    std::size_t far = 0;
    for (std::size_t j = 0; j < profile.size(); ++j) {
        if (std::abs(c.difference[j]) > max_gap) {
            max_gap = std::abs(c.difference[j]);
            far = j;
        }
    }
    c.agrees = max_gap <= 1e-3;

    std::ostringstream os;
    const std::size_t k = c.worst_component;
    if (c.agrees) {
        os << "reference profile matches the oracle within 1e-3 componentwise (largest gap "
           << fixed(max_gap, 3) << " in x_" << far + 1 << ")";
    } else if (c.stationary) {
        os << "reference profile is stationary (|F| = " << fixed(c.residual, 3)
           << ") but lies " << fixed(c.distance, 4)
           << " from the oracle equilibrium: the game has more than one";
    } else {
        os << "reference profile is not an equilibrium of this game: |F(x_ref)| = "
           << fixed(c.residual, 6) << ", dominated by component " << k + 1 << " (F_" << k + 1
           << "(x_ref) = " << fixed(c.pseudo_gradient[k], 6) << ", expected 0). The oracle has x_"
           << k + 1 << " = " << fixed(oracle_x[k], 6) << " where the reference has "
           << fixed(profile[k], 6) << "; the largest coordinate gap is in x_" << far + 1 << " ("
           << fixed(oracle_x[far], 6) << " vs " << fixed(profile[far], 6)
           << "). The oracle solves F = 0 (|F| = "
           << fixed(norm2(pseudo_gradient(game, oracle_x)), 3)
           << "), and convergence is judged against it.";
    }
    c.explanation = os.str();
    return c;
}

std::optional<double> RunResult::time_at(double threshold) const {
    for (const auto& c : convergence) {
        if (c.threshold == threshold) return c.time;
    }
    return convergence_time(record, threshold);
}

RunResult run_scenario(const Scenario& scn, const RunOptions& opts) {
    const Prepared p = prepare(scn);
    const OracleReport oracle = compute_oracle(p.game);
    if (!oracle.newton.converged) {
        throw std::runtime_error("oracle did not converge for game '" + scn.game.name +
                                 "': " + oracle.newton.message);
    }
    RunResult r = execute(scn, p, oracle);
    if (opts.write_files) {
        const std::filesystem::path dir =
            opts.output_dir ? *opts.output_dir : std::filesystem::path(scn.output_dir);
        write_outputs(r, dir);
    }
    return r;
}

void write_trajectory_csv(const RunRecord& record, std::ostream& out) {
    out << 't';
    for (std::size_t i = 0; i < record.players; ++i) {
        for (std::size_t j = 0; j < record.dim; ++j) out << ",x[" << i << "][" << j << ']';
    }
    out << ",rel_error,consensus_residual,u_norm,lyapunov\n";
    for (std::size_t k = 0; k < record.size(); ++k) {
        out << num(record.times[k]);
        for (double v : record.states[k]) out << ',' << num(v);
        out << ',' << num(record.rel_error[k]) << ',' << num(record.consensus_residual[k]) << ','
            << num(record.u_norm[k]) << ',' << num(record.lyapunov[k]) << '\n';
    }
}

void write_gains_csv(const RunRecord& record, std::ostream& out) {
    out << 't';
    for (const auto& e : record.edges) out << ",k[" << e.i << '-' << e.j << ']';
    out << '\n';
    for (std::size_t k = 0; k < record.gains.size(); ++k) {
        out << num(record.times[k]);
        for (double v : record.gains[k]) out << ',' << num(v);
        out << '\n';
    }
}

std::string summary_json(const RunResult& r) {
    const auto& scn = r.scenario;
    json j;
    j["scenario"] = scn.name;
    j["source"] = scn.source;
    j["scenario_hash"] = r.hash;
    j["game"] = scn.game.name;
    j["variant"] = to_string(scn.seeker.variant);
    j["seeker"] = {{"T", optional_number(scn.seeker.prescribed_time)},
                   {"c", scn.seeker.post_gain},
                   {"kappa", scn.seeker.kappa},
                   {"kappa0", scn.seeker.kappa0},
                   {"gamma", scn.seeker.gamma},
                   {"schedule_clock", to_string(scn.seeker.schedule_clock)},
                   {"s_max", scn.seeker.s_max},
                   {"ds", scn.seeker.ds},
                   {"dt_post", scn.seeker.dt_post},
                   {"stability_limit", scn.seeker.stability_limit}};
    j["horizon"] = scn.horizon;
    j["sample_dt"] = scn.sample_dt;
    j["seed"] = r.record.seed;

    json oracle = {{"x_star", r.oracle.newton.x_star},
                   {"residual", r.oracle.newton.residual},
                   {"iterations", r.oracle.newton.iterations},
                   {"converged", r.oracle.newton.converged}};
    if (r.oracle.direct_distance) oracle["direct_solve_distance"] = *r.oracle.direct_distance;
    j["oracle"] = oracle;

    json times = json::object();
    for (const auto& c : r.convergence) {
        std::ostringstream key;
        key << std::setprecision(1) << std::scientific << c.threshold;
        times[key.str()] = optional_number(c.time);
    }
    j["convergence_time"] = times;
    j["error_at_T"] = optional_number(r.error_at_T);
    j["terminal_error"] = r.terminal_error;
    j["terminal_consensus_residual"] = r.record.consensus_residual.back();
    j["verification"] = {{"passed", r.verification.passed},
                         {"consensus_ok", r.verification.consensus_ok},
                         {"stationarity_ok", r.verification.stationarity_ok},
                         {"tolerance", r.tolerance},
                         {"relative_tol", scn.relative_tol},
                         {"consensus_residual", r.verification.consensus_residual},
                         {"max_distance", r.verification.max_distance},
                         {"block_distances", r.verification.block_distances}};
    if (r.reference) {
        j["reference"] = {{"profile", r.reference->profile},
                          {"pseudo_gradient", r.reference->pseudo_gradient},
                          {"residual", r.reference->residual},
                          {"stationary", r.reference->stationary},
                          {"agrees_with_oracle", r.reference->agrees},
                          {"oracle_minus_reference", r.reference->difference},
                          {"distance_to_oracle", r.reference->distance},
                          {"explanation", r.reference->explanation}};
    }
    j["samples"] = r.record.size();
    j["solver_steps"] = {{"s", r.record.s_steps}, {"t", r.record.t_steps}};
    j["aborted"] = r.record.aborted;
    if (r.record.aborted) {
        j["abort_reason"] = r.record.abort_reason;
        j["partial"] = true;
    }
    return j.dump(2);
}

std::string render_run(const RunResult& r) {
    const auto& scn = r.scenario;
    const auto& c = scn.seeker;
    std::ostringstream os;
    os << "scenario   " << scn.name << "  [" << r.hash << "]\n";
    os << "variant    " << to_string(c.variant);
    if (c.prescribed_time) os << "  T=" << num(*c.prescribed_time);
    os << "  c=" << num(c.post_gain);
    if (is_adaptive(c.variant)) {
        os << "  kappa0=" << num(c.kappa0) << "  gamma=" << num(c.gamma);
    } else {
        os << "  kappa=" << num(c.kappa);
    }
    os << '\n';
    os << "oracle     x* = " << profile_text(r.oracle.newton.x_star) << "  |F| = "
       << fixed(r.oracle.newton.residual, 3) << "  (" << r.oracle.newton.iterations
       << " Newton steps)\n";
    if (r.error_at_T) os << "error@T    " << fixed(*r.error_at_T, 4) << '\n';
    os << "converged  ";
    for (std::size_t k = 0; k < r.convergence.size(); ++k) {
        if (k) os << "  ";
        os << std::setprecision(0) << std::scientific << r.convergence[k].threshold << ": "
           << std::defaultfloat << time_text(r.convergence[k].time);
    }
    os << '\n';
    os << "terminal   error " << fixed(r.terminal_error, 4) << "  consensus "
       << fixed(r.verification.consensus_residual, 4) << "  max |x^i - x*| "
       << fixed(r.verification.max_distance, 4) << '\n';
    if (r.record.aborted) os << "ABORTED    " << r.record.abort_reason << " (partial output)\n";
    os << "verify     " << (r.verification.passed ? "PASS" : "FAIL") << " at tol "
       << fixed(r.tolerance, 4) << " (consensus " << (r.verification.consensus_ok ? "ok" : "fail")
       << ", stationarity " << (r.verification.stationarity_ok ? "ok" : "fail") << ")\n";
    if (r.reference) {
        os << "reference  x_ref = " << profile_text(r.reference->profile, 4) << '\n';
        os << "           " << r.reference->explanation << '\n';
    }
    if (!r.output_dir.empty()) os << "output     " << r.output_dir.string() << '\n';
    return os.str();
}

ComparisonTable compare(const std::vector<Scenario>& scenarios, double threshold) {
    if (scenarios.size() < 2) throw std::invalid_argument("compare needs at least two scenarios");
    std::vector<Prepared> prepared;
    for (const auto& s : scenarios) prepared.push_back(prepare(s));
    const auto& base = scenarios.front();
    for (std::size_t k = 1; k < scenarios.size(); ++k) {
        if (scenarios[k].game.name != base.game.name || scenarios[k].game.params != base.game.params) {
            throw std::invalid_argument("compare: scenario '" + scenarios[k].name +
                                        "' uses a different game than '" + base.name + "'");
        }
        const auto a = prepared[k].x0.stacked();
        const auto b = prepared.front().x0.stacked();
        if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) {
            throw std::invalid_argument("compare: scenario '" + scenarios[k].name +
                                        "' starts from different initial conditions than '" +
                                        base.name + "'");
        }
    }
    const OracleReport oracle = compute_oracle(prepared.front().game);
    if (!oracle.newton.converged) throw std::runtime_error("compare: oracle did not converge");

    ComparisonTable table;
    table.threshold = threshold;
    table.rows.resize(scenarios.size());
    parallel_for(scenarios.size(), [&](std::size_t k) {
        const RunResult r = execute(scenarios[k], prepared[k], oracle);
        const auto& c = scenarios[k].seeker;
        ComparisonRow row;
        row.name = scenarios[k].name;
        row.variant = c.variant;
        row.kappa = is_adaptive(c.variant) ? c.kappa0 : c.kappa;
        row.c = c.post_gain;
        row.prescribed_time = c.prescribed_time;
        row.time = convergence_time(r.record, threshold);
        row.terminal_error = r.terminal_error;
        table.rows[k] = row;
    });
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
        const double ta = a.time.value_or(std::numeric_limits<double>::infinity());
        const double tb = b.time.value_or(std::numeric_limits<double>::infinity());
        return ta < tb;
    });
    return table;
}

std::string comparison_csv(const ComparisonTable& table) {
    std::ostringstream os;
    os << "scenario,variant,kappa,c,T,convergence_time,terminal_error\n";
    for (const auto& r : table.rows) {
        os << r.name << ',' << to_string(r.variant) << ',' << num(r.kappa) << ',' << num(r.c) << ','
           << (r.prescribed_time ? num(*r.prescribed_time) : "") << ','
           << (r.time ? num(*r.time) : "") << ',' << num(r.terminal_error) << '\n';
    }
    return os.str();
}

std::string render_comparison(const ComparisonTable& table) {
    std::ostringstream os;
    os << "convergence time at relative error " << fixed(table.threshold, 3) << "\n";
    os << std::left << std::setw(24) << "scenario" << std::setw(20) << "variant" << std::setw(8)
       << "kappa" << std::setw(6) << "c" << std::setw(6) << "T" << "time\n";
    for (const auto& r : table.rows) {
        os << std::left << std::setw(24) << r.name << std::setw(20) << to_string(r.variant)
           << std::setw(8) << num(r.kappa) << std::setw(6) << num(r.c) << std::setw(6)
           << (r.prescribed_time ? num(*r.prescribed_time) : "-") << time_text(r.time) << '\n';
    }
    return os.str();
}

SweepReport sweep_initial_conditions(const Scenario& scn, std::size_t count,
                                     const std::vector<double>& scales, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sweep needs count >= 1");
    if (scales.empty()) throw std::invalid_argument("sweep needs at least one scale");
    for (double s : scales) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("sweep scales must be >= 0");
    }
    const Prepared base = prepare(scn);
    const OracleReport oracle = compute_oracle(base.game);
    if (!oracle.newton.converged) throw std::runtime_error("sweep: oracle did not converge");
    const double radius = scn.init.mode == InitSpec::Mode::Random ? scn.init.radius : 20.0;

    const std::size_t total = count * scales.size();
    std::vector<RunResult> results(total);
    parallel_for(total, [&](std::size_t idx) {
        const std::size_t m = idx / count;
        const std::size_t k = idx % count;
        Scenario s = scn;
        s.init.mode = InitSpec::Mode::Random;
        s.init.radius = radius;
        s.init.scale = scales[m];
        s.init.seed = seed + 1000003ull * m + k;
        Prepared p{base.game, base.topology, build_initial_state(s, base.game)};
        results[idx] = execute(s, p, oracle);
    });

    SweepReport rep;
    rep.scenario = scn.name;
    rep.variant = scn.seeker.variant;
    rep.seed = seed;
    for (std::size_t m = 0; m < scales.size(); ++m) {
        SweepScale sc;
        sc.scale = scales[m];
        sc.runs = count;
        double tmax = 0.0;
        double tsum = 0.0;
        std::size_t converged = 0;
        for (std::size_t k = 0; k < count; ++k) {
            const RunResult& r = results[m * count + k];
            if (r.record.aborted) ++sc.aborted;
            if (r.record.prescribed_time) {
                // Aborted or truncated runs count as not meeting T.
                const double e = r.error_at_T.value_or(std::numeric_limits<double>::infinity());
                sc.errors_at_T.push_back(e);
                sc.max_error_at_T = std::max(sc.max_error_at_T.value_or(0.0), e);
            }
            const auto t = convergence_time(r.record, 1e-2);
            sc.times.push_back(t);
            if (t && !r.record.aborted) {
                tmax = std::max(tmax, *t);
                tsum += *t;
                ++converged;
            } else {
                ++sc.unconverged;
            }
        }
        if (sc.unconverged == 0) sc.max_time = tmax;
        sc.mean_time = converged ? tsum / static_cast<double>(converged) : 0.0;
        rep.scales.push_back(std::move(sc));
    }
    return rep;
}

std::string render_sweep(const SweepReport& rep) {
    std::ostringstream os;
    os << "sweep " << rep.scenario << " (" << to_string(rep.variant) << "), seed " << rep.seed
       << '\n';
    os << std::left << std::setw(10) << "scale" << std::setw(7) << "runs" << std::setw(16)
       << "max err@T" << std::setw(16) << "max t(1e-2)" << std::setw(16) << "mean t(1e-2)"
       << "unconverged/aborted\n";
    for (const auto& s : rep.scales) {
        os << std::left << std::setw(10) << num(s.scale) << std::setw(7) << s.runs << std::setw(16)
           << (s.max_error_at_T ? fixed(*s.max_error_at_T, 4) : "-") << std::setw(16)
           << (s.max_time ? fixed(*s.max_time, 6) : "-") << std::setw(16) << fixed(s.mean_time, 6)
           << s.unconverged << '/' << s.aborted << '\n';
    }
    return os.str();
}

AssumptionReport check_assumptions(const Scenario& scn) {
    const Prepared p = prepare(scn);
    AssumptionReport rep;
    rep.players = p.game.player_count();
    const Box box = Box::uniform(p.game.total_dim(), scn.check.box_lower, scn.check.box_upper);
    rep.regularity = estimate_regularity_constants(p.game, scn.check.samples, box, scn.check.seed);
    rep.strongly_monotone = rep.regularity.monotonicity > 0.0;
    rep.switching = p.topology.is_switching();
    for (std::size_t k = 0; k < p.topology.graphs().size(); ++k) {
        const auto& g = p.topology.graphs()[k];
        rep.graphs.push_back({k, is_connected(g), algebraic_connectivity(g)});
    }
    rep.union_lambda2 = algebraic_connectivity(p.topology.union_graph());
    rep.window = connectivity_window(scn);
    const std::optional<double> horizon =
        p.topology.mode() == TopologySchedule::Mode::Aperiodic
            ? std::optional<double>(std::max(scn.horizon, rep.window))
            : std::nullopt;
    rep.joint = check_jointly_connected(p.topology, rep.window, horizon);

    if (!rep.strongly_monotone) {
        rep.notes.push_back("strong monotonicity not verified: sampled eps = " +
                            fixed(rep.regularity.monotonicity, 4) + " <= 0 over the check box");
    }
    const bool static_gain = scn.seeker.variant == Variant::StaticGain ||
                             scn.seeker.variant == Variant::BaselineExponential;
    if (static_gain && rep.strongly_monotone && !rep.switching && rep.graphs.front().connected) {
        rep.certificate = gain_condition(scn.seeker.kappa, rep.regularity.lipschitz,
                                         rep.regularity.monotonicity, rep.graphs.front().lambda2);
        if (!rep.certificate->satisfied) {
            rep.notes.push_back("kappa = " + num(scn.seeker.kappa) +
                                " is below the sufficient gain bound " +
                                fixed(rep.certificate->required_kappa, 4) +
                                "; convergence is not certified by the bound but may still hold");
        }
    }
    if (rep.switching) {
        bool any_connected = false;
        for (const auto& g : rep.graphs) any_connected = any_connected || g.connected;
        if (!any_connected) rep.notes.push_back("no individual graph is connected");
        if (is_prescribed_time(scn.seeker.variant)) {
            rep.notes.push_back("switching signal read on the " +
                                to_string(scn.seeker.schedule_clock) + " clock before T");
        }
    }
    return rep;
}

std::string render_assumptions(const AssumptionReport& rep) {
    std::ostringstream os;
    os << "players            " << rep.players << '\n';
    os << "sampled eps        " << fixed(rep.regularity.monotonicity, 6)
       << (rep.strongly_monotone ? "" : "  (strong monotonicity not verified)") << '\n';
    os << "sampled iota       " << fixed(rep.regularity.lipschitz, 6) << "  (" << rep.regularity.pairs
       << " pairs)\n";
    for (const auto& g : rep.graphs) {
        os << "graph " << g.index << "            connected=" << (g.connected ? "true" : "false")
           << "  lambda2=" << fixed(g.lambda2, 9) << '\n';
    }
    os << "union lambda2      " << fixed(rep.union_lambda2, 9) << '\n';
    os << "jointly connected  " << (rep.joint.jointly_connected ? "true" : "false") << "  (window "
       << num(rep.window) << ", " << rep.joint.windows.size() << " windows)\n";
    for (const auto& w : rep.joint.windows) {
        os << "  [" << num(w.start) << ", " << num(w.end) << ")  graphs {";
        for (std::size_t k = 0; k < w.active_graphs.size(); ++k) {
            os << (k ? ", " : "") << w.active_graphs[k];
        }
        os << "}  union connected=" << (w.connected ? "true" : "false") << '\n';
    }
    if (rep.certificate) {
        os << "gain certificate   " << (rep.certificate->satisfied ? "satisfied" : "not satisfied")
           << "  margin " << fixed(rep.certificate->margin, 4) << "  required kappa > "
           << fixed(rep.certificate->required_kappa, 4) << '\n';
    }
    for (const auto& n : rep.notes) os << "note               " << n << '\n';
    return os.str();
}

}  // namespace ptnash
