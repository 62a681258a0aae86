// Acceptance report: one PASS/FAIL line per criterion, indented detail lines
// underneath. Exit status 1 if any criterion fails.

#include "ptnash/harness.hpp"
#include "ptnash/oracle.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

using namespace ptnash;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    // Records a gated check.
    bool expect(bool ok, const std::string& what) {
        details.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
        pass = pass && ok;
        return ok;
    }
    void info(const std::string& what) { details.push_back("info  " + what); }
};

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string opt(const std::optional<double>& v) { return v ? fmt(*v) : "never"; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunResult quiet_run(const Scenario& s) { return run_scenario(s, {false, std::nullopt}); }

Outcome oracle_fidelity() {
    Outcome o;
    const auto scn = fixture::scenario("energy_static");
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = compute_oracle(build_game(scn));
    const double elapsed = seconds_since(t0);
    const double gap = fixture::max_abs_diff(rep.newton.x_star, fixture::kEnergyNe);
    o.expect(rep.newton.converged, "Newton converged");
    o.expect(gap <= 1e-3, "max |x* - published| = " + fmt(gap) + " <= 1e-3");
    o.expect(rep.newton.residual <= 1e-10, "residual " + fmt(rep.newton.residual) + " <= 1e-10");
    o.expect(elapsed < 1.0, "runtime " + fmt(elapsed) + " s < 1 s");
    return o;
}

Outcome prescribed_time() {
    Outcome o;
    const auto r = quiet_run(fixture::scenario("energy_static"));
    const auto& rec = r.record;
    const double T = *rec.prescribed_time;
    o.expect(!rec.aborted && r.verification.passed, "run verified against the oracle");
    o.expect(r.error_at_T && *r.error_at_T <= 1e-2, "error at T = " + opt(r.error_at_T) + " <= 1e-2");
    const double e1 = rec.rel_error[sample_index_at(rec, T + 1.0)];
    o.expect(e1 <= 1e-4, "error at T+1 = " + fmt(e1) + " <= 1e-4");
    double worst = -1.0;
    const std::size_t a = sample_index_at(rec, T), b = sample_index_at(rec, T + 2.0);
    for (std::size_t k = a + 1; k <= b; ++k) worst = std::max(worst, rec.rel_error[k] - rec.rel_error[k - 1]);
    o.expect(b > a && worst <= 1e-6, "largest error increase on [T, T+2] = " + fmt(worst) + " <= 1e-6");
    o.expect(r.runtime_seconds < 10.0, "runtime " + fmt(r.runtime_seconds) + " s < 10 s");
    o.info("convergence time (1e-2) " + opt(r.time_at(1e-2)) + " s");
    return o;
}

Outcome table_ordering() {
    Outcome o;
    const auto k1 = fixture::scenario("baseline_k1");
    const auto k10 = fixture::scenario("baseline_k10");
    const auto proposed = fixture::scenario("energy_static");
    const auto table = compare({k1, k10, proposed}, 1e-2);
    std::optional<double> ta, tb, tc;
    for (const auto& row : table.rows) {
        if (row.name == k1.name) ta = row.time;
        if (row.name == k10.name) tb = row.time;
        if (row.name == proposed.name) tc = row.time;
    }
    o.expect(ta && tb && tc, "all three configurations converge (" + opt(ta) + ", " + opt(tb) + ", " +
                                 opt(tc) + " s)");
    if (!(ta && tb && tc)) return o;
    o.expect(*ta > *tb && *tb > *tc, "t(kappa=1,c=0) > t(kappa=10,c=0) > t(proposed)");
    o.expect(*tc <= 1.2 + 1e-9, "t(proposed) = " + fmt(*tc) + " <= 1.2");
    const bool a50 = std::abs(*ta - 21.0) <= 10.5, b50 = std::abs(*tb - 13.0) <= 6.5;
    o.info("kappa=1 baseline " + fmt(*ta) + " s vs 21 s: " + (a50 ? "within" : "outside") + " +/-50%");
    o.info("kappa=10 baseline " + fmt(*tb) + " s vs 13 s: " + (b50 ? "within" : "outside") + " +/-50%");
    return o;
}

Outcome initial_condition_independence() {
    Outcome o;
    const std::vector<double> scales{1.0, 10.0, 100.0};
    const auto t0 = std::chrono::steady_clock::now();
    for (const char* name : {"energy_static", "energy_adaptive"}) {
        const auto rep = sweep_initial_conditions(fixture::scenario(name), 20, scales, 1);
        for (const auto& s : rep.scales) {
            o.expect(s.aborted == 0 && s.max_error_at_T && *s.max_error_at_T <= 1e-2,
                     std::string(name) + " scale " + fmt(s.scale) + ": max error at T " +
                         opt(s.max_error_at_T) + " <= 1e-2 over 20 runs");
        }
    }
    for (const char* name : {"baseline_k1", "baseline_k10"}) {
        const auto rep = sweep_initial_conditions(fixture::scenario(name), 20, scales, 1);
        bool ok = true;
        std::string maxes, means;
        for (std::size_t m = 0; m < rep.scales.size(); ++m) {
            const auto& s = rep.scales[m];
            ok = ok && s.max_time && s.unconverged == 0;
            if (m > 0 && ok) {
                const auto& p = rep.scales[m - 1];
                ok = ok && *s.max_time > *p.max_time && s.mean_time > p.mean_time;
            }
            maxes += (m ? " < " : "") + opt(s.max_time);
            means += (m ? " < " : "") + fmt(s.mean_time);
        }
        o.expect(ok, std::string(name) + " convergence time grows with scale: max " + maxes +
                         ", mean " + means);
    }
    const double elapsed = seconds_since(t0);
    o.expect(elapsed < 120.0, "runtime " + fmt(elapsed) + " s < 120 s");
    return o;
}

Outcome adaptive_variant() {
    Outcome o;
    const auto scn = fixture::scenario("energy_adaptive");
    const auto r = quiet_run(scn);
    const auto& rec = r.record;
    o.expect(!rec.aborted && r.verification.passed, "run verified against the oracle");
    o.expect(r.error_at_T && *r.error_at_T <= 1e-2, "error at T = " + opt(r.error_at_T) + " <= 1e-2");
    o.expect(scn.seeker.kappa0 == 0.5 && scn.seeker.gamma == 1.0, "kappa_ij(0) = 0.5, gamma = 1");

    bool monotone = !rec.gains.empty();
    for (std::size_t k = 1; k < rec.gains.size(); ++k)
        for (std::size_t e = 0; e < rec.edges.size(); ++e) monotone = monotone && rec.gains[k][e] >= rec.gains[k - 1][e];
    o.expect(monotone, "every kappa_ij series is non-decreasing (" + std::to_string(rec.edges.size()) +
                           " edges, " + std::to_string(rec.gains.size()) + " samples)");

    const auto game = build_game(scn);
    const auto topo = build_topology(scn, game.player_count());
    DynamicGains g(topo, scn.seeker);
    std::copy(rec.gains.back().begin(), rec.gains.back().end(), g.values().begin());
    bool symmetric = true;
    for (const auto& e : rec.edges) symmetric = symmetric && g.value(e.i, e.j) == g.value(e.j, e.i);
    o.expect(symmetric, "kappa_ij == kappa_ji bit-exactly on one shared value per undirected edge");

    const std::size_t k90 = sample_index_at(rec, 0.9 * scn.horizon);
    double drift = 0.0, top = 0.0;
    for (std::size_t e = 0; e < rec.edges.size(); ++e) {
        drift = std::max(drift, rec.gains.back()[e] - rec.gains[k90][e]);
        top = std::max(top, rec.gains.back()[e]);
    }
    o.expect(drift <= 1e-3 && std::isfinite(top), "last-10% gain variation " + fmt(drift) +
                                                      " <= 1e-3; largest terminal gain " + fmt(top));
    return o;
}

Outcome switching_variant() {
    Outcome o;
    auto scn = fixture::scenario("energy_switching");
    const auto r = quiet_run(scn);
    o.expect(!r.record.aborted && r.verification.passed, "run verified against the oracle");
    o.expect(r.error_at_T && *r.error_at_T <= 1e-2, "error at T = " + opt(r.error_at_T) + " <= 1e-2");
    const auto rep = check_assumptions(scn);
    o.expect(rep.graphs.size() == 4, "four scheduled graphs");
    for (const auto& g : rep.graphs) {
        o.expect(!g.connected && g.lambda2 < 1e-10,
                 "graph " + std::to_string(g.index) + ": lambda2 = " + fmt(g.lambda2) + " < 1e-10");
    }
    o.expect(rep.joint.jointly_connected, "jointly connected over windows of " + fmt(rep.window));
    scn.seeker.schedule_clock = ScheduleClock::Physical;
    const auto phys = quiet_run(scn);
    o.info("signal read on the physical clock before T: error at T = " + opt(phys.error_at_T) +
           " (only finitely many switches happen before T)");
    return o;
}

Outcome hygiene() {
    Outcome o;
    std::mt19937_64 rng(2024);
    for (const auto& g : {fixture::energy(), make_nonquadratic_game()}) {
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const auto x = fixture::random_vector(rng, g.total_dim(), -10, 10);
            for (std::size_t i = 0; i < g.player_count(); ++i) {
                Vector a(g.action_dim(i)), fd(g.action_dim(i));
                g.gradient(i, x, a);
                g.finite_difference_gradient(i, x, fd);
                for (std::size_t c = 0; c < a.size(); ++c)
                    worst = std::max(worst, std::abs(a[c] - fd[c]) / std::max(1.0, std::abs(a[c])));
            }
        }
        o.expect(worst <= 1e-6, g.name() + " gradient vs central differences: " + fmt(worst) + " <= 1e-6");
    }

    const double closed = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi / 5.0);
    const double l2 = algebraic_connectivity(cycle_graph(5));
    o.expect(std::abs(l2 - closed) <= 1e-9, "lambda2(C5) = " + fmt(l2, "%.12f") + " vs 2 - 2cos(2pi/5) = " +
                                                fmt(closed, "%.12f"));

    const auto scn = fixture::scenario("energy_static");
    const auto game = build_game(scn);
    const auto topo = build_topology(scn, 5);
    const auto x0 = build_initial_state(scn, game);
    const auto x_star = compute_oracle(game).newton.x_star;
    auto cfg = scn.seeker;
    const auto coarse = integrate(game, topo, cfg, x0, {scn.horizon, scn.sample_dt, x_star});
    cfg.ds *= 0.5;
    cfg.dt_post *= 0.5;
    const auto fine = integrate(game, topo, cfg, x0, {scn.horizon, scn.sample_dt, x_star});
    const double rich = fixture::distance(coarse.states.back(), fine.states.back()) /
                        fixture::norm(fine.states.back());
    o.expect(rich <= 1e-6, "Richardson ds/2, dt_post/2: terminal change " + fmt(rich) + " <= 1e-6");

    const double T = *scn.seeker.prescribed_time, c = scn.seeker.post_gain;
    const auto& graph = topo.graphs().front();
    auto f = [&](double t, const Vector& y) {
        auto u = rhs_baseline(EstimateState(5, 5, y), game, graph, scn.seeker.kappa);
        for (auto& v : u) v *= c + 1.0 / (T - t);
        return u;
    };
    Vector y(x0.stacked().begin(), x0.stacked().end()), tmp(y.size());
    double t = 0.0, worst = 0.0;
    for (double target : {0.3, 0.6, 0.9, 1.1, 1.19, T - 1e-6}) {
        while (t < target) {
            const double h = std::min({1e-4, 1e-3 * (T - t), target - t});
            const auto k1 = f(t, y);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            const auto k2 = f(t + 0.5 * h, tmp);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            const auto k3 = f(t + 0.5 * h, tmp);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
            const auto k4 = f(t + h, tmp);
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            t = (target - t - h <= 1e-15) ? target : t + h;
        }
        const auto s_run = integrate(game, topo, scn.seeker, x0, {target, 1.0, x_star});
        worst = std::max(worst, fixture::distance(s_run.states.back(), y) / fixture::norm(y));
    }
    o.expect(worst <= 1e-4, "s-domain vs t-domain (steps shrink toward T, stop at T - 1e-6): " + fmt(worst) +
                                " <= 1e-4");
    return o;
}

Outcome lyapunov_descent() {
    Outcome o;
    auto scn = fixture::scenario("energy_static");
    const auto base = check_assumptions(scn);
    const double kappa = 10.0;
    scn.seeker.kappa = kappa;
    const auto rep = check_assumptions(scn);
    o.expect(rep.certificate && rep.certificate->satisfied,
             "kappa = 10 certified: required kappa " +
                 fmt(rep.certificate ? rep.certificate->required_kappa : NAN) + " from eps " +
                 fmt(rep.regularity.monotonicity) + ", iota " + fmt(rep.regularity.lipschitz) +
                 ", lambda2 " + fmt(rep.graphs.front().lambda2));
    if (base.certificate) o.info("kappa = 2 margin " + fmt(base.certificate->margin) + " (not certified)");

    std::size_t runs = 0;
    double worst = -INFINITY;
    for (std::uint64_t seed : {0ull, 1ull, 2ull, 3ull, 4ull}) {
        Scenario s = scn;
        if (seed > 0) {
            s.init.mode = InitSpec::Mode::Random;
            s.init.seed = seed;
            s.init.scale = std::pow(10.0, static_cast<double>(seed - 1) * 2.0 / 3.0);
        }
        const auto r = quiet_run(s);
        o.expect(!r.record.aborted, "run " + std::to_string(runs) + " finished");
        for (std::size_t k = 1; k < r.record.size(); ++k)
            worst = std::max(worst, r.record.lyapunov[k] - r.record.lyapunov[k - 1]);
        ++runs;
    }
    o.expect(worst <= 1e-9, "largest sample-to-sample increase of V over " + std::to_string(runs) +
                                " trajectories: " + fmt(worst) + " <= 1e-9");
    return o;
}

Outcome example_two() {
    Outcome o;
    const auto scn = fixture::scenario("nonquadratic_switching");
    const auto r = quiet_run(scn);
    const double gap = fixture::max_abs_diff(r.oracle.newton.x_star, fixture::kExample2Oracle);
    o.expect(r.oracle.newton.converged && gap <= 1e-6, "oracle NE (-3.3863, 1.3863, 0, -0.5, 2.5), gap " + fmt(gap));
    o.expect(!r.record.aborted, "adaptive switching run finished");
    o.expect(r.error_at_T && *r.error_at_T <= 1e-2, "error at T = " + opt(r.error_at_T) + " <= 1e-2");
    o.expect(r.verification.passed, "terminal state verified against the oracle");
    if (!r.reference) {
        o.expect(false, "printed profile present in the scenario");
        return o;
    }
    const auto& ref = *r.reference;
    o.expect(!ref.stationary && ref.worst_component == 3,
             "printed profile is not stationary: |F(x_ref)| = " + fmt(ref.residual) + ", worst component x_4");
    o.expect(std::abs(ref.difference[3] - 1.5) <= 1e-6, "x_4: oracle -0.5 vs printed -2");
    o.info(ref.explanation);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"oracle fidelity", oracle_fidelity},
        {"prescribed-time convergence", prescribed_time},
        {"comparison ordering", table_ordering},
        {"initial-condition independence", initial_condition_independence},
        {"adaptive variant", adaptive_variant},
        {"switching variant", switching_variant},
        {"numerical hygiene", hygiene},
        {"Lyapunov descent", lyapunov_descent},
        {"non-quadratic game", example_two},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome out;
        try {
            out = criteria[k].second();
        } catch (const std::exception& e) {
            out.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << k + 1 << ": " << criteria[k].first << '\n';
        for (const auto& d : out.details) std::cout << "      " << d << '\n';
        std::cout.flush();
        if (!out.pass) ++failed;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
