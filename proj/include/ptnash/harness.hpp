#pragma once

// Experiment execution on top of scenarios: oracle + integration + metrics,
// file output, comparison tables, initial-condition sweeps and assumption
// diagnostics.

#include "ptnash/dynamics.hpp"
#include "ptnash/oracle.hpp"
#include "ptnash/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ptnash {

// Thresholds reported for convergence times; 1e-2 is the headline.
inline constexpr double kConvergenceThresholds[] = {1e-1, 1e-2, 1e-3};

// Newton from the origin, then from a few fixed restarts if that fails. For
// affine games the direct solve is run too and its distance reported.
struct OracleReport {
    OracleResult newton;
    std::optional<double> direct_distance;  // |x_newton - x_direct| (affine games)
};
[[nodiscard]] OracleReport compute_oracle(const Game& game);

// Comparison of the oracle with an externally supplied profile.
struct ReferenceComparison {
    Vector profile;
    Vector pseudo_gradient;     // F(profile)
    double residual = 0.0;      // |F(profile)|
    bool stationary = false;    // residual <= 1e-6
    bool agrees = false;        // max_k |oracle_k - profile_k| <= 1e-3
    std::size_t worst_component = 0;    // argmax |F_k(profile)|
    Vector difference;          // oracle - profile
    double distance = 0.0;
    std::string explanation;
};
[[nodiscard]] ReferenceComparison compare_reference(const Game& game, const Vector& profile,
                                                    const Vector& oracle_x);

struct ThresholdTime {
    double threshold = 0.0;
    std::optional<double> time;
};

struct RunResult {
    Scenario scenario;
    std::string hash;
    OracleReport oracle;
    RunRecord record;
    VerificationReport verification;
    double tolerance = 0.0;               // absolute: relative_tol * |x*|
    std::vector<ThresholdTime> convergence;
    std::optional<double> error_at_T;     // prescribed-time variants reaching T
    double terminal_error = 0.0;
    std::optional<ReferenceComparison> reference;
    std::filesystem::path output_dir;     // empty when nothing was written
    double runtime_seconds = 0.0;

    [[nodiscard]] std::optional<double> time_at(double threshold) const;
};

struct RunOptions {
    bool write_files = true;
    std::optional<std::filesystem::path> output_dir;  // overrides the scenario's
};

// Oracle, integration, metrics; optionally writes trajectory.csv, gains.csv
// (adaptive variants), summary.json and scenario.yaml. A blow-up is reported
// through record.aborted rather than thrown, and the files carry it.
[[nodiscard]] RunResult run_scenario(const Scenario& scn, const RunOptions& opts = {});

// Column layout: t, x[i][j] (row-major), rel_error, consensus_residual, u_norm, lyapunov.
void write_trajectory_csv(const RunRecord& record, std::ostream& out);
// Columns: t, then k[i-j] per union-graph edge.
void write_gains_csv(const RunRecord& record, std::ostream& out);
[[nodiscard]] std::string summary_json(const RunResult& result);
[[nodiscard]] std::string render_run(const RunResult& result);

struct ComparisonRow {
    std::string name;
    Variant variant = Variant::StaticGain;
    double kappa = 0.0;  // static gain, or initial edge gain for adaptive variants
    double c = 0.0;
    std::optional<double> prescribed_time;
    std::optional<double> time;  // convergence time at the table threshold
    double terminal_error = 0.0;
};

struct ComparisonTable {
    double threshold = 1e-2;
    std::vector<ComparisonRow> rows;  // ascending time; unconverged rows last
};

// Needs >= 2 scenarios on the same game with the same initial state; throws
// std::invalid_argument otherwise. Runs are independent and may overlap.
[[nodiscard]] ComparisonTable compare(const std::vector<Scenario>& scenarios,
                                      double threshold = 1e-2);
[[nodiscard]] std::string comparison_csv(const ComparisonTable& table);
[[nodiscard]] std::string render_comparison(const ComparisonTable& table);

struct SweepScale {
    double scale = 1.0;
    std::size_t runs = 0;
    std::optional<double> max_error_at_T;      // prescribed-time variants
    std::optional<double> max_time;            // at 1e-2; empty if any run never converged
    double mean_time = 0.0;                    // over converged runs
    std::size_t unconverged = 0;
    std::size_t aborted = 0;
    std::vector<double> errors_at_T;
    std::vector<std::optional<double>> times;
};

struct SweepReport {
    std::string scenario;
    Variant variant = Variant::StaticGain;
    std::uint64_t seed = 0;
    std::vector<SweepScale> scales;
};

// `count` random initial states per scale: entries uniform in
// [-radius, radius] * scale, radius from the scenario's random init settings
// (20 otherwise). Run k at scale index m uses seed + 1000003 m + k.
[[nodiscard]] SweepReport sweep_initial_conditions(const Scenario& scn, std::size_t count,
                                                   const std::vector<double>& scales,
                                                   std::uint64_t seed);
[[nodiscard]] std::string render_sweep(const SweepReport& report);

struct GraphDiagnostic {
    std::size_t index = 0;
    bool connected = false;
    double lambda2 = 0.0;
};

struct AssumptionReport {
    std::size_t players = 0;
    RegularityEstimate regularity;
    bool strongly_monotone = false;  // sampled monotonicity > 0
    bool switching = false;
    std::vector<GraphDiagnostic> graphs;
    double union_lambda2 = 0.0;
    double window = 0.0;
    JointConnectivityReport joint;
    std::optional<GainCertificate> certificate;  // static variant with eps > 0
    std::vector<std::string> notes;
};

[[nodiscard]] AssumptionReport check_assumptions(const Scenario& scn);
[[nodiscard]] std::string render_assumptions(const AssumptionReport& report);

}  // namespace ptnash
