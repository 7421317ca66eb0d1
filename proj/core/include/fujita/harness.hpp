#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fujita/config.hpp"
#include "fujita/integrator.hpp"
#include "fujita/operators.hpp"
#include "fujita/supersolution.hpp"

namespace fujita {

/// Initial profile from the configuration. For the super-solution profile the
/// amplitude override is the absolute A of U(., 0); otherwise it replaces A.
RadialFunction make_profile(const ExperimentConfig& cfg, const Grid& grid,
                            std::optional<double> amplitude = std::nullopt);

/// Super-solution parameters for the configured operator and boundary (A = fraction * A_max).
SuperSolutionParams make_supersolution(const ExperimentConfig& cfg, const Grid& grid);

/// Problem and sampled initial data for one trajectory.
struct Scenario {
    Problem problem;
    Field initial;
};

Scenario make_scenario(const ExperimentConfig& cfg, std::optional<double> amplitude = std::nullopt);

/// Runs cfg once. keep_snapshots as in RunOptions.
RunOutcome run_single(const ExperimentConfig& cfg, bool keep_snapshots = false,
                      std::optional<double> amplitude = std::nullopt);

/// Calls job(i) for i in [0, n) on up to `workers` threads.
/// Results are written by index, so output order never depends on scheduling.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& job);

// ---------------------------------------------------------------------------
// Boundary-condition ordering: Dirichlet <= Robin(alpha) <= Neumann.

struct OrderingReport {
    RunOutcome dirichlet;
    RunOutcome robin;
    RunOutcome neumann;
    /// max over common output times of max_i(lower_i - upper_i) / ||neumann||.
    double max_violation = 0.0;
    double max_violation_time = 0.0;
    std::size_t compared_times = 0;
    /// Tie between Robin and Neumann when alpha == 0 (max abs difference).
    double robin_neumann_difference = 0.0;
    /// If Dirichlet blows up: T_N <= T_R <= T_D (within 1e-2 relative).
    std::optional<bool> blowup_time_ordering;
    double tolerance = 0.0;
    bool ordering_holds = false;
};

OrderingReport compare_boundary_conditions(const ExperimentConfig& cfg, std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Truncation: nested outer radii with a common mesh width.

struct TruncationMember {
    double outer_radius = 0.0;
    std::size_t intervals = 0;
    RunOutcome outcome;
    double tail_max = 0.0;  // max over t of u on r >= 0.75 R_max
};

struct TruncationReport {
    std::vector<TruncationMember> members;
    /// max over times and common nodes of u^(n) - u^(n+1); <= 0 means monotone.
    std::vector<double> monotonicity_violation;
    /// sup over times and common nodes of |u^(n+1) - u^(n)|.
    std::vector<double> cauchy_differences;
    /// cauchy[n] / cauchy[n+1].
    std::vector<double> decay_factors;
    bool monotone = false;
};

TruncationReport truncation_study(const ExperimentConfig& cfg, const TruncationFamily& family,
                                  std::size_t workers = 1, double tolerance = 1e-10);

// ---------------------------------------------------------------------------
// Exponent sweep and amplitude bisection.

struct SweepCell {
    double p = 0.0;
    double amplitude = 0.0;
    RunOutcome outcome;
    /// T_est for BlowUp, final sup-norm otherwise.
    double value = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
};

SweepResult sweep_exponent(std::span<const double> p_values, double amplitude,
                           const ExperimentConfig& cfg, std::size_t workers = 1);

struct BisectionResult {
    double lo = 0.0;  // Global
    double hi = 0.0;  // BlowUp
    std::size_t iterations = 0;
    double width = 0.0;
    std::vector<std::pair<double, RunOutcome::Kind>> trail;
};

/// Bisection on the amplitude of the configured profile. Undetermined midpoints
/// are treated as not-global and move the upper end.
BisectionResult bisect_amplitude(double p, const ExperimentConfig& cfg, double lo, double hi,
                                 std::size_t iterations);

// ---------------------------------------------------------------------------
// Super-solution certificates.

struct SuperSolutionReport {
    SuperSolutionParams params;
    double amplitude_max = 0.0;
    double gamma0 = 0.0;
    Certificate interior;
    Certificate boundary;
    Certificate initial_data;
    bool all_pass = false;
};

SuperSolutionReport verify_supersolution(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Thresholds.

/// Human-readable threshold summary for dimension N, (q, s) and an operator.
/// When p is given the hypothesis classification and its clauses are added.
std::string thresholds_report(int dimension, double q, double s, const OperatorSpec& op,
                              std::optional<double> p = std::nullopt,
                              const BoundaryCondition& bc = BoundaryCondition::robin(TimeCoefficient::constant(1.0)));

// ---------------------------------------------------------------------------
// Persistence.

/// "t,sup_norm,dt,boundary_value" with round-trip number formatting.
std::string series_csv(std::span<const TimeSample> series);

nlohmann::json to_json(const RunOutcome& outcome, double blowup_norm, double t_max);
nlohmann::json to_json(const Certificate& cert);

struct ExperimentRecord {
    std::string id;
    std::string experiment;
    std::string config_text;
    nlohmann::json result;             // experiment-specific outcome block
    std::vector<std::string> csv_files;
    double wall_clock_seconds = 0.0;
    int exit_code = 0;                 // 0 classified, 2 undetermined, 1 failure report

    nlohmann::json to_json() const;
};

/// Runs the experiment named in cfg.name, writes CSV files into out_dir and
/// appends one JSON line to out_dir/records.jsonl.
ExperimentRecord run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                std::size_t workers = 1);

/// Library version tag embedded into every record.
std::string version_tag();

}  // namespace fujita
