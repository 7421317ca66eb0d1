#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fujita/domain_grid.hpp"
#include "fujita/operators.hpp"

namespace fujita {

/// Space-time source f(r, t) added to the explicit stage (manufactured solutions).
using Forcing = std::function<double(double r, double t)>;

struct SolverConfig {
    double dt0 = 1e-2;
    double dt_min = 1e-12;
    double sigma = 0.1;            // fraction of the nonlinear time scale per step
    double blowup_norm = 1e8;      // M_blow
    double t_max = 100.0;
    double theta = 1.0;            // 1: backward Euler, 0.5: trapezoidal diffusion
    double output_interval = 0.5;
    std::size_t max_steps = 20'000'000;

    bool operator==(const SolverConfig&) const = default;
};

/// Throws InvalidArgument unless 0 < dt_min <= dt0, M_blow > 1, T_max > 0,
/// sigma in (0,1), theta in {1, 1/2} and output_interval > 0.
void validate_solver_config(const SolverConfig& cfg);

struct TimeSample {
    double t = 0.0;
    double sup_norm = 0.0;
    double dt = 0.0;
    double boundary_value = 0.0;

    bool operator==(const TimeSample&) const = default;
};

struct RunOutcome {
    enum class Kind { Global, BlowUp, Undetermined };

    Kind kind = Kind::Undetermined;
    double final_sup = 0.0;
    double final_t = 0.0;
    double last_valid_t = 0.0;
    std::optional<double> blowup_time;  // T_est
    std::string reason;                 // Undetermined cause, or blow-up trigger
    std::size_t steps = 0;
    /// Samples at every output time; once the norm passes M_blow / 10, every step.
    std::vector<TimeSample> series;
    /// Fields at t = 0 and every output time (only when requested).
    std::vector<Field> snapshots;
};

std::string to_string(RunOutcome::Kind kind);

/// Everything needed to integrate one trajectory.
struct Problem {
    Grid grid;
    OperatorSpec op;
    BoundaryCondition bc;
    Nonlinearity nonlinearity;
    std::optional<Forcing> forcing;
};

Problem make_problem(Grid grid, OperatorSpec op, BoundaryCondition bc);

/**
 * One IMEX step from state.t to state.t + dt:
 *
 *   (I - theta dt Op) u+ = (I + (1 - theta) dt Op) u + dt t^q r^s u^p [+ dt f(r, t + theta dt)]
 *
 * The source uses the old state and old time. Pinned rows (outer node, and
 * the inner node for Dirichlet) are set to zero. Undershoots down to -1e-14
 * are clamped; anything below throws NumericalError.
 */
Field step(const Field& state, double dt, const DiscreteOperator& op, const Grid& grid,
           const Nonlinearity& nonlinearity, double theta = 1.0, const Forcing* forcing = nullptr);

/// dt * f(r_i, t) at every node, zero on pinned rows.
std::vector<double> forcing_contribution(const Grid& grid, const Forcing& f, double t, double dt,
                                         BoundaryCondition::Kind bc_kind);

/// max(dt_min, min(dt0, sigma / (p ||u||^(p-1) + 1e-30))).
double adapt_dt(const Field& state, const SolverConfig& cfg, const Nonlinearity& nonlinearity);

struct RunOptions {
    bool keep_snapshots = false;
};

/**
 * Integrates from phi up to cfg.t_max.
 *
 * Output times k * output_interval are hit exactly, so trajectories with
 * different boundary conditions or truncation radii can be compared
 * pointwise. Blow-up is declared when the sup-norm reaches M_blow, or when dt
 * sits at dt_min and the norm grew tenfold over the last 100 steps.
 */
RunOutcome run(const Problem& problem, const Field& phi, const SolverConfig& cfg,
               const RunOptions& options = {});

/// z(t) for z' = z^p, z(0) = phi_sup; nullopt once t >= S = 1/((p-1) phi_sup^(p-1)).
std::optional<double> ode_envelope(double t, double p, double phi_sup);

/// S = 1/((p-1) phi_sup^(p-1)).
double ode_blowup_time(double p, double phi_sup);

/**
 * Least-squares fit of sup^(1-p) against t over the samples whose norm is at
 * least tail_floor; returns the root of the fitted line, never earlier than
 * the last sample. Throws NumericalError with fewer than 4 tail samples or a
 * tail that is not strictly increasing.
 */
double estimate_blowup_time(std::span<const TimeSample> series, double p, double tail_floor);

}  // namespace fujita
