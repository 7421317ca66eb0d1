#include "fujita/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <fmt/format.h>

#include "fujita/error.hpp"
#include "fujita/tridiagonal.hpp"

namespace fujita {

namespace {

constexpr double kClampTolerance = 1e-14;
constexpr double kAlphaRelTolerance = 1e-12;
constexpr std::size_t kStallWindow = 100;

bool inner_pinned(BoundaryCondition::Kind kind) { return kind == BoundaryCondition::Kind::Dirichlet; }

}  // namespace

void validate_solver_config(const SolverConfig& cfg) {
    if (!(cfg.dt_min > 0.0) || !(cfg.dt_min <= cfg.dt0)) {
        throw InvalidArgument("solver needs 0 < dt_min <= dt0");
    }
    if (!(cfg.blowup_norm > 1.0)) throw InvalidArgument("blow-up norm M_blow must exceed 1");
    if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) throw InvalidArgument("T_max must be positive");
    if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) throw InvalidArgument("sigma must lie in (0, 1)");
    if (cfg.theta != 1.0 && cfg.theta != 0.5) throw InvalidArgument("theta must be 1 or 0.5");
    if (!(cfg.output_interval > 0.0)) throw InvalidArgument("output interval must be positive");
}

std::string to_string(RunOutcome::Kind kind) {
    switch (kind) {
        case RunOutcome::Kind::Global: return "Global";
        case RunOutcome::Kind::BlowUp: return "BlowUp";
        case RunOutcome::Kind::Undetermined: return "Undetermined";
    }
    return "?";
}

Problem make_problem(Grid grid, OperatorSpec op, BoundaryCondition bc) {
    validate_operator(op, grid);
    Nonlinearity nl = op.nonlinearity();
    return Problem{std::move(grid), std::move(op), std::move(bc), nl, std::nullopt};
}

std::vector<double> forcing_contribution(const Grid& grid, const Forcing& f, double t, double dt,
                                         BoundaryCondition::Kind bc_kind) {
    const auto r = grid.nodes();
    std::vector<double> out(r.size(), 0.0);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) out[i] = dt * f(r[i], t);
    if (inner_pinned(bc_kind)) out.front() = 0.0;
    return out;
}

Field step(const Field& state, double dt, const DiscreteOperator& op, const Grid& grid,
           const Nonlinearity& nonlinearity, double theta, const Forcing* forcing) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
    const std::size_t n = grid.size();
    if (state.values.size() != n || op.size() != n) throw InvalidArgument("state/operator size mismatch");

    const auto r = grid.nodes();
    const auto& u = state.values;
    std::vector<double> rhs(u);

    if (theta != 1.0) {
        const auto lu = op.apply(u);
        for (std::size_t i = 0; i < n; ++i) rhs[i] += (1.0 - theta) * dt * lu[i];
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] += dt * nonlinearity.rate(r[i], state.t, u[i]);
    if (forcing != nullptr) {
        const auto extra = forcing_contribution(grid, *forcing, state.t + theta * dt, dt, op.bc_kind);
        for (std::size_t i = 0; i < n; ++i) rhs[i] += extra[i];
    }

    std::vector<double> sub(n), diag(n), super(n);
    for (std::size_t i = 0; i < n; ++i) {
        sub[i] = -theta * dt * op.sub[i];
        diag[i] = 1.0 - theta * dt * op.diag[i];
        super[i] = -theta * dt * op.super[i];
    }
    auto pin = [&](std::size_t i) {
        sub[i] = 0.0;
        super[i] = 0.0;
        diag[i] = 1.0;
        rhs[i] = 0.0;
    };
    pin(n - 1);
    if (inner_pinned(op.bc_kind)) pin(0);

    Field next;
    next.t = state.t + dt;
    next.values = solve_tridiagonal(sub, diag, super, rhs);
    for (std::size_t i = 0; i < n; ++i) {
        double& v = next.values[i];
        if (!std::isfinite(v)) throw NumericalError(fmt::format("non-finite value at node {}", i));
        if (v < 0.0) {
            if (v < -kClampTolerance) {
                throw NumericalError(fmt::format(
                    "positivity lost at node {} (value {}), scheme contract violated", i, v));
            }
            v = 0.0;
        }
    }
    next.values.back() = 0.0;
    return next;
}

double adapt_dt(const Field& state, const SolverConfig& cfg, const Nonlinearity& nonlinearity) {
    const double norm = state.sup_norm();
    const double p = nonlinearity.p;
    const double rate = p * std::pow(norm, p - 1.0) + 1e-30;
    return std::max(cfg.dt_min, std::min(cfg.dt0, cfg.sigma / rate));
}

RunOutcome run(const Problem& problem, const Field& phi, const SolverConfig& cfg,
               const RunOptions& options) {
    validate_solver_config(cfg);
    validate_field(phi, problem.grid);

    RunOutcome out;
    Field u = phi;
    u.t = 0.0;
    const double tail_floor = cfg.blowup_norm / 10.0;
    const Forcing* forcing = problem.forcing ? &*problem.forcing : nullptr;

    auto sample = [&](double dt) {
        out.series.push_back({u.t, u.sup_norm(), dt, u.boundary_value()});
    };
    auto finish = [&](RunOutcome::Kind kind) {
        out.kind = kind;
        out.final_sup = u.sup_norm();
        out.final_t = u.t;
        return out;
    };

    DiscreteOperator op;
    try {
        op = assemble_diffusion(problem.grid, problem.op, problem.bc, 0.0);
    } catch (const Error& e) {
        out.reason = e.what();
        return finish(RunOutcome::Kind::Undetermined);
    }

    sample(0.0);
    if (options.keep_snapshots) out.snapshots.push_back(u);

    std::size_t next_output = 1;
    std::deque<double> floor_window;

    while (true) {
        const double norm = u.sup_norm();
        if (norm >= cfg.blowup_norm) {
            out.reason = "sup-norm reached M_blow";
            break;
        }
        if (u.t >= cfg.t_max) return finish(RunOutcome::Kind::Global);
        if (out.steps >= cfg.max_steps) {
            out.reason = fmt::format("step budget of {} exhausted at t = {}", cfg.max_steps, u.t);
            return finish(RunOutcome::Kind::Undetermined);
        }

        double dt = adapt_dt(u, cfg, problem.nonlinearity);
        const bool at_floor = dt <= cfg.dt_min;
        const double t_out = std::min(cfg.t_max, static_cast<double>(next_output) * cfg.output_interval);
        bool hits_output = false;
        if (u.t + dt >= t_out) {
            dt = t_out - u.t;
            hits_output = true;
        }

        if (problem.bc.kind == BoundaryCondition::Kind::Robin) {
            const double alpha = problem.bc.alpha_at(u.t + cfg.theta * dt);
            if (std::abs(alpha - op.alpha) > kAlphaRelTolerance * std::max(1.0, std::abs(op.alpha))) {
                try {
                    op = assemble_diffusion(problem.grid, problem.op, problem.bc, u.t + cfg.theta * dt);
                } catch (const Error& e) {
                    out.reason = e.what();
                    return finish(RunOutcome::Kind::Undetermined);
                }
            }
        }

        try {
            u = step(u, dt, op, problem.grid, problem.nonlinearity, cfg.theta, forcing);
        } catch (const Error& e) {
            out.reason = fmt::format("step failed at t = {}: {}", u.t, e.what());
            return finish(RunOutcome::Kind::Undetermined);
        }
        ++out.steps;
        out.last_valid_t = u.t;

        if (hits_output) {
            u.t = t_out;
            ++next_output;
            sample(dt);
            if (options.keep_snapshots) out.snapshots.push_back(u);
        } else if (u.sup_norm() >= tail_floor) {
            sample(dt);
        }

        if (at_floor) {
            floor_window.push_back(u.sup_norm());
            if (floor_window.size() > kStallWindow) floor_window.pop_front();
            if (floor_window.size() == kStallWindow && floor_window.back() >= 10.0 * floor_window.front()) {
                out.reason = "time step stalled at dt_min with growing norm";
                break;
            }
        } else {
            floor_window.clear();
        }
    }

    // Blow-up: make sure the final state is in the series, then extrapolate T.
    if (out.series.empty() || out.series.back().t != u.t) sample(0.0);
    try {
        out.blowup_time = estimate_blowup_time(out.series, problem.nonlinearity.p, tail_floor);
    } catch (const Error& e) {
        out.blowup_time = u.t;
        out.reason += fmt::format("; T_est fell back to last time ({})", e.what());
    }
    return finish(RunOutcome::Kind::BlowUp);
}

double ode_blowup_time(double p, double phi_sup) {
    if (!(p > 1.0) || !(phi_sup > 0.0)) throw InvalidArgument("envelope needs p > 1 and phi_sup > 0");
    return 1.0 / ((p - 1.0) * std::pow(phi_sup, p - 1.0));
}

std::optional<double> ode_envelope(double t, double p, double phi_sup) {
    if (t < 0.0) throw InvalidArgument("envelope time must be non-negative");
    const double horizon = ode_blowup_time(p, phi_sup);
    if (t >= horizon) return std::nullopt;
    return std::pow(std::pow(phi_sup, 1.0 - p) - (p - 1.0) * t, -1.0 / (p - 1.0));
}

double estimate_blowup_time(std::span<const TimeSample> series, double p, double tail_floor) {
    std::vector<const TimeSample*> tail;
    for (const auto& s : series) {
        if (s.sup_norm >= tail_floor) tail.push_back(&s);
    }
    if (tail.size() < 4) {
        throw NumericalError(fmt::format("need at least 4 samples above {}, have {}", tail_floor,
                                         tail.size()));
    }
    for (std::size_t i = 1; i < tail.size(); ++i) {
        if (!(tail[i]->sup_norm > tail[i - 1]->sup_norm) || !(tail[i]->t > tail[i - 1]->t)) {
            throw NumericalError("blow-up tail is not strictly increasing");
        }
    }
    // Centre t for conditioning: the tail spans a tiny window near T.
    const double t_ref = tail.back()->t;
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const auto n = static_cast<double>(tail.size());
    for (const auto* s : tail) {
        const double x = s->t - t_ref;
        const double y = std::pow(s->sup_norm, 1.0 - p);
        st += x;
        sy += y;
        stt += x * x;
        sty += x * y;
    }
    const double denom = n * stt - st * st;
    if (!(denom > 0.0)) throw NumericalError("degenerate blow-up tail (no time spread)");
    const double slope = (n * sty - st * sy) / denom;
    const double intercept = (sy - slope * st) / n;
    if (!(slope < 0.0)) throw NumericalError("fitted sup^(1-p) is not decreasing");
    const double root = t_ref - intercept / slope;
    return std::max(root, t_ref);
}

}  // namespace fujita
