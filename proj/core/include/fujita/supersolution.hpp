#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fujita/domain_grid.hpp"
#include "fujita/operators.hpp"

namespace fujita {

/// U(x,t) = A (t + t0)^-mu exp(-|x|^2 / (4 (t + t0))).
struct SuperSolutionParams {
    double amplitude = 0.0;  // A
    double t0 = 1.0;
    double mu = 0.0;
    // (p, q, s) the parameters were generated for.
    double p = 2.0;
    double q = 0.0;
    double s = 0.0;
};

/// (2 + 2q + s)/(2p - 2); 1/(p - 1) when q = s = 0.
double mu(double p, double q, double s);

/// Shift t0 such that -x.nu/(2 t0) + c >= 0 on the boundary. For the exterior
/// ball and the two-ray domain x.nu = -R < 0, so every t0 works and 1 is returned.
double select_t0(const DomainSpec& domain, double c_lower);

/// General rule for a boundary with sup(x.nu) = sup_x_dot_nu:
/// t0 = max(1, sup_x_dot_nu / (2c)). Throws HypothesisFailed if sup_x_dot_nu > 0 and c <= 0.
double select_t0(double sup_x_dot_nu, double c_lower);

/// C_s = (2s/(p-1))^(s/2) e^(-s/2) = max over r of r^s exp(-(p-1) r^2 / (4 tau)) tau^(-s/2); C_0 = 1.
double overestimation_constant(double p, double s);

/// A_max = ((gamma0 - mu)/C_s)^(1/(p-1)). Throws HypothesisFailed when gamma0 <= mu.
double amplitude_bound(double gamma0, double mu, double p, double s);

/// Builds (fraction * A_max, t0, mu) for the operator; fraction in (0, 1].
SuperSolutionParams select_params(const OperatorSpec& op, const DomainSpec& domain,
                                  const Grid& grid, double c_lower, double fraction);

struct SuperSolutionValues {
    double u = 0.0;
    double du_dt = 0.0;
    double lu = 0.0;
    double du_dnu = 0.0;  // meaningful at r = R only
};

/// Closed forms of U, dU/dt, LU and d_nu U at (r, t) under A = a(r) I, b = b_r x/r.
SuperSolutionValues evaluate(const SuperSolutionParams& params, const OperatorSpec& op,
                             const DomainSpec& domain, double r, double t);

double supersolution_value(const SuperSolutionParams& params, double r, double t);

struct Certificate {
    enum class Kind { Interior, Boundary, InitialData };

    Kind kind = Kind::Interior;
    double min_residual = 0.0;
    double at_r = 0.0;
    double at_t = 0.0;
    std::size_t radial_samples = 0;
    std::size_t time_samples = 0;
    double r_max = 0.0;  // sampled box
    double t_max = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

std::string to_string(Certificate::Kind kind);

struct SampleBox {
    double r_probe = 10.0;
    double t_probe = 10.0;
    std::size_t radial = 400;
    std::size_t temporal = 200;

    bool operator==(const SampleBox&) const = default;
};

/// R..r_probe geometrically spaced.
std::vector<double> radial_samples(double inner, const SampleBox& box);
/// 0 followed by geometric spacing from 1e-3 t_probe up to t_probe.
std::vector<double> time_samples(const SampleBox& box);

/**
 * min over the box of (dU/dt - LU - t^q r^s U^p) / U; passes iff >= -tol.
 * include_source = false drops the source term (used for the heat-kernel exactness check).
 */
Certificate verify_interior(const SuperSolutionParams& params, const OperatorSpec& op,
                            const DomainSpec& domain, const SampleBox& box, double tol = 1e-10,
                            bool include_source = true);

/// min over sampled t of (d_nu U + alpha U)/U = -x.nu/(2(t+t0)) + alpha(t); passes iff >= -tol.
Certificate verify_boundary(const SuperSolutionParams& params, const TimeCoefficient& alpha,
                            const DomainSpec& domain, const SampleBox& box, double tol = 1e-10);

/// True iff phi(r_i) <= U(r_i, 0) at every node.
bool admissible_initial_data(const Field& phi, const SuperSolutionParams& params, const Grid& grid);

/// Certificate form of admissible_initial_data: min over nodes of U(r_i,0) - phi_i.
Certificate verify_initial_data(const Field& phi, const SuperSolutionParams& params,
                                const Grid& grid);

}  // namespace fujita
