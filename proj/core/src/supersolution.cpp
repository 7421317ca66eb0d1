#include "fujita/supersolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fujita/error.hpp"
#include "fujita/thresholds.hpp"

namespace fujita {

double mu(double p, double q, double s) {
    if (q < 0.0 || s < 0.0) throw InvalidArgument("q and s must be non-negative");
    return supersolution_mu(p, q, s);
}

double select_t0(double sup_x_dot_nu, double c_lower) {
    if (sup_x_dot_nu <= 0.0) return 1.0;
    if (!(c_lower > 0.0)) {
        throw HypothesisFailed(fmt::format(
            "boundary with sup(x.nu) = {} > 0 needs alpha >= c > 0", sup_x_dot_nu));
    }
    return std::max(1.0, sup_x_dot_nu / (2.0 * c_lower));
}

double select_t0(const DomainSpec& domain, double c_lower) {
    if (c_lower < 0.0) throw InvalidArgument("c_lower must be non-negative");
    return select_t0(domain.boundary_x_dot_nu(), c_lower);
}

double overestimation_constant(double p, double s) {
    if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
    if (s < 0.0) throw InvalidArgument("s must be non-negative");
    if (s == 0.0) return 1.0;
    return std::pow(2.0 * s / (p - 1.0), 0.5 * s) * std::exp(-0.5 * s);
}

double amplitude_bound(double gamma0, double mu, double p, double s) {
    if (!(gamma0 > mu)) {
        throw HypothesisFailed(fmt::format(
            "super-solution needs gamma0 > mu (gamma0 = {}, mu = {}); p is not above the global threshold",
            gamma0, mu));
    }
    return std::pow((gamma0 - mu) / overestimation_constant(p, s), 1.0 / (p - 1.0));
}

SuperSolutionParams select_params(const OperatorSpec& op, const DomainSpec& domain,
                                  const Grid& grid, double c_lower, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InvalidArgument(fmt::format("amplitude fraction must lie in (0, 1], got {}", fraction));
    }
    const auto g = gamma0(op, domain, grid);
    if (!g.positive) throw HypothesisFailed("2 gamma0 > 0 fails on the grid");
    SuperSolutionParams params;
    params.p = op.p;
    params.q = op.q;
    params.s = op.s;
    params.mu = mu(op.p, op.q, op.s);
    params.amplitude = fraction * amplitude_bound(g.value, params.mu, op.p, op.s);
    params.t0 = select_t0(domain, c_lower);
    return params;
}

double supersolution_value(const SuperSolutionParams& params, double r, double t) {
    const double tau = t + params.t0;
    return params.amplitude * std::pow(tau, -params.mu) * std::exp(-r * r / (4.0 * tau));
}

namespace {

struct Factors {
    double time;    // (dU/dt)/U
    double spatial; // (LU)/U
};

Factors factors(const SuperSolutionParams& params, const OperatorSpec& op, int dimension, double r,
                double t) {
    const double tau = t + params.t0;
    const double quad = r * r / (4.0 * tau * tau);
    const double a = op.a(r);
    const double lstar = l_and_lstar(op, r).lstar;
    return {-params.mu / tau + quad, a * quad - (dimension * a + lstar) / (2.0 * tau)};
}

}  // namespace

SuperSolutionValues evaluate(const SuperSolutionParams& params, const OperatorSpec& op,
                             const DomainSpec& domain, double r, double t) {
    const double u = supersolution_value(params, r, t);
    const auto f = factors(params, op, domain.dimension(), r, t);
    const double tau = t + params.t0;
    return {u, f.time * u, f.spatial * u, -domain.boundary_x_dot_nu() / (2.0 * tau) * u};
}

std::string to_string(Certificate::Kind kind) {
    switch (kind) {
        case Certificate::Kind::Interior: return "interior";
        case Certificate::Kind::Boundary: return "boundary";
        case Certificate::Kind::InitialData: return "initial_data";
    }
    return "?";
}

std::vector<double> radial_samples(double inner, const SampleBox& box) {
    if (box.radial < 2 || !(box.r_probe > inner)) throw InvalidArgument("bad radial sample box");
    std::vector<double> r(box.radial);
    const double ratio = std::pow(box.r_probe / inner, 1.0 / static_cast<double>(box.radial - 1));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = inner * std::pow(ratio, static_cast<double>(i));
    r.front() = inner;
    r.back() = box.r_probe;
    return r;
}

std::vector<double> time_samples(const SampleBox& box) {
    if (box.temporal < 3 || !(box.t_probe > 0.0)) throw InvalidArgument("bad time sample box");
    std::vector<double> t(box.temporal);
    t[0] = 0.0;
    const double first = 1e-3 * box.t_probe;
    const double ratio = std::pow(box.t_probe / first, 1.0 / static_cast<double>(box.temporal - 2));
    for (std::size_t j = 1; j < t.size(); ++j) t[j] = first * std::pow(ratio, static_cast<double>(j - 1));
    t.back() = box.t_probe;
    return t;
}

Certificate verify_interior(const SuperSolutionParams& params, const OperatorSpec& op,
                            const DomainSpec& domain, const SampleBox& box, double tol,
                            bool include_source) {
    const auto rs = radial_samples(domain.inner_radius(), box);
    const auto ts = time_samples(box);
    Certificate cert;
    cert.kind = Certificate::Kind::Interior;
    cert.radial_samples = rs.size();
    cert.time_samples = ts.size();
    cert.r_max = box.r_probe;
    cert.t_max = box.t_probe;
    cert.tolerance = tol;
    cert.min_residual = std::numeric_limits<double>::infinity();

    for (double t : ts) {
        for (double r : rs) {
            const auto f = factors(params, op, domain.dimension(), r, t);
            double residual = f.time - f.spatial;
            if (include_source) {
                // t^q r^s U^p / U
                double src = std::pow(supersolution_value(params, r, t), params.p - 1.0);
                if (params.q != 0.0) src *= std::pow(t, params.q);
                if (params.s != 0.0) src *= std::pow(r, params.s);
                residual -= src;
            }
            if (residual < cert.min_residual) {
                cert.min_residual = residual;
                cert.at_r = r;
                cert.at_t = t;
            }
        }
    }
    cert.pass = cert.min_residual >= -tol;
    return cert;
}

Certificate verify_boundary(const SuperSolutionParams& params, const TimeCoefficient& alpha,
                            const DomainSpec& domain, const SampleBox& box, double tol) {
    const auto ts = time_samples(box);
    Certificate cert;
    cert.kind = Certificate::Kind::Boundary;
    cert.radial_samples = 1;
    cert.time_samples = ts.size();
    cert.r_max = domain.inner_radius();
    cert.t_max = box.t_probe;
    cert.tolerance = tol;
    cert.min_residual = std::numeric_limits<double>::infinity();
    cert.at_r = domain.inner_radius();
    for (double t : ts) {
        const double residual = -domain.boundary_x_dot_nu() / (2.0 * (t + params.t0)) + alpha(t);
        if (residual < cert.min_residual) {
            cert.min_residual = residual;
            cert.at_t = t;
        }
    }
    cert.pass = cert.min_residual >= -tol;
    return cert;
}

Certificate verify_initial_data(const Field& phi, const SuperSolutionParams& params,
                                const Grid& grid) {
    if (phi.values.size() != grid.size()) throw InvalidArgument("field/grid size mismatch");
    Certificate cert;
    cert.kind = Certificate::Kind::InitialData;
    cert.radial_samples = grid.size();
    cert.time_samples = 1;
    cert.r_max = grid.outer();
    cert.min_residual = std::numeric_limits<double>::infinity();
    const auto r = grid.nodes();
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double gap = supersolution_value(params, r[i], 0.0) - phi.values[i];
        if (gap < cert.min_residual) {
            cert.min_residual = gap;
            cert.at_r = r[i];
        }
    }
    cert.pass = cert.min_residual >= 0.0;
    return cert;
}

bool admissible_initial_data(const Field& phi, const SuperSolutionParams& params, const Grid& grid) {
    return verify_initial_data(phi, params, grid).pass;
}

}  // namespace fujita
