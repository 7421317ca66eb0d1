#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fujita/domain_grid.hpp"

namespace fujita {

/**
 * Radial coefficient of the elliptic operator, with an optional analytic
 * derivative. Without one, derivatives are taken by central differences
 * with step 1e-6 * max(1, r).
 *
 * The named presets are the only forms accepted from configuration files:
 *   constant(c)              c
 *   inverse_power(c0,c1,k)   c0 + c1 * r^-k
 *   saturating(c,k)          c / (1 + k * r^-2)
 */
class Coefficient {
public:
    Coefficient() : Coefficient(constant(0.0)) {}
    Coefficient(RadialFunction value, std::optional<RadialFunction> derivative = std::nullopt,
                std::string label = "custom");

    static Coefficient constant(double c);
    static Coefficient inverse_power(double c0, double c1, double k);
    static Coefficient saturating(double c, double k);

    double operator()(double r) const { return value_(r); }
    double derivative(double r) const;
    bool has_analytic_derivative() const noexcept { return derivative_.has_value(); }
    const std::string& label() const noexcept { return label_; }

private:
    RadialFunction value_;
    std::optional<RadialFunction> derivative_;
    std::string label_;
};

/// Time-dependent Robin coefficient alpha(t) with a known lower bound.
class TimeCoefficient {
public:
    TimeCoefficient(std::function<double(double)> value, double infimum, std::string label = "custom");

    static TimeCoefficient constant(double c);
    /// c0 + c1 / (1 + t)^k, k >= 0.
    static TimeCoefficient relaxing(double c0, double c1, double k);

    double operator()(double t) const { return value_(t); }
    /// inf over t >= 0.
    double infimum() const noexcept { return infimum_; }
    const std::string& label() const noexcept { return label_; }

private:
    std::function<double(double)> value_;
    double infimum_;
    std::string label_;
};

/// Source term weight * t^q * r^s * u^p.
struct Nonlinearity {
    double p = 2.0;
    double q = 0.0;
    double s = 0.0;
    double weight = 1.0;  // 0 disables the source (used by manufactured-solution tests)

    double rate(double r, double t, double u) const;
};

/**
 * L u = r^(1-N) d/dr (r^(N-1) a(r) du/dr) + b_r(r) du/dr,
 * i.e. A(x) = a(|x|) I and b(x) = b_r(|x|) x / |x|, together with the
 * source parameters (p, q, s).
 */
struct OperatorSpec {
    Coefficient a = Coefficient::constant(1.0);
    Coefficient drift = Coefficient::constant(0.0);
    double p = 2.0;
    double q = 0.0;
    double s = 0.0;

    static OperatorSpec laplacian(double p, double q = 0.0, double s = 0.0);

    Nonlinearity nonlinearity() const { return {p, q, s, 1.0}; }
};

/// Throws InvalidArgument if p <= 1, q < 0, s < 0 or a is not in (0, 1] at some node.
void validate_operator(const OperatorSpec& op, const Grid& grid);

struct BoundaryCondition {
    enum class Kind { Robin, Neumann, Dirichlet };

    Kind kind = Kind::Neumann;
    std::optional<TimeCoefficient> alpha;
    double c_lower = 0.0;

    static BoundaryCondition robin(TimeCoefficient alpha);
    static BoundaryCondition robin(TimeCoefficient alpha, double c_lower);
    static BoundaryCondition neumann();
    static BoundaryCondition dirichlet();

    /// alpha(t); zero for Neumann. Not defined for Dirichlet.
    double alpha_at(double t) const;
};

std::string to_string(BoundaryCondition::Kind kind);

/// Tridiagonal discretisation of L with its inner and outer closures.
struct DiscreteOperator {
    std::vector<double> sub;    // sub[i] couples row i to i-1 (sub[0] unused)
    std::vector<double> diag;
    std::vector<double> super;  // super[i] couples row i to i+1 (super[M] unused)
    BoundaryCondition::Kind bc_kind = BoundaryCondition::Kind::Neumann;
    double alpha = 0.0;         // alpha value used for the inner row
    double time = 0.0;          // assembly time
    std::size_t upwind_rows = 0;  // rows where the drift fell back to one-sided differences

    std::size_t size() const noexcept { return diag.size(); }
    /// (Op u)_i.
    std::vector<double> apply(std::span<const double> u) const;
    /// Row sums of Op.
    std::vector<double> row_sums() const;
    /// Off-diagonals >= 0 and row sums <= 0, so I - dt Op is an M-matrix for every dt > 0.
    bool m_matrix_structure() const;
};

/**
 * Second-order discretisation of L on the grid.
 *
 * Interior rows use the conservative flux form with face weights
 * r_{i+-1/2}^(N-1) a(r_{i+-1/2}); the drift uses the centred three-point
 * derivative, falling back to one-sided differences where centring would
 * make an off-diagonal negative. The inner row eliminates a ghost node
 * u_{-1} = u_1 - 2 h alpha u_0 from du/dr(R) = alpha u(R), which is
 * d_nu u + alpha u = 0 with nu = -e_r. The outer row pins u = 0, and so
 * does the inner row for Dirichlet.
 */
DiscreteOperator assemble_diffusion(const Grid& grid, const OperatorSpec& op,
                                    const BoundaryCondition& bc, double t);

/// rho = sum a_ij x_i x_j / |x|^2 = a(r) under the isotropic reduction.
double rho(const OperatorSpec& op, double r);

struct LPair {
    double l;       // r (a'(r) - b_r(r))
    double lstar;   // r (a'(r) + b_r(r))
};

LPair l_and_lstar(const OperatorSpec& op, double r);

/// div b for b(x) = b_r(|x|) x/|x|: b_r' + (N-1) b_r / r.
double drift_divergence(const OperatorSpec& op, int dimension, double r);

/// gamma0 = 1/2 min over nodes of (N a + l*). The true infimum runs over the
/// whole domain; the report carries the neighbourhood of the minimiser so the
/// grid approximation can be judged.
struct Gamma0Report {
    double value = 0.0;
    std::size_t argmin = 0;
    double radius_at_min = 0.0;
    std::vector<double> neighbour_values;  // half of (N a + l*) at argmin-1, argmin, argmin+1
    bool positive = false;                 // false signals the hypothesis failure
};

Gamma0Report gamma0(const OperatorSpec& op, const DomainSpec& domain, const Grid& grid);

struct Clause {
    std::string name;
    bool holds = false;
    std::string detail;
};

struct OneDimBlowupReport {
    bool holds = false;
    std::vector<Clause> clauses;
};

/// 1 < p < 3 + 2q + s, ((2+2q+s)/(p-1) - 2) a + l > 0 and div b <= 0 on the grid.
OneDimBlowupReport one_dim_blowup_condition(const OperatorSpec& op, const Grid& grid, double p,
                                            double q, double s);

enum class TheoryClass { GuaranteedBlowUp, GlobalExistencePossible, OutsideTheory };

std::string to_string(TheoryClass c);

struct HypothesisReport {
    TheoryClass classification = TheoryClass::OutsideTheory;
    std::vector<Clause> clauses;
    std::optional<double> blowup_threshold;
    std::optional<double> global_threshold;
    double fujita = 0.0;
    Gamma0Report gamma;
};

/// Checks the hypotheses of the blow-up and global existence results on the grid.
/// Robin coefficients are sampled on t in [0, alpha_horizon].
HypothesisReport hypothesis_report(const OperatorSpec& op, const DomainSpec& domain,
                                   const Grid& grid, const BoundaryCondition& bc, double p,
                                   double q, double s, double alpha_horizon = 100.0);

}  // namespace fujita
