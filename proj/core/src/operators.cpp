#include "fujita/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fujita/error.hpp"
#include "fujita/thresholds.hpp"

namespace fujita {

namespace {

// Roundoff margin for sign tests on quantities that are exactly zero in
// exact arithmetic (e.g. N + r * (-N / r)).
constexpr double kSignTolerance = 1e-12;

double radial_weight(double r, int dimension) {
    return dimension == 1 ? 1.0 : std::pow(r, dimension - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Coefficients

Coefficient::Coefficient(RadialFunction value, std::optional<RadialFunction> derivative,
                         std::string label)
    : value_(std::move(value)), derivative_(std::move(derivative)), label_(std::move(label)) {
    if (!value_) throw InvalidArgument("coefficient needs a value function");
}

Coefficient Coefficient::constant(double c) {
    return {[c](double) { return c; }, [](double) { return 0.0; }, fmt::format("constant {}", c)};
}

Coefficient Coefficient::inverse_power(double c0, double c1, double k) {
    return {[=](double r) { return c0 + c1 * std::pow(r, -k); },
            [=](double r) { return -k * c1 * std::pow(r, -k - 1.0); },
            fmt::format("inverse_power {} {} {}", c0, c1, k)};
}

Coefficient Coefficient::saturating(double c, double k) {
    return {[=](double r) { return c / (1.0 + k / (r * r)); },
            [=](double r) {
                const double d = 1.0 + k / (r * r);
                return c * 2.0 * k / (r * r * r * d * d);
            },
            fmt::format("saturating {} {}", c, k)};
}

double Coefficient::derivative(double r) const {
    if (derivative_) return (*derivative_)(r);
    const double h = 1e-6 * std::max(1.0, std::abs(r));
    return (value_(r + h) - value_(r - h)) / (2.0 * h);
}

TimeCoefficient::TimeCoefficient(std::function<double(double)> value, double infimum,
                                 std::string label)
    : value_(std::move(value)), infimum_(infimum), label_(std::move(label)) {
    if (!value_) throw InvalidArgument("time coefficient needs a value function");
}

TimeCoefficient TimeCoefficient::constant(double c) {
    return {[c](double) { return c; }, c, fmt::format("constant {}", c)};
}

TimeCoefficient TimeCoefficient::relaxing(double c0, double c1, double k) {
    if (k < 0.0) throw InvalidArgument("relaxing alpha needs k >= 0");
    // (1+t)^-k runs over (0, 1] for k > 0.
    const double inf = k == 0.0 ? c0 + c1 : std::min(c0, c0 + c1);
    return {[=](double t) { return c0 + c1 * std::pow(1.0 + t, -k); }, inf,
            fmt::format("relaxing {} {} {}", c0, c1, k)};
}

double Nonlinearity::rate(double r, double t, double u) const {
    if (weight == 0.0 || u == 0.0) return 0.0;
    double v = weight * std::pow(u, p);
    if (q != 0.0) v *= std::pow(t, q);
    if (s != 0.0) v *= std::pow(r, s);
    return v;
}

OperatorSpec OperatorSpec::laplacian(double p, double q, double s) {
    OperatorSpec op;
    op.p = p;
    op.q = q;
    op.s = s;
    return op;
}

void validate_operator(const OperatorSpec& op, const Grid& grid) {
    if (!(op.p > 1.0)) throw InvalidArgument(fmt::format("p must exceed 1, got {}", op.p));
    if (op.q < 0.0 || op.s < 0.0) throw InvalidArgument("q and s must be non-negative");
    for (double r : grid.nodes()) {
        const double a = op.a(r);
        if (!std::isfinite(a) || a <= 0.0 || a > 1.0) {
            throw InvalidArgument(fmt::format(
                "normalisation 0 < rho <= 1 violated: a({}) = {}", r, a));
        }
        if (!std::isfinite(op.drift(r))) throw InvalidArgument("drift coefficient is not finite");
    }
}

// ---------------------------------------------------------------------------
// Boundary conditions

BoundaryCondition BoundaryCondition::robin(TimeCoefficient alpha) {
    const double c = std::max(0.0, alpha.infimum());
    return robin(std::move(alpha), c);
}

BoundaryCondition BoundaryCondition::robin(TimeCoefficient alpha, double c_lower) {
    if (c_lower < 0.0) throw InvalidArgument("c_lower must be non-negative");
    if (c_lower > alpha.infimum()) {
        throw InvalidArgument(fmt::format("c_lower {} exceeds inf alpha = {}", c_lower,
                                          alpha.infimum()));
    }
    BoundaryCondition bc;
    bc.kind = Kind::Robin;
    bc.alpha = std::move(alpha);
    bc.c_lower = c_lower;
    return bc;
}

BoundaryCondition BoundaryCondition::neumann() { return {}; }

BoundaryCondition BoundaryCondition::dirichlet() {
    BoundaryCondition bc;
    bc.kind = Kind::Dirichlet;
    return bc;
}

double BoundaryCondition::alpha_at(double t) const {
    switch (kind) {
        case Kind::Robin: return (*alpha)(t);
        case Kind::Neumann: return 0.0;
        case Kind::Dirichlet: break;
    }
    return std::numeric_limits<double>::infinity();
}

std::string to_string(BoundaryCondition::Kind kind) {
    switch (kind) {
        case BoundaryCondition::Kind::Robin: return "robin";
        case BoundaryCondition::Kind::Neumann: return "neumann";
        case BoundaryCondition::Kind::Dirichlet: return "dirichlet";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Assembly

std::vector<double> DiscreteOperator::apply(std::span<const double> u) const {
    const std::size_t n = size();
    if (u.size() != n) throw InvalidArgument("operator/field size mismatch");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * u[i];
        if (i > 0) v += sub[i] * u[i - 1];
        if (i + 1 < n) v += super[i] * u[i + 1];
        out[i] = v;
    }
    return out;
}

std::vector<double> DiscreteOperator::row_sums() const {
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = diag[i] + (i > 0 ? sub[i] : 0.0) + (i + 1 < n ? super[i] : 0.0);
    }
    return out;
}

bool DiscreteOperator::m_matrix_structure() const {
    const auto sums = row_sums();
    for (std::size_t i = 0; i < size(); ++i) {
        if (sub[i] < 0.0 || super[i] < 0.0) return false;
        const double scale = std::abs(diag[i]) + std::abs(sub[i]) + std::abs(super[i]);
        if (sums[i] > kSignTolerance * std::max(1.0, scale)) return false;
    }
    return true;
}

DiscreteOperator assemble_diffusion(const Grid& grid, const OperatorSpec& op,
                                    const BoundaryCondition& bc, double t) {
    const auto r = grid.nodes();
    const std::size_t n = r.size();
    const int dim = grid.domain().dimension();

    DiscreteOperator out;
    out.sub.assign(n, 0.0);
    out.diag.assign(n, 0.0);
    out.super.assign(n, 0.0);
    out.bc_kind = bc.kind;
    out.time = t;

    auto face_weight = [&](double rf) {
        const double a = op.a(rf);
        if (!std::isfinite(a) || a <= 0.0) {
            throw InvalidArgument(fmt::format("diffusion coefficient a({}) = {} is not positive", rf, a));
        }
        return radial_weight(rf, dim) * a;
    };
    for (double ri : r) {
        const double a = op.a(ri);
        if (!std::isfinite(a) || a <= 0.0) {
            throw InvalidArgument(fmt::format("diffusion coefficient a({}) = {} is not positive", ri, a));
        }
    }

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = r[i] - r[i - 1];
        const double hp = r[i + 1] - r[i];
        const double scale = 1.0 / (radial_weight(r[i], dim) * 0.5 * (hm + hp));
        double lower = scale * face_weight(r[i] - 0.5 * hm) / hm;
        double upper = scale * face_weight(r[i] + 0.5 * hp) / hp;
        double centre = -(lower + upper);

        const double b = op.drift(r[i]);
        if (b != 0.0) {
            const double cl = -b * hp / (hm * (hm + hp));
            const double cu = b * hm / (hp * (hm + hp));
            const double cd = b * (hp - hm) / (hm * hp);
            if (lower + cl >= 0.0 && upper + cu >= 0.0) {
                lower += cl;
                upper += cu;
                centre += cd;
            } else {
                ++out.upwind_rows;
                if (b > 0.0) {
                    upper += b / hp;
                    centre -= b / hp;
                } else {
                    lower -= b / hm;
                    centre += b / hm;
                }
            }
        }
        out.sub[i] = lower;
        out.diag[i] = centre;
        out.super[i] = upper;
    }

    if (bc.kind != BoundaryCondition::Kind::Dirichlet) {
        const double alpha = bc.alpha_at(t);
        if (!std::isfinite(alpha) || alpha < 0.0) {
            throw InvalidArgument(fmt::format("Robin coefficient alpha({}) = {} is negative", t, alpha));
        }
        out.alpha = alpha;
        const double big_r = r[0];
        const double h = r[1] - r[0];
        if (!(big_r - 0.5 * h > 0.0)) {
            throw InvalidArgument("first cell is wider than the hole diameter; refine the grid");
        }
        const double scale = 1.0 / (radial_weight(big_r, dim) * h * h);
        const double wp = face_weight(big_r + 0.5 * h);
        const double wm = face_weight(big_r - 0.5 * h);
        out.super[0] = scale * (wp + wm);
        out.diag[0] = -scale * (wp + wm) - scale * 2.0 * h * alpha * wm;
        // du/dr(R) is alpha u(R) exactly.
        out.diag[0] += op.drift(big_r) * alpha;
    } else {
        out.alpha = std::numeric_limits<double>::infinity();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structural diagnostics

double rho(const OperatorSpec& op, double r) { return op.a(r); }

LPair l_and_lstar(const OperatorSpec& op, double r) {
    const double da = op.a.derivative(r);
    const double b = op.drift(r);
    if (!std::isfinite(da) || !std::isfinite(b)) {
        throw NumericalError(fmt::format("non-finite coefficient derivative at r = {}", r));
    }
    return {r * (da - b), r * (da + b)};
}

double drift_divergence(const OperatorSpec& op, int dimension, double r) {
    return op.drift.derivative(r) + (dimension - 1) * op.drift(r) / r;
}

Gamma0Report gamma0(const OperatorSpec& op, const DomainSpec& domain, const Grid& grid) {
    const auto r = grid.nodes();
    const int dim = domain.dimension();
    std::vector<double> half(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        half[i] = 0.5 * (dim * op.a(r[i]) + l_and_lstar(op, r[i]).lstar);
    }
    const auto it = std::min_element(half.begin(), half.end());
    Gamma0Report rep;
    rep.argmin = static_cast<std::size_t>(it - half.begin());
    rep.value = *it;
    rep.radius_at_min = r[rep.argmin];
    const std::size_t lo = rep.argmin == 0 ? 0 : rep.argmin - 1;
    const std::size_t hi = std::min(half.size() - 1, rep.argmin + 1);
    for (std::size_t i = lo; i <= hi; ++i) rep.neighbour_values.push_back(half[i]);
    rep.positive = rep.value > kSignTolerance * dim;
    return rep;
}

OneDimBlowupReport one_dim_blowup_condition(const OperatorSpec& op, const Grid& grid, double p,
                                            double q, double s) {
    OneDimBlowupReport rep;
    const double upper = 3.0 + 2.0 * q + s;
    rep.clauses.push_back({"1 < p < 3 + 2q + s", p > 1.0 && p < upper,
                           fmt::format("p = {}, 3 + 2q + s = {}", p, upper)});

    const double factor = p > 1.0 ? (2.0 + 2.0 * q + s) / (p - 1.0) - 2.0
                                  : std::numeric_limits<double>::quiet_NaN();
    double min_side = std::numeric_limits<double>::infinity();
    double max_div = -std::numeric_limits<double>::infinity();
    for (double r : grid.nodes()) {
        min_side = std::min(min_side, factor * op.a(r) + l_and_lstar(op, r).l);
        max_div = std::max(max_div, drift_divergence(op, 1, r));
    }
    rep.clauses.push_back({"((2+2q+s)/(p-1) - 2) a + l > 0", min_side > kSignTolerance,
                           fmt::format("min over grid = {}", min_side)});
    rep.clauses.push_back({"div b <= 0", max_div <= kSignTolerance,
                           fmt::format("max over grid = {}", max_div)});
    rep.holds = std::all_of(rep.clauses.begin(), rep.clauses.end(),
                            [](const Clause& c) { return c.holds; });
    return rep;
}

std::string to_string(TheoryClass c) {
    switch (c) {
        case TheoryClass::GuaranteedBlowUp: return "GuaranteedBlowUp";
        case TheoryClass::GlobalExistencePossible: return "GlobalExistencePossible";
        case TheoryClass::OutsideTheory: return "OutsideTheory";
    }
    return "?";
}

HypothesisReport hypothesis_report(const OperatorSpec& op, const DomainSpec& domain,
                                   const Grid& grid, const BoundaryCondition& bc, double p,
                                   double q, double s, double alpha_horizon) {
    HypothesisReport rep;
    const int dim = domain.dimension();
    const auto nodes = grid.nodes();
    auto all_hold = [](const std::vector<Clause>& cs) {
        return std::all_of(cs.begin(), cs.end(), [](const Clause& c) { return c.holds; });
    };

    std::vector<Clause> common;
    common.push_back({"p > 1", p > 1.0, fmt::format("p = {}", p)});
    common.push_back({"q >= 0 and s >= 0", q >= 0.0 && s >= 0.0, fmt::format("q = {}, s = {}", q, s)});

    double min_a = std::numeric_limits<double>::infinity();
    double max_a = -std::numeric_limits<double>::infinity();
    bool laplacian = q == 0.0 && s == 0.0;
    for (double r : nodes) {
        const double a = rho(op, r);
        min_a = std::min(min_a, a);
        max_a = std::max(max_a, a);
        laplacian = laplacian && a == 1.0 && op.drift(r) == 0.0;
    }
    common.push_back({"normalisation 0 < rho <= 1", min_a > 0.0 && max_a <= 1.0,
                      fmt::format("rho in [{}, {}]", min_a, max_a)});

    if (bc.kind == BoundaryCondition::Kind::Robin) {
        double min_alpha = std::numeric_limits<double>::infinity();
        constexpr int samples = 201;
        for (int k = 0; k < samples; ++k) {
            const double t = alpha_horizon * k / (samples - 1);
            min_alpha = std::min(min_alpha, (*bc.alpha)(t));
        }
        min_alpha = std::min(min_alpha, bc.alpha->infimum());
        common.push_back({"H0 alpha >= 0", min_alpha >= 0.0,
                          fmt::format("inf alpha = {}", min_alpha)});
        common.push_back({"H1 alpha continuous", true, bc.alpha->label()});
    } else {
        common.push_back({"H0 alpha >= 0", true, to_string(bc.kind)});
    }
    rep.clauses = common;
    const bool base_ok = all_hold(common);

    rep.fujita = fujita_exponent(dim);
    rep.gamma = gamma0(op, domain, grid);

    // Blow-up side.
    bool blowup = false;
    if (dim >= 2) {
        double max_div = -std::numeric_limits<double>::infinity();
        double worst_hg = -std::numeric_limits<double>::infinity();
        for (double r : nodes) {
            max_div = std::max(max_div, drift_divergence(op, dim, r));
            const double a = op.a(r);
            worst_hg = std::max(worst_hg, a - 0.5 * (dim * a + l_and_lstar(op, r).l));
        }
        const double thr = blowup_threshold(dim, q, s);
        rep.blowup_threshold = thr;
        const Clause div{"div b <= 0", max_div <= kSignTolerance,
                         fmt::format("max over grid = {}", max_div)};
        const Clause hg{"rho <= (trace A + l)/2", worst_hg <= kSignTolerance,
                        fmt::format("max of rho - (trace A + l)/2 = {}", worst_hg)};
        const Clause range{"1 < p < 1 + (2+2q+s)/N", p > 1.0 && p < thr,
                           fmt::format("threshold = {}", thr)};
        rep.clauses.push_back(div);
        rep.clauses.push_back(hg);
        rep.clauses.push_back(range);
        blowup = div.holds && hg.holds && range.holds;
        if (laplacian && dim >= 3) {
            const bool critical = std::abs(p - rep.fujita) <= kSignTolerance;
            rep.clauses.push_back({"Laplacian, N >= 3, p = 1 + 2/N", critical,
                                   fmt::format("p - (1 + 2/N) = {}", p - rep.fujita)});
            blowup = blowup || critical;
        }
    } else {
        const auto one = one_dim_blowup_condition(op, grid, p, q, s);
        rep.clauses.insert(rep.clauses.end(), one.clauses.begin(), one.clauses.end());
        blowup = one.holds;
    }
    if (base_ok && blowup) {
        rep.classification = TheoryClass::GuaranteedBlowUp;
        return rep;
    }

    // Global existence side.
    std::vector<Clause> global;
    const double x_dot_nu = domain.boundary_x_dot_nu();
    global.push_back({"boundary: c_lower > 0 or x.nu <= 0",
                      bc.kind != BoundaryCondition::Kind::Robin || bc.c_lower > 0.0 || x_dot_nu <= 0.0,
                      fmt::format("c_lower = {}, x.nu = {}", bc.c_lower, x_dot_nu)});
    global.push_back({"rho <= 1", max_a <= 1.0, fmt::format("max rho = {}", max_a)});
    global.push_back({"2 gamma0 > 0", rep.gamma.positive,
                      fmt::format("gamma0 = {} at r = {}", rep.gamma.value, rep.gamma.radius_at_min)});
    if (rep.gamma.positive) {
        const double thr = global_threshold(rep.gamma.value, q, s);
        rep.global_threshold = thr;
        global.push_back({"p > 1 + (2+2q+s)/(2 gamma0)", p > thr, fmt::format("threshold = {}", thr)});
    }
    const bool global_ok = all_hold(global) && rep.global_threshold.has_value();
    rep.clauses.insert(rep.clauses.end(), global.begin(), global.end());
    if (base_ok && global_ok) rep.classification = TheoryClass::GlobalExistencePossible;
    return rep;
}

}  // namespace fujita
