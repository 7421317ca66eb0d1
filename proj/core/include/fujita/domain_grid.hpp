#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fujita {

/// Radially symmetric function r -> f(r).
using RadialFunction = std::function<double(double)>;

enum class DomainKind {
    ExteriorBall,  // {|x| > R} in R^N, N >= 2
    OneDimTwoRay   // (-inf, -R) u (R, inf), solved on the right ray
};

/**
 * Exterior domain described through its radial reduction.
 *
 * Only the complement of a ball (N >= 2) and the one-dimensional two-ray
 * domain are represented. In both cases the outward normal on the inner
 * boundary points towards the origin, so x . nu(x) = -R there.
 */
class DomainSpec {
public:
    static DomainSpec exterior_ball(int dimension, double inner_radius);
    static DomainSpec two_ray(double half_gap = 1.0);

    DomainKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return dimension_; }
    double inner_radius() const noexcept { return inner_radius_; }

    /// x . nu(x) on the inner boundary.
    double boundary_x_dot_nu() const noexcept { return -inner_radius_; }

    bool operator==(const DomainSpec&) const = default;

private:
    DomainSpec(DomainKind kind, int dimension, double inner_radius);

    DomainKind kind_;
    int dimension_;
    double inner_radius_;
};

std::string to_string(DomainKind kind);

struct Stretch {
    enum class Mode { Uniform, Geometric };

    Mode mode = Mode::Uniform;
    double ratio = 1.0;  // h_{i+1} / h_i, only used for Geometric

    static Stretch uniform() { return {}; }
    static Stretch geometric(double ratio = 1.02) { return {Mode::Geometric, ratio}; }

    bool operator==(const Stretch&) const = default;
};

/// Radial mesh r_0 = R < r_1 < ... < r_M = R_max.
class Grid {
public:
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    /// Number of intervals M.
    std::size_t intervals() const noexcept { return nodes_.size() - 1; }
    double node(std::size_t i) const { return nodes_.at(i); }
    double inner() const noexcept { return nodes_.front(); }
    double outer() const noexcept { return nodes_.back(); }
    const Stretch& stretch() const noexcept { return stretch_; }
    const DomainSpec& domain() const noexcept { return domain_; }

private:
    friend Grid build_grid(const DomainSpec&, double, std::size_t, Stretch);
    Grid(DomainSpec domain, std::vector<double> nodes, Stretch stretch)
        : domain_(domain), nodes_(std::move(nodes)), stretch_(stretch) {}

    DomainSpec domain_;
    std::vector<double> nodes_;
    Stretch stretch_;
};

/// Builds a mesh with M intervals (M + 1 nodes) on [R, R_max].
Grid build_grid(const DomainSpec& spec, double outer_radius, std::size_t intervals,
                Stretch stretch = Stretch::uniform());

/// Outer radii of the nested truncation domains D_0 c D_1 c ...
struct TruncationFamily {
    std::vector<double> outer_radii;
};

/// outer_radii[i] = first_radius * growth^i.
TruncationFamily truncation_family(const DomainSpec& spec, double first_radius, double growth,
                                   std::size_t count);

/// Validates an explicit list of outer radii against the nestedness invariants.
TruncationFamily truncation_family(const DomainSpec& spec, std::vector<double> outer_radii);

/**
 * Nodal solution values at time t.
 *
 * Values are finite and non-negative and the outermost node is zero
 * (homogeneous Dirichlet data on the truncation boundary).
 */
struct Field {
    std::vector<double> values;
    double t = 0.0;

    double sup_norm() const noexcept;
    double boundary_value() const noexcept { return values.empty() ? 0.0 : values.front(); }

    bool operator==(const Field&) const = default;
};

/// Throws InvalidArgument when the field breaks the Field invariants.
void validate_field(const Field& field, const Grid& grid);

/// Samples phi at the grid nodes and forces the outermost value to zero.
Field restrict_initial_data(const RadialFunction& phi, const Grid& grid);

}  // namespace fujita
