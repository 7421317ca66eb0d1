#include "fujita/domain_grid.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fujita/error.hpp"

namespace fujita {

DomainSpec::DomainSpec(DomainKind kind, int dimension, double inner_radius)
    : kind_(kind), dimension_(dimension), inner_radius_(inner_radius) {
    if (!std::isfinite(inner_radius) || inner_radius <= 0.0) {
        throw InvalidArgument(fmt::format("inner radius must be positive, got {}", inner_radius));
    }
    if (kind == DomainKind::ExteriorBall && dimension < 2) {
        throw InvalidArgument(
            fmt::format("exterior ball requires dimension >= 2, got {}", dimension));
    }
    if (kind == DomainKind::OneDimTwoRay && dimension != 1) {
        throw InvalidArgument("two-ray domain is one-dimensional");
    }
}

DomainSpec DomainSpec::exterior_ball(int dimension, double inner_radius) {
    return {DomainKind::ExteriorBall, dimension, inner_radius};
}

DomainSpec DomainSpec::two_ray(double half_gap) { return {DomainKind::OneDimTwoRay, 1, half_gap}; }

std::string to_string(DomainKind kind) {
    return kind == DomainKind::ExteriorBall ? "exterior_ball" : "two_ray";
}

Grid build_grid(const DomainSpec& spec, double outer_radius, std::size_t intervals,
                Stretch stretch) {
    const double inner = spec.inner_radius();
    if (!std::isfinite(outer_radius)) throw InvalidArgument("outer radius must be finite");
    if (outer_radius <= inner) {
        throw InvalidArgument(fmt::format("outer radius {} must exceed inner radius {}",
                                          outer_radius, inner));
    }
    if (intervals < 3) throw InvalidArgument(fmt::format("need M >= 3 intervals, got {}", intervals));

    std::vector<double> nodes(intervals + 1);
    const double length = outer_radius - inner;
    const auto m = static_cast<double>(intervals);

    if (stretch.mode == Stretch::Mode::Geometric) {
        if (!std::isfinite(stretch.ratio) || stretch.ratio < 1.0) {
            throw InvalidArgument(fmt::format("geometric ratio must be >= 1, got {}", stretch.ratio));
        }
    }

    if (stretch.mode == Stretch::Mode::Uniform || stretch.ratio == 1.0) {
        const double h = length / m;
        for (std::size_t i = 0; i <= intervals; ++i) nodes[i] = inner + static_cast<double>(i) * h;
    } else {
        const double q = stretch.ratio;
        const double h0 = length * (q - 1.0) / (std::pow(q, m) - 1.0);
        double r = inner;
        double h = h0;
        nodes[0] = inner;
        for (std::size_t i = 1; i <= intervals; ++i) {
            r += h;
            h *= q;
            nodes[i] = r;
        }
    }
    nodes.front() = inner;
    nodes.back() = outer_radius;

    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) {
            throw InvalidArgument("grid nodes are not strictly increasing (spacing underflow)");
        }
    }
    return Grid(spec, std::move(nodes), stretch);
}

TruncationFamily truncation_family(const DomainSpec& spec, std::vector<double> outer_radii) {
    if (outer_radii.size() < 2) {
        throw InvalidArgument("a truncation family needs at least two members");
    }
    for (std::size_t i = 0; i < outer_radii.size(); ++i) {
        if (!std::isfinite(outer_radii[i]) || outer_radii[i] <= spec.inner_radius()) {
            throw InvalidArgument(fmt::format("outer radius {} lies inside the hole", outer_radii[i]));
        }
        if (i > 0 && !(outer_radii[i] > outer_radii[i - 1])) {
            throw InvalidArgument("truncation radii must be strictly increasing");
        }
    }
    return {std::move(outer_radii)};
}

TruncationFamily truncation_family(const DomainSpec& spec, double first_radius, double growth,
                                   std::size_t count) {
    if (!std::isfinite(growth) || growth <= 1.0) {
        throw InvalidArgument(fmt::format("growth factor must exceed 1, got {}", growth));
    }
    if (count < 2) throw InvalidArgument("a truncation family needs at least two members");
    std::vector<double> radii(count);
    double r = first_radius;
    for (auto& entry : radii) {
        entry = r;
        r *= growth;
    }
    return truncation_family(spec, std::move(radii));
}

double Field::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

void validate_field(const Field& field, const Grid& grid) {
    if (field.values.size() != grid.size()) {
        throw InvalidArgument(fmt::format("field has {} values for a grid of {} nodes",
                                          field.values.size(), grid.size()));
    }
    if (!std::isfinite(field.t) || field.t < 0.0) throw InvalidArgument("field time must be >= 0");
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const double v = field.values[i];
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument(fmt::format("field value {} at node {} is negative or non-finite",
                                              v, i));
        }
    }
    if (field.values.back() != 0.0) throw InvalidArgument("outer node of a field must be zero");
}

Field restrict_initial_data(const RadialFunction& phi, const Grid& grid) {
    Field field;
    field.values.resize(grid.size());
    const auto nodes = grid.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double v = phi(nodes[i]);
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument(fmt::format(
                "initial data must be finite and non-negative; phi({}) = {}", nodes[i], v));
        }
        field.values[i] = v;
    }
    field.values.back() = 0.0;
    return field;
}

}  // namespace fujita
