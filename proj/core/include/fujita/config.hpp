#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fujita/domain_grid.hpp"
#include "fujita/error.hpp"
#include "fujita/integrator.hpp"
#include "fujita/operators.hpp"
#include "fujita/supersolution.hpp"

namespace fujita {

/// Malformed configuration; the message names the line and key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Named coefficient preset with numeric parameters, e.g. "inverse_power 0 -1 1".
struct Preset {
    std::string name;
    std::vector<double> params;

    bool operator==(const Preset&) const = default;
};

Preset parse_preset(std::string_view text);
std::string to_string(const Preset& preset);

/// constant(c), inverse_power(c0, c1, k), saturating(c, k).
Coefficient make_coefficient(const Preset& preset);
/// constant(c), relaxing(c0, c1, k).
TimeCoefficient make_time_coefficient(const Preset& preset);

struct ProfileSpec {
    enum class Kind { Gaussian, Bump, SuperSolution };

    Kind kind = Kind::Gaussian;
    double amplitude = 1.0;  // A for gaussian/bump
    double width = 1.0;      // gaussian: A exp(-r^2/(4 width)); bump: half-width
    double center = 2.0;     // bump centre
    double fraction = 0.9;   // supersolution: A = fraction * A_max

    bool operator==(const ProfileSpec&) const = default;
};

std::string to_string(ProfileSpec::Kind kind);

/**
 * Flat sectioned key-value configuration:
 *
 *   [domain]     kind dimension inner_radius outer_radius intervals stretch ratio
 *   [operator]   a drift p q s
 *   [bc]         kind alpha c_lower
 *   [solver]     dt0 dt_min sigma blowup_norm t_max theta output_interval max_steps
 *   [experiment] name id profile amplitude width center fraction t0 p_values
 *                amplitude_lo amplitude_hi iterations family family_first
 *                family_growth family_count probe_radius probe_time
 *                radial_samples time_samples tolerance ordering_tolerance
 *
 * '#' and ';' start comments. Every key is optional; missing keys take the
 * defaults below.
 */
struct ExperimentConfig {
    // [domain]
    DomainKind domain_kind = DomainKind::ExteriorBall;
    int dimension = 3;
    double inner_radius = 1.0;
    double outer_radius = 20.0;
    std::size_t intervals = 400;
    Stretch stretch = Stretch::uniform();

    // [operator]
    Preset a{"constant", {1.0}};
    Preset drift{"constant", {0.0}};
    double p = 2.0;
    double q = 0.0;
    double s = 0.0;

    // [bc]
    BoundaryCondition::Kind bc_kind = BoundaryCondition::Kind::Robin;
    Preset alpha{"constant", {1.0}};
    std::optional<double> c_lower;

    // [solver]
    SolverConfig solver;

    // [experiment]
    std::string name = "run";
    std::string id;  // empty: derived from the canonical text
    ProfileSpec profile;
    std::optional<double> t0;
    std::vector<double> p_values;
    double amplitude_lo = 0.01;
    double amplitude_hi = 10.0;
    std::size_t iterations = 10;
    std::vector<double> family;
    SampleBox box;
    double tolerance = 1e-10;
    double ordering_tolerance = 1e-2;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// Reads an INI file, or a JSON-lines record file (uses the last record's embedded config).
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text: every key, fixed order, round-trip number formatting.
std::string to_text(const ExperimentConfig& cfg);

/// Experiment id: cfg.id if set, otherwise "<name>-<16 hex digits of FNV-1a(canonical text)>".
std::string experiment_id(const ExperimentConfig& cfg);

DomainSpec make_domain(const ExperimentConfig& cfg);
Grid make_grid(const ExperimentConfig& cfg);
Grid make_grid(const ExperimentConfig& cfg, double outer_radius, std::size_t intervals);
OperatorSpec make_operator(const ExperimentConfig& cfg);
BoundaryCondition make_boundary(const ExperimentConfig& cfg);

}  // namespace fujita
