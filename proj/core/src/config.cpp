#include "fujita/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

namespace fujita {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ',') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

double to_double(std::string_view word) {
    // strtod accepts forms such as "1e-3" and "inf"; require the whole word to be consumed.
    const std::string buf(word);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size()) {
        throw ConfigError(fmt::format("cannot parse '{}' as a number", word));
    }
    return v;
}

std::size_t to_count(std::string_view word) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (ec != std::errc{} || ptr != word.data() + word.size()) {
        // Accept "1e6"-style counts if they are integral.
        const double d = to_double(word);
        if (d < 0.0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
            throw ConfigError(fmt::format("cannot parse '{}' as a non-negative integer", word));
        }
        return static_cast<std::size_t>(d);
    }
    return v;
}

std::vector<double> to_list(std::string_view text) {
    std::vector<double> out;
    for (auto w : split_words(text)) out.push_back(to_double(w));
    return out;
}

std::string format_list(const std::vector<double>& xs) { return fmt::format("{}", fmt::join(xs, " ")); }

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        // [domain]
        t["domain.kind"] = [](ExperimentConfig& c, std::string_view v) {
            if (v == "exterior_ball") c.domain_kind = DomainKind::ExteriorBall;
            else if (v == "two_ray") c.domain_kind = DomainKind::OneDimTwoRay;
            else throw ConfigError(fmt::format("unknown domain kind '{}' (exterior_ball, two_ray)", v));
        };
        t["domain.dimension"] = [](ExperimentConfig& c, std::string_view v) {
            c.dimension = static_cast<int>(to_count(v));
        };
        t["domain.inner_radius"] = [](ExperimentConfig& c, std::string_view v) { c.inner_radius = to_double(v); };
        t["domain.outer_radius"] = [](ExperimentConfig& c, std::string_view v) { c.outer_radius = to_double(v); };
        t["domain.intervals"] = [](ExperimentConfig& c, std::string_view v) { c.intervals = to_count(v); };
        t["domain.stretch"] = [](ExperimentConfig& c, std::string_view v) {
            if (v == "uniform") c.stretch.mode = Stretch::Mode::Uniform;
            else if (v == "geometric") {
                c.stretch.mode = Stretch::Mode::Geometric;
                if (c.stretch.ratio == 1.0) c.stretch.ratio = 1.02;
            } else throw ConfigError(fmt::format("unknown stretch '{}' (uniform, geometric)", v));
        };
        t["domain.ratio"] = [](ExperimentConfig& c, std::string_view v) { c.stretch.ratio = to_double(v); };
        // [operator]
        t["operator.a"] = [](ExperimentConfig& c, std::string_view v) {
            c.a = parse_preset(v);
            (void)make_coefficient(c.a);
        };
        t["operator.drift"] = [](ExperimentConfig& c, std::string_view v) {
            c.drift = parse_preset(v);
            (void)make_coefficient(c.drift);
        };
        t["operator.p"] = [](ExperimentConfig& c, std::string_view v) { c.p = to_double(v); };
        t["operator.q"] = [](ExperimentConfig& c, std::string_view v) { c.q = to_double(v); };
        t["operator.s"] = [](ExperimentConfig& c, std::string_view v) { c.s = to_double(v); };
        // [bc]
        t["bc.kind"] = [](ExperimentConfig& c, std::string_view v) {
            if (v == "robin") c.bc_kind = BoundaryCondition::Kind::Robin;
            else if (v == "neumann") c.bc_kind = BoundaryCondition::Kind::Neumann;
            else if (v == "dirichlet") c.bc_kind = BoundaryCondition::Kind::Dirichlet;
            else throw ConfigError(fmt::format("unknown bc kind '{}' (robin, neumann, dirichlet)", v));
        };
        t["bc.alpha"] = [](ExperimentConfig& c, std::string_view v) {
            c.alpha = parse_preset(v);
            (void)make_time_coefficient(c.alpha);
        };
        t["bc.c_lower"] = [](ExperimentConfig& c, std::string_view v) { c.c_lower = to_double(v); };
        // [solver]
        t["solver.dt0"] = [](ExperimentConfig& c, std::string_view v) { c.solver.dt0 = to_double(v); };
        t["solver.dt_min"] = [](ExperimentConfig& c, std::string_view v) { c.solver.dt_min = to_double(v); };
        t["solver.sigma"] = [](ExperimentConfig& c, std::string_view v) { c.solver.sigma = to_double(v); };
        t["solver.blowup_norm"] = [](ExperimentConfig& c, std::string_view v) { c.solver.blowup_norm = to_double(v); };
        t["solver.t_max"] = [](ExperimentConfig& c, std::string_view v) { c.solver.t_max = to_double(v); };
        t["solver.theta"] = [](ExperimentConfig& c, std::string_view v) { c.solver.theta = to_double(v); };
        t["solver.output_interval"] = [](ExperimentConfig& c, std::string_view v) {
            c.solver.output_interval = to_double(v);
        };
        t["solver.max_steps"] = [](ExperimentConfig& c, std::string_view v) { c.solver.max_steps = to_count(v); };
        // [experiment]
        t["experiment.name"] = [](ExperimentConfig& c, std::string_view v) { c.name = std::string(v); };
        t["experiment.id"] = [](ExperimentConfig& c, std::string_view v) { c.id = std::string(v); };
        t["experiment.profile"] = [](ExperimentConfig& c, std::string_view v) {
            if (v == "gaussian") c.profile.kind = ProfileSpec::Kind::Gaussian;
            else if (v == "bump") c.profile.kind = ProfileSpec::Kind::Bump;
            else if (v == "supersolution") c.profile.kind = ProfileSpec::Kind::SuperSolution;
            else throw ConfigError(fmt::format("unknown profile '{}' (gaussian, bump, supersolution)", v));
        };
        t["experiment.amplitude"] = [](ExperimentConfig& c, std::string_view v) { c.profile.amplitude = to_double(v); };
        t["experiment.width"] = [](ExperimentConfig& c, std::string_view v) { c.profile.width = to_double(v); };
        t["experiment.center"] = [](ExperimentConfig& c, std::string_view v) { c.profile.center = to_double(v); };
        t["experiment.fraction"] = [](ExperimentConfig& c, std::string_view v) { c.profile.fraction = to_double(v); };
        t["experiment.t0"] = [](ExperimentConfig& c, std::string_view v) { c.t0 = to_double(v); };
        t["experiment.p_values"] = [](ExperimentConfig& c, std::string_view v) { c.p_values = to_list(v); };
        t["experiment.amplitude_lo"] = [](ExperimentConfig& c, std::string_view v) { c.amplitude_lo = to_double(v); };
        t["experiment.amplitude_hi"] = [](ExperimentConfig& c, std::string_view v) { c.amplitude_hi = to_double(v); };
        t["experiment.iterations"] = [](ExperimentConfig& c, std::string_view v) { c.iterations = to_count(v); };
        t["experiment.family"] = [](ExperimentConfig& c, std::string_view v) { c.family = to_list(v); };
        t["experiment.probe_radius"] = [](ExperimentConfig& c, std::string_view v) { c.box.r_probe = to_double(v); };
        t["experiment.probe_time"] = [](ExperimentConfig& c, std::string_view v) { c.box.t_probe = to_double(v); };
        t["experiment.radial_samples"] = [](ExperimentConfig& c, std::string_view v) { c.box.radial = to_count(v); };
        t["experiment.time_samples"] = [](ExperimentConfig& c, std::string_view v) { c.box.temporal = to_count(v); };
        t["experiment.tolerance"] = [](ExperimentConfig& c, std::string_view v) { c.tolerance = to_double(v); };
        t["experiment.ordering_tolerance"] = [](ExperimentConfig& c, std::string_view v) {
            c.ordering_tolerance = to_double(v);
        };
        return t;
    }();
    return table;
}

// family_first / family_growth / family_count are collected and expanded after parsing.
struct FamilyRule {
    std::optional<double> first;
    std::optional<double> growth;
    std::optional<std::size_t> count;
    std::size_t line = 0;
};

}  // namespace

Preset parse_preset(std::string_view text) {
    const auto words = split_words(text);
    if (words.empty()) throw ConfigError("empty coefficient preset");
    Preset p;
    p.name = std::string(words.front());
    for (std::size_t i = 1; i < words.size(); ++i) p.params.push_back(to_double(words[i]));
    return p;
}

std::string to_string(const Preset& preset) {
    if (preset.params.empty()) return preset.name;
    return fmt::format("{} {}", preset.name, format_list(preset.params));
}

namespace {

void expect_params(const Preset& p, std::size_t n) {
    if (p.params.size() != n) {
        throw ConfigError(fmt::format("preset '{}' takes {} parameter(s), got {}", p.name, n, p.params.size()));
    }
}

}  // namespace

Coefficient make_coefficient(const Preset& p) {
    if (p.name == "constant") {
        expect_params(p, 1);
        return Coefficient::constant(p.params[0]);
    }
    if (p.name == "inverse_power") {
        expect_params(p, 3);
        return Coefficient::inverse_power(p.params[0], p.params[1], p.params[2]);
    }
    if (p.name == "saturating") {
        expect_params(p, 2);
        return Coefficient::saturating(p.params[0], p.params[1]);
    }
    throw ConfigError(fmt::format("unknown coefficient preset '{}' (constant, inverse_power, saturating)", p.name));
}

TimeCoefficient make_time_coefficient(const Preset& p) {
    if (p.name == "constant") {
        expect_params(p, 1);
        return TimeCoefficient::constant(p.params[0]);
    }
    if (p.name == "relaxing") {
        expect_params(p, 3);
        return TimeCoefficient::relaxing(p.params[0], p.params[1], p.params[2]);
    }
    throw ConfigError(fmt::format("unknown alpha preset '{}' (constant, relaxing)", p.name));
}

std::string to_string(ProfileSpec::Kind kind) {
    switch (kind) {
        case ProfileSpec::Kind::Gaussian: return "gaussian";
        case ProfileSpec::Kind::Bump: return "bump";
        case ProfileSpec::Kind::SuperSolution: return "supersolution";
    }
    return "?";
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    ExperimentConfig cfg;
    FamilyRule rule;
    bool explicit_family = false;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (eol == text.size()) break;
            continue;
        }
        auto where = [&](std::string_view key) {
            return fmt::format("{}:{}: [{}] {}", source, line_no, section, key);
        };
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(fmt::format("{}:{}: malformed section header", source, line_no));
            section = std::string(trim(line.substr(1, line.size() - 2)));
            static const std::vector<std::string> known{"domain", "operator", "bc", "solver", "experiment"};
            if (std::find(known.begin(), known.end(), section) == known.end()) {
                throw ConfigError(fmt::format("{}:{}: unknown section [{}]", source, line_no, section));
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(fmt::format("{}:{}: key '{}' appears before any section", source, line_no, key));
        }
        try {
            if (section == "experiment" && key == "family_first") {
                rule.first = to_double(value);
                rule.line = line_no;
            } else if (section == "experiment" && key == "family_growth") {
                rule.growth = to_double(value);
                rule.line = line_no;
            } else if (section == "experiment" && key == "family_count") {
                rule.count = to_count(value);
                rule.line = line_no;
            } else {
                const auto it = setters().find(section + "." + key);
                if (it == setters().end()) {
                    throw ConfigError(fmt::format("unknown key '{}'", key));
                }
                it->second(cfg, value);
                if (section == "experiment" && key == "family") explicit_family = true;
            }
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}: {}", where(key), e.what()));
        }
        if (eol == text.size()) break;
    }

    if (rule.first || rule.growth || rule.count) {
        if (explicit_family) {
            throw ConfigError(fmt::format("{}:{}: give either 'family' or family_first/growth/count, not both",
                                          source, rule.line));
        }
        if (!(rule.first && rule.growth && rule.count)) {
            throw ConfigError(fmt::format("{}:{}: family_first, family_growth and family_count go together",
                                          source, rule.line));
        }
        try {
            cfg.family = truncation_family(make_domain(cfg), *rule.first, *rule.growth, *rule.count).outer_radii;
        } catch (const InvalidArgument& e) {
            throw ConfigError(fmt::format("{}:{}: {}", source, rule.line, e.what()));
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        std::string last;
        std::istringstream lines(text);
        for (std::string l; std::getline(lines, l);) {
            if (!trim(l).empty()) last = l;
        }
        const auto record = nlohmann::json::parse(last, nullptr, false);
        if (record.is_discarded() || !record.contains("config_text")) {
            throw ConfigError(fmt::format("'{}' is not a run record file", path.string()));
        }
        return parse_config(record.at("config_text").get<std::string>(), path.string());
    }
    return parse_config(text, path.string());
}

std::string to_text(const ExperimentConfig& c) {
    std::string out;
    auto kv = [&](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
    out += "[domain]\n";
    kv("kind", to_string(c.domain_kind));
    kv("dimension", c.dimension);
    kv("inner_radius", c.inner_radius);
    kv("outer_radius", c.outer_radius);
    kv("intervals", c.intervals);
    kv("stretch", c.stretch.mode == Stretch::Mode::Uniform ? "uniform" : "geometric");
    kv("ratio", c.stretch.ratio);
    out += "\n[operator]\n";
    kv("a", to_string(c.a));
    kv("drift", to_string(c.drift));
    kv("p", c.p);
    kv("q", c.q);
    kv("s", c.s);
    out += "\n[bc]\n";
    kv("kind", to_string(c.bc_kind));
    kv("alpha", to_string(c.alpha));
    if (c.c_lower) kv("c_lower", *c.c_lower);
    out += "\n[solver]\n";
    kv("dt0", c.solver.dt0);
    kv("dt_min", c.solver.dt_min);
    kv("sigma", c.solver.sigma);
    kv("blowup_norm", c.solver.blowup_norm);
    kv("t_max", c.solver.t_max);
    kv("theta", c.solver.theta);
    kv("output_interval", c.solver.output_interval);
    kv("max_steps", c.solver.max_steps);
    out += "\n[experiment]\n";
    kv("name", c.name);
    if (!c.id.empty()) kv("id", c.id);
    kv("profile", to_string(c.profile.kind));
    kv("amplitude", c.profile.amplitude);
    kv("width", c.profile.width);
    kv("center", c.profile.center);
    kv("fraction", c.profile.fraction);
    if (c.t0) kv("t0", *c.t0);
    if (!c.p_values.empty()) kv("p_values", format_list(c.p_values));
    kv("amplitude_lo", c.amplitude_lo);
    kv("amplitude_hi", c.amplitude_hi);
    kv("iterations", c.iterations);
    if (!c.family.empty()) kv("family", format_list(c.family));
    kv("probe_radius", c.box.r_probe);
    kv("probe_time", c.box.t_probe);
    kv("radial_samples", c.box.radial);
    kv("time_samples", c.box.temporal);
    kv("tolerance", c.tolerance);
    kv("ordering_tolerance", c.ordering_tolerance);
    return out;
}

std::string experiment_id(const ExperimentConfig& cfg) {
    if (!cfg.id.empty()) return cfg.id;
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : to_text(cfg)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return fmt::format("{}-{:016x}", cfg.name, h);
}

DomainSpec make_domain(const ExperimentConfig& cfg) {
    if (cfg.domain_kind == DomainKind::OneDimTwoRay) {
        if (cfg.dimension != 1) throw ConfigError("two_ray domain requires dimension = 1");
        return DomainSpec::two_ray(cfg.inner_radius);
    }
    return DomainSpec::exterior_ball(cfg.dimension, cfg.inner_radius);
}

Grid make_grid(const ExperimentConfig& cfg, double outer_radius, std::size_t intervals) {
    return build_grid(make_domain(cfg), outer_radius, intervals, cfg.stretch);
}

Grid make_grid(const ExperimentConfig& cfg) { return make_grid(cfg, cfg.outer_radius, cfg.intervals); }

OperatorSpec make_operator(const ExperimentConfig& cfg) {
    OperatorSpec op;
    op.a = make_coefficient(cfg.a);
    op.drift = make_coefficient(cfg.drift);
    op.p = cfg.p;
    op.q = cfg.q;
    op.s = cfg.s;
    return op;
}

BoundaryCondition make_boundary(const ExperimentConfig& cfg) {
    switch (cfg.bc_kind) {
        case BoundaryCondition::Kind::Neumann: return BoundaryCondition::neumann();
        case BoundaryCondition::Kind::Dirichlet: return BoundaryCondition::dirichlet();
        case BoundaryCondition::Kind::Robin: break;
    }
    auto alpha = make_time_coefficient(cfg.alpha);
    if (cfg.c_lower) return BoundaryCondition::robin(std::move(alpha), *cfg.c_lower);
    return BoundaryCondition::robin(std::move(alpha));
}

}  // namespace fujita
