#include "fujita/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <thread>

#include <fmt/format.h>

#include "fujita/error.hpp"
#include "fujita/thresholds.hpp"

#ifndef FUJITA_VERSION
#define FUJITA_VERSION "0.0.0-dev"
#endif

namespace fujita {

std::string version_tag() { return FUJITA_VERSION; }

// ---------------------------------------------------------------------------
// Scenario construction

SuperSolutionParams make_supersolution(const ExperimentConfig& cfg, const Grid& grid) {
    const auto op = make_operator(cfg);
    const auto bc = make_boundary(cfg);
    const double c_lower = bc.kind == BoundaryCondition::Kind::Robin ? bc.c_lower : 0.0;
    auto params = select_params(op, grid.domain(), grid, c_lower, cfg.profile.fraction);
    if (cfg.t0) {
        if (!(*cfg.t0 > 0.0)) throw InvalidArgument("t0 must be positive");
        params.t0 = *cfg.t0;
    }
    return params;
}

RadialFunction make_profile(const ExperimentConfig& cfg, const Grid& grid,
                            std::optional<double> amplitude) {
    const auto& prof = cfg.profile;
    switch (prof.kind) {
        case ProfileSpec::Kind::Gaussian: {
            const double a = amplitude.value_or(prof.amplitude);
            const double w = prof.width;
            if (!(w > 0.0)) throw InvalidArgument("gaussian width must be positive");
            return [a, w](double r) { return a * std::exp(-r * r / (4.0 * w)); };
        }
        case ProfileSpec::Kind::Bump: {
            const double a = amplitude.value_or(prof.amplitude);
            const double c = prof.center;
            const double w = prof.width;
            if (!(w > 0.0)) throw InvalidArgument("bump width must be positive");
            return [a, c, w](double r) {
                const double z = (r - c) / w;
                return std::abs(z) < 1.0 ? a * (1.0 - z * z) * (1.0 - z * z) : 0.0;
            };
        }
        case ProfileSpec::Kind::SuperSolution: {
            auto params = make_supersolution(cfg, grid);
            if (amplitude) params.amplitude = *amplitude;
            return [params](double r) { return supersolution_value(params, r, 0.0); };
        }
    }
    throw InvalidArgument("unknown profile");
}

Scenario make_scenario(const ExperimentConfig& cfg, std::optional<double> amplitude) {
    auto grid = make_grid(cfg);
    auto phi = restrict_initial_data(make_profile(cfg, grid, amplitude), grid);
    return {make_problem(std::move(grid), make_operator(cfg), make_boundary(cfg)), std::move(phi)};
}

RunOutcome run_single(const ExperimentConfig& cfg, bool keep_snapshots,
                      std::optional<double> amplitude) {
    const auto sc = make_scenario(cfg, amplitude);
    return run(sc.problem, sc.initial, cfg.solver, {keep_snapshots});
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& job) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// ---------------------------------------------------------------------------
// Boundary-condition ordering

OrderingReport compare_boundary_conditions(const ExperimentConfig& cfg, std::size_t workers) {
    if (cfg.bc_kind != BoundaryCondition::Kind::Robin) {
        throw InvalidArgument("compare-bc needs a Robin configuration to supply alpha");
    }
    // All three runs share the initial data of the Robin configuration.
    const auto robin_scenario = make_scenario(cfg);
    const auto& grid = robin_scenario.problem.grid;
    const std::array<BoundaryCondition, 3> bcs{BoundaryCondition::dirichlet(), make_boundary(cfg),
                                               BoundaryCondition::neumann()};
    std::array<RunOutcome, 3> outcomes;
    parallel_for(3, workers, [&](std::size_t k) {
        const auto problem = make_problem(grid, make_operator(cfg), bcs[k]);
        outcomes[k] = run(problem, robin_scenario.initial, cfg.solver, {true});
    });

    OrderingReport rep;
    rep.tolerance = cfg.ordering_tolerance;
    rep.dirichlet = std::move(outcomes[0]);
    rep.robin = std::move(outcomes[1]);
    rep.neumann = std::move(outcomes[2]);

    const std::size_t common = std::min({rep.dirichlet.snapshots.size(), rep.robin.snapshots.size(),
                                         rep.neumann.snapshots.size()});
    rep.compared_times = common;
    for (std::size_t k = 0; k < common; ++k) {
        const auto& d = rep.dirichlet.snapshots[k];
        const auto& r = rep.robin.snapshots[k];
        const auto& n = rep.neumann.snapshots[k];
        if (d.t != r.t || r.t != n.t) throw NumericalError("output times of the three runs differ");
        const double scale = std::max(n.sup_norm(), std::numeric_limits<double>::min());
        for (std::size_t i = 0; i < n.values.size(); ++i) {
            const double v = std::max(d.values[i] - r.values[i], r.values[i] - n.values[i]) / scale;
            if (v > rep.max_violation) {
                rep.max_violation = v;
                rep.max_violation_time = n.t;
            }
            rep.robin_neumann_difference =
                std::max(rep.robin_neumann_difference, std::abs(r.values[i] - n.values[i]));
        }
    }
    rep.ordering_holds = rep.max_violation <= rep.tolerance;

    if (rep.dirichlet.kind == RunOutcome::Kind::BlowUp) {
        constexpr double slack = 1e-2;
        const bool both = rep.robin.kind == RunOutcome::Kind::BlowUp &&
                          rep.neumann.kind == RunOutcome::Kind::BlowUp;
        rep.blowup_time_ordering =
            both && *rep.neumann.blowup_time <= *rep.robin.blowup_time * (1.0 + slack) &&
            *rep.robin.blowup_time <= *rep.dirichlet.blowup_time * (1.0 + slack);
        rep.ordering_holds = rep.ordering_holds && *rep.blowup_time_ordering;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Truncation study

TruncationReport truncation_study(const ExperimentConfig& cfg, const TruncationFamily& family,
                                  std::size_t workers, double tolerance) {
    const auto domain = make_domain(cfg);
    const auto fam = truncation_family(domain, family.outer_radii);
    if (cfg.stretch.mode != Stretch::Mode::Uniform) {
        throw InvalidArgument("truncation study needs a uniform mesh so that nodes are shared");
    }
    const double inner = domain.inner_radius();
    const double h = (fam.outer_radii.front() - inner) / static_cast<double>(cfg.intervals);

    TruncationReport rep;
    for (double outer : fam.outer_radii) {
        const double cells = (outer - inner) / h;
        const double rounded = std::round(cells);
        if (std::abs(cells - rounded) > 1e-9 * cells) {
            throw InvalidArgument(fmt::format(
                "outer radius {} is not a whole number of cells of width {}", outer, h));
        }
        rep.members.push_back({outer, static_cast<std::size_t>(rounded), {}, 0.0});
    }

    // phi is built once, on the first member, and sampled on every mesh.
    const auto first_grid = make_grid(cfg, rep.members.front().outer_radius, rep.members.front().intervals);
    const auto phi = make_profile(cfg, first_grid);

    parallel_for(rep.members.size(), workers, [&](std::size_t k) {
        auto& m = rep.members[k];
        auto grid = make_grid(cfg, m.outer_radius, m.intervals);
        auto initial = restrict_initial_data(phi, grid);
        const auto problem = make_problem(grid, make_operator(cfg), make_boundary(cfg));
        m.outcome = run(problem, initial, cfg.solver, {true});
        const auto nodes = grid.nodes();
        for (const auto& snap : m.outcome.snapshots) {
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (nodes[i] >= 0.75 * m.outer_radius) m.tail_max = std::max(m.tail_max, snap.values[i]);
            }
        }
    });

    rep.monotone = true;
    for (std::size_t k = 0; k + 1 < rep.members.size(); ++k) {
        const auto& small = rep.members[k].outcome.snapshots;
        const auto& large = rep.members[k + 1].outcome.snapshots;
        const std::size_t times = std::min(small.size(), large.size());
        double violation = -std::numeric_limits<double>::infinity();
        double cauchy = 0.0;
        for (std::size_t j = 0; j < times; ++j) {
            if (small[j].t != large[j].t) throw NumericalError("output times of truncation runs differ");
            for (std::size_t i = 0; i < small[j].values.size(); ++i) {
                const double d = small[j].values[i] - large[j].values[i];
                violation = std::max(violation, d);
                cauchy = std::max(cauchy, std::abs(d));
            }
        }
        rep.monotonicity_violation.push_back(violation);
        rep.cauchy_differences.push_back(cauchy);
        rep.monotone = rep.monotone && violation <= tolerance;
    }
    for (std::size_t k = 0; k + 1 < rep.cauchy_differences.size(); ++k) {
        const double next = rep.cauchy_differences[k + 1];
        rep.decay_factors.push_back(next > 0.0 ? rep.cauchy_differences[k] / next
                                               : std::numeric_limits<double>::infinity());
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Sweep and bisection

SweepResult sweep_exponent(std::span<const double> p_values, double amplitude,
                           const ExperimentConfig& cfg, std::size_t workers) {
    if (p_values.empty()) throw InvalidArgument("exponent sweep needs at least one p");
    if (!(amplitude > 0.0)) throw InvalidArgument("sweep amplitude must be positive");
    for (double p : p_values) {
        if (!(p > 1.0)) throw InvalidArgument(fmt::format("sweep exponent {} is not > 1", p));
    }
    SweepResult res;
    res.cells.resize(p_values.size());
    parallel_for(p_values.size(), workers, [&](std::size_t k) {
        auto local = cfg;
        local.p = p_values[k];
        auto& cell = res.cells[k];
        cell.p = p_values[k];
        cell.amplitude = amplitude;
        cell.outcome = run_single(local, false, amplitude);
        cell.value = cell.outcome.kind == RunOutcome::Kind::BlowUp ? *cell.outcome.blowup_time
                                                                   : cell.outcome.final_sup;
    });
    return res;
}

BisectionResult bisect_amplitude(double p, const ExperimentConfig& cfg, double lo, double hi,
                                 std::size_t iterations) {
    if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("bisection needs 0 < A_lo < A_hi");
    auto local = cfg;
    local.p = p;
    auto classify = [&](double a) { return run_single(local, false, a).kind; };

    BisectionResult res;
    const auto lo_kind = classify(lo);
    const auto hi_kind = classify(hi);
    res.trail.emplace_back(lo, lo_kind);
    res.trail.emplace_back(hi, hi_kind);
    if (lo_kind != RunOutcome::Kind::Global || hi_kind != RunOutcome::Kind::BlowUp) {
        throw InvalidArgument(fmt::format(
            "invalid bisection bracket: A_lo = {} is {}, A_hi = {} is {} (need Global / BlowUp)", lo,
            to_string(lo_kind), hi, to_string(hi_kind)));
    }
    for (std::size_t k = 0; k < iterations; ++k) {
        const double mid = 0.5 * (lo + hi);
        const auto kind = classify(mid);
        res.trail.emplace_back(mid, kind);
        if (kind == RunOutcome::Kind::Global) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++res.iterations;
    }
    res.lo = lo;
    res.hi = hi;
    res.width = hi - lo;
    return res;
}

// ---------------------------------------------------------------------------
// Certificates

SuperSolutionReport verify_supersolution(const ExperimentConfig& cfg) {
    const auto grid = make_grid(cfg);
    const auto op = make_operator(cfg);
    const auto bc = make_boundary(cfg);
    SuperSolutionReport rep;
    rep.params = make_supersolution(cfg, grid);
    rep.gamma0 = gamma0(op, grid.domain(), grid).value;
    rep.amplitude_max = amplitude_bound(rep.gamma0, rep.params.mu, op.p, op.s);
    rep.interior = verify_interior(rep.params, op, grid.domain(), cfg.box, cfg.tolerance);
    switch (bc.kind) {
        case BoundaryCondition::Kind::Robin:
            rep.boundary = verify_boundary(rep.params, *bc.alpha, grid.domain(), cfg.box, cfg.tolerance);
            break;
        case BoundaryCondition::Kind::Neumann:
            rep.boundary = verify_boundary(rep.params, TimeCoefficient::constant(0.0), grid.domain(),
                                           cfg.box, cfg.tolerance);
            break;
        case BoundaryCondition::Kind::Dirichlet: {
            // U > 0 dominates the zero boundary data; residual is min_t U(R, t).
            rep.boundary.kind = Certificate::Kind::Boundary;
            rep.boundary.tolerance = cfg.tolerance;
            rep.boundary.at_r = grid.inner();
            rep.boundary.at_t = cfg.box.t_probe;
            rep.boundary.time_samples = 1;
            rep.boundary.radial_samples = 1;
            rep.boundary.t_max = cfg.box.t_probe;
            rep.boundary.min_residual = supersolution_value(rep.params, grid.inner(), cfg.box.t_probe);
            rep.boundary.pass = rep.boundary.min_residual >= 0.0;
            break;
        }
    }
    const auto phi = restrict_initial_data(make_profile(cfg, grid), grid);
    rep.initial_data = verify_initial_data(phi, rep.params, grid);
    rep.all_pass = rep.interior.pass && rep.boundary.pass && rep.initial_data.pass;
    return rep;
}

// ---------------------------------------------------------------------------
// Thresholds

namespace {

// Small-denominator rational equal to x in double precision, if any.
std::optional<Rational> as_fraction(double x) {
    if (!std::isfinite(x)) return std::nullopt;
    for (std::int64_t den = 1; den <= 1000; ++den) {
        const double num = std::round(x * static_cast<double>(den));
        if (std::abs(num) > 1e12) return std::nullopt;
        if (num / static_cast<double>(den) == x) return Rational(static_cast<std::int64_t>(num), den);
    }
    return std::nullopt;
}

std::string show(double value, std::optional<Rational> exact) {
    if (!exact || exact->denominator() == 1) return fmt::format("{}", value);
    return fmt::format("{}/{} ({})", exact->numerator(), exact->denominator(),
                       boost::rational_cast<double>(*exact));
}

}  // namespace

std::string thresholds_report(int dimension, double q, double s, const OperatorSpec& op,
                              std::optional<double> p, const BoundaryCondition& bc) {
    const auto qr = as_fraction(q);
    const auto sr = as_fraction(s);
    const bool exact = qr && sr;
    const auto domain = dimension == 1 ? DomainSpec::two_ray(1.0) : DomainSpec::exterior_ball(dimension, 1.0);
    const auto grid = build_grid(domain, 10.0, 400);
    std::string out;
    out += fmt::format("dimension N = {} ({}), q = {}, s = {}\n", dimension, to_string(domain.kind()), q, s);
    out += fmt::format("operator: a = {}, drift = {}\n", op.a.label(), op.drift.label());
    out += fmt::format("Fujita exponent 1 + 2/N                   = {}\n",
                       show(fujita_exponent(dimension), fujita_exponent<Rational>(dimension)));
    if (dimension >= 2) {
        out += fmt::format("blow-up for 1 < p < 1 + (2+2q+s)/N         = {}\n",
                           show(blowup_threshold(dimension, q, s),
                                exact ? std::optional(blowup_threshold<Rational>(dimension, *qr, *sr)) : std::nullopt));
    } else {
        out += fmt::format("one-dimensional blow-up for 1 < p < 3 + 2q + s = {}\n", 3.0 + 2.0 * q + s);
        out += "  side conditions: ((2+2q+s)/(p-1) - 2) a + l > 0 and div b <= 0 on the domain\n";
    }
    const auto g = gamma0(op, domain, grid);
    out += fmt::format("gamma0 = {} (grid minimum at r = {}, sampled on [1, 10])\n", g.value, g.radius_at_min);
    if (g.positive) {
        const double thr = global_threshold(g.value, q, s);
        const auto gr = as_fraction(g.value);
        const auto thr_exact = exact && gr ? std::optional(global_threshold<Rational>(*gr, *qr, *sr)) : std::nullopt;
        out += fmt::format("global solutions for small data when p > 1 + (2+2q+s)/(2 gamma0) = {}\n",
                           show(thr, thr_exact));
        if (dimension == 1) out += fmt::format("  one-dimensional rule: p > {}\n", show(thr, thr_exact));
    } else {
        out += "global threshold unavailable: 2 gamma0 > 0 fails\n";
    }
    if (p) {
        const auto rep = hypothesis_report(op, domain, grid, bc, *p, q, s);
        out += fmt::format("classification at p = {}: {}\n", *p, to_string(rep.classification));
        for (const auto& c : rep.clauses) {
            out += fmt::format("  [{}] {}: {}\n", c.holds ? "x" : " ", c.name, c.detail);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence

std::string series_csv(std::span<const TimeSample> series) {
    std::string out = "t,sup_norm,dt,boundary_value\n";
    for (const auto& s : series) out += fmt::format("{},{},{},{}\n", s.t, s.sup_norm, s.dt, s.boundary_value);
    return out;
}

nlohmann::json to_json(const RunOutcome& o, double blowup_norm, double t_max) {
    nlohmann::json j;
    j["kind"] = to_string(o.kind);
    j["final_sup"] = o.final_sup;
    j["final_t"] = o.final_t;
    j["last_valid_t"] = o.last_valid_t;
    j["T_est"] = o.blowup_time ? nlohmann::json(*o.blowup_time) : nlohmann::json(nullptr);
    j["reason"] = o.reason;
    j["steps"] = o.steps;
    j["samples"] = o.series.size();
    j["M_blow"] = blowup_norm;
    j["T_max"] = t_max;
    return j;
}

nlohmann::json to_json(const Certificate& c) {
    return {{"kind", to_string(c.kind)},         {"min_residual", c.min_residual},
            {"at_r", c.at_r},                    {"at_t", c.at_t},
            {"radial_samples", c.radial_samples}, {"time_samples", c.time_samples},
            {"box_r_max", c.r_max},              {"box_t_max", c.t_max},
            {"tolerance", c.tolerance},          {"pass", c.pass}};
}

nlohmann::json ExperimentRecord::to_json() const {
    return {{"id", id},
            {"experiment", experiment},
            {"version", version_tag()},
            {"config_text", config_text},
            {"result", result},
            {"csv", csv_files},
            {"wall_clock_seconds", wall_clock_seconds},
            {"exit_code", exit_code}};
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << content;
}

nlohmann::json params_json(const SuperSolutionParams& p) {
    return {{"A", p.amplitude}, {"t0", p.t0}, {"mu", p.mu}, {"p", p.p}, {"q", p.q}, {"s", p.s}};
}

}  // namespace

ExperimentRecord run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                std::size_t workers) {
    const auto started = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);

    ExperimentRecord rec;
    rec.id = experiment_id(cfg);
    rec.experiment = cfg.name;
    rec.config_text = to_text(cfg);
    const double mb = cfg.solver.blowup_norm;
    const double tm = cfg.solver.t_max;

    auto emit_csv = [&](const std::string& suffix, std::span<const TimeSample> series) {
        const std::string name = rec.id + suffix + ".csv";
        write_file(out_dir / name, series_csv(series));
        rec.csv_files.push_back(name);
    };
    auto undetermined = [](const RunOutcome& o) { return o.kind == RunOutcome::Kind::Undetermined; };

    if (cfg.name == "run") {
        const auto o = run_single(cfg);
        emit_csv("", o.series);
        rec.result = {{"outcome", to_json(o, mb, tm)}};
        rec.exit_code = undetermined(o) ? 2 : 0;
    } else if (cfg.name == "sweep-p") {
        const auto res = sweep_exponent(cfg.p_values, cfg.profile.amplitude, cfg, workers);
        std::string table = "p,amplitude,outcome,value\n";
        nlohmann::json cells = nlohmann::json::array();
        for (std::size_t k = 0; k < res.cells.size(); ++k) {
            const auto& c = res.cells[k];
            table += fmt::format("{},{},{},{}\n", c.p, c.amplitude, to_string(c.outcome.kind), c.value);
            cells.push_back({{"p", c.p}, {"amplitude", c.amplitude}, {"value", c.value},
                             {"outcome", to_json(c.outcome, mb, tm)}});
            emit_csv(fmt::format("_p{}", k), c.outcome.series);
            if (undetermined(c.outcome)) rec.exit_code = 2;
        }
        write_file(out_dir / (rec.id + "_sweep.csv"), table);
        rec.csv_files.push_back(rec.id + "_sweep.csv");
        rec.result = {{"cells", cells}};
    } else if (cfg.name == "bisect-amplitude") {
        const auto res = bisect_amplitude(cfg.p, cfg, cfg.amplitude_lo, cfg.amplitude_hi, cfg.iterations);
        nlohmann::json trail = nlohmann::json::array();
        for (const auto& [a, k] : res.trail) trail.push_back({{"amplitude", a}, {"outcome", to_string(k)}});
        rec.result = {{"A_lo", res.lo}, {"A_hi", res.hi}, {"iterations", res.iterations},
                      {"width", res.width}, {"trail", trail}};
    } else if (cfg.name == "compare-bc") {
        const auto rep = compare_boundary_conditions(cfg, workers);
        emit_csv("_dirichlet", rep.dirichlet.series);
        emit_csv("_robin", rep.robin.series);
        emit_csv("_neumann", rep.neumann.series);
        rec.result = {{"dirichlet", to_json(rep.dirichlet, mb, tm)},
                      {"robin", to_json(rep.robin, mb, tm)},
                      {"neumann", to_json(rep.neumann, mb, tm)},
                      {"max_violation", rep.max_violation},
                      {"max_violation_time", rep.max_violation_time},
                      {"compared_times", rep.compared_times},
                      {"robin_neumann_difference", rep.robin_neumann_difference},
                      {"blowup_time_ordering", rep.blowup_time_ordering ? nlohmann::json(*rep.blowup_time_ordering)
                                                                         : nlohmann::json(nullptr)},
                      {"tolerance", rep.tolerance},
                      {"ordering_holds", rep.ordering_holds}};
        rec.exit_code = !rep.ordering_holds ? 1
                        : (undetermined(rep.dirichlet) || undetermined(rep.robin) || undetermined(rep.neumann)) ? 2
                                                                                                               : 0;
    } else if (cfg.name == "truncation-study") {
        const auto rep = truncation_study(cfg, truncation_family(make_domain(cfg), cfg.family), workers);
        nlohmann::json members = nlohmann::json::array();
        for (std::size_t k = 0; k < rep.members.size(); ++k) {
            const auto& m = rep.members[k];
            members.push_back({{"outer_radius", m.outer_radius}, {"intervals", m.intervals},
                               {"tail_max", m.tail_max}, {"outcome", to_json(m.outcome, mb, tm)}});
            emit_csv(fmt::format("_R{}", k), m.outcome.series);
            if (undetermined(m.outcome)) rec.exit_code = 2;
        }
        rec.result = {{"members", members},
                      {"monotonicity_violation", rep.monotonicity_violation},
                      {"cauchy_differences", rep.cauchy_differences},
                      {"decay_factors", rep.decay_factors},
                      {"monotone", rep.monotone}};
        if (!rep.monotone) rec.exit_code = 1;
    } else if (cfg.name == "verify-supersolution") {
        const auto rep = verify_supersolution(cfg);
        rec.result = {{"params", params_json(rep.params)},
                      {"A_max", rep.amplitude_max},
                      {"gamma0", rep.gamma0},
                      {"certificates", {to_json(rep.interior), to_json(rep.boundary), to_json(rep.initial_data)}},
                      {"all_pass", rep.all_pass}};
        rec.exit_code = rep.all_pass ? 0 : 2;
    } else {
        throw ConfigError(fmt::format(
            "unknown experiment '{}' (run, sweep-p, bisect-amplitude, compare-bc, truncation-study, "
            "verify-supersolution)",
            cfg.name));
    }

    rec.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::ofstream log(out_dir / "records.jsonl", std::ios::app);
    if (!log) throw Error("cannot append to records.jsonl");
    log << rec.to_json().dump() << '\n';
    return rec;
}

}  // namespace fujita
