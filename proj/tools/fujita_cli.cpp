// Command-line front end for the experiment harness.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fujita/config.hpp"
#include "fujita/error.hpp"
#include "fujita/harness.hpp"

namespace {

constexpr const char* kFooter = R"(Exit codes: 0 classified, 2 Undetermined (or a failed certificate), 1 error or
ordering/monotonicity failure.

Every experiment appends one JSON line to OUT/records.jsonl and writes CSV time
series named <record id>[_suffix].csv with columns
  t               time of the sample
  sup_norm        max over nodes of u(., t)
  dt              step that produced the sample (0 for t = 0)
  boundary_value  u(R, t) on the inner boundary
sweep-p also writes <id>_sweep.csv with columns p,amplitude,outcome,value where
value is T_est for BlowUp and the final sup-norm otherwise.

--config accepts an INI file or a records.jsonl file (the last record's
embedded config is re-run).)";

struct CommonOptions {
    std::string config;
    std::string out = "out";
    std::size_t workers = 1;
    long seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config, "Experiment config (INI) or records.jsonl")->required();
    cmd->add_option("--out", opts.out, "Output directory")->capture_default_str();
    cmd->add_option("--workers", opts.workers, "Worker threads for sweeps and comparisons")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Reserved; every method is deterministic");
}

int execute(const CommonOptions& opts, const std::optional<std::string>& forced_name) {
    auto cfg = fujita::load_config(opts.config);
    if (forced_name) cfg.name = *forced_name;
    const auto rec = fujita::run_experiment(cfg, opts.out, opts.workers);
    const auto& result = rec.result;
    fmt::print("{} {} ({:.2f} s)\n", rec.id, rec.experiment, rec.wall_clock_seconds);
    if (result.contains("outcome")) {
        fmt::print("  outcome: {}\n", result["outcome"]["kind"].get<std::string>());
    }
    for (const char* key : {"ordering_holds", "monotone", "all_pass", "A_lo", "A_hi"}) {
        if (result.contains(key)) fmt::print("  {}: {}\n", key, result[key].dump());
    }
    if (result.contains("cells")) {
        for (const auto& c : result["cells"]) {
            fmt::print("  p = {:<6} {:<12} {}\n", c["p"].get<double>(),
                       c["outcome"]["kind"].get<std::string>(), c["value"].get<double>());
        }
    }
    fmt::print("  record: {}\n", (std::filesystem::path(opts.out) / "records.jsonl").string());
    return rec.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semilinear heat equation on exterior domains: blow-up vs global existence"};
    app.footer(kFooter);
    app.require_subcommand(1);

    CommonOptions opts;
    struct Sub {
        const char* name;
        const char* help;
        std::optional<std::string> forced;
    };
    const Sub subs[] = {
        {"run", "Run the experiment named in [experiment] name", std::nullopt},
        {"sweep-p", "Classify runs over [experiment] p_values", "sweep-p"},
        {"bisect-amplitude", "Bisect the profile amplitude between Global and BlowUp", "bisect-amplitude"},
        {"compare-bc", "Check Dirichlet <= Robin <= Neumann pointwise", "compare-bc"},
        {"truncation-study", "Run the nested truncation family [experiment] family", "truncation-study"},
        {"verify-supersolution", "Certify the Gaussian super-solution on a sample box", "verify-supersolution"},
    };
    std::optional<std::string> chosen;
    for (const auto& s : subs) {
        auto* cmd = app.add_subcommand(s.name, s.help);
        add_common(cmd, opts);
        cmd->callback([&chosen, &s] { chosen = s.forced.value_or(""); });
    }

    int dimension = 3;
    double q = 0.0;
    double s = 0.0;
    std::optional<double> p;
    std::string a_preset = "constant 1";
    std::string drift_preset = "constant 0";
    std::string alpha_preset = "constant 1";
    std::string thresholds_config;
    auto* thr = app.add_subcommand("thresholds", "Print exponent thresholds and hypothesis checks");
    thr->add_option("--dimension,-N", dimension, "Space dimension N")->capture_default_str();
    thr->add_option("--q", q, "Time weight exponent")->capture_default_str();
    thr->add_option("--s", s, "Space weight exponent")->capture_default_str();
    thr->add_option("--p", p, "Exponent to classify");
    thr->add_option("--a", a_preset, "Diffusion preset")->capture_default_str();
    thr->add_option("--drift", drift_preset, "Drift preset")->capture_default_str();
    thr->add_option("--alpha", alpha_preset, "Robin alpha preset")->capture_default_str();
    thr->add_option("--config", thresholds_config, "Take N, q, s, p and presets from a config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (thr->parsed()) {
            fujita::OperatorSpec op;
            auto bc = fujita::BoundaryCondition::robin(
                fujita::make_time_coefficient(fujita::parse_preset(alpha_preset)));
            if (!thresholds_config.empty()) {
                const auto cfg = fujita::load_config(thresholds_config);
                dimension = cfg.dimension;
                q = cfg.q;
                s = cfg.s;
                if (!p) p = cfg.p;
                op = fujita::make_operator(cfg);
                bc = fujita::make_boundary(cfg);
            } else {
                op.a = fujita::make_coefficient(fujita::parse_preset(a_preset));
                op.drift = fujita::make_coefficient(fujita::parse_preset(drift_preset));
                op.q = q;
                op.s = s;
            }
            std::cout << fujita::thresholds_report(dimension, q, s, op, p, bc);
            return 0;
        }
        std::optional<std::string> forced;
        if (chosen && !chosen->empty()) forced = *chosen;
        return execute(opts, forced);
    } catch (const fujita::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
