#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fujita/config.hpp"
#include "fujita/error.hpp"
#include "fujita/harness.hpp"

using namespace fujita;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("fujita_test_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<nlohmann::json> records(const fs::path& dir) {
    std::vector<nlohmann::json> out;
    std::ifstream in(dir / "records.jsonl");
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(nlohmann::json::parse(line));
    }
    return out;
}

constexpr const char* kSmall = R"(
[domain]
dimension = 3
outer_radius = 10
intervals = 90

[operator]
p = 2

[bc]
kind = robin
alpha = constant 1

[solver]
t_max = 4
output_interval = 0.5

[experiment]
name = run
profile = gaussian
amplitude = 0.5
)";

}  // namespace

// --- config -------------------------------------------------------------------

TEST(Config, DefaultsAndValues) {
    const auto cfg = parse_config(kSmall);
    EXPECT_EQ(cfg.dimension, 3);
    EXPECT_EQ(cfg.intervals, 90u);
    EXPECT_EQ(cfg.outer_radius, 10.0);
    EXPECT_EQ(cfg.solver.t_max, 4.0);
    EXPECT_EQ(cfg.profile.amplitude, 0.5);
    EXPECT_EQ(cfg.bc_kind, BoundaryCondition::Kind::Robin);
    EXPECT_EQ(cfg.alpha, (Preset{"constant", {1.0}}));
}

TEST(Config, UnknownKeyNamesKeyAndLine) {
    try {
        parse_config("[domain]\ndimension = 3\nradius = 4\n", "demo.ini");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("radius"), std::string::npos) << msg;
        EXPECT_NE(msg.find("demo.ini:3"), std::string::npos) << msg;
    }
}

TEST(Config, MalformedInputs) {
    EXPECT_THROW(parse_config("[nowhere]\n"), ConfigError);
    EXPECT_THROW(parse_config("dimension = 3\n"), ConfigError);
    EXPECT_THROW(parse_config("[domain]\ndimension 3\n"), ConfigError);
    EXPECT_THROW(parse_config("[domain]\ndimension = three\n"), ConfigError);
    EXPECT_THROW(parse_config("[operator]\na = wobbly 1\n"), ConfigError);
    EXPECT_THROW(parse_config("[operator]\na = constant 1 2\n"), ConfigError);
    EXPECT_THROW(parse_config("[experiment]\nfamily = 4 8\nfamily_first = 4\nfamily_growth = 2\nfamily_count = 3\n"),
                 ConfigError);
    EXPECT_THROW(parse_config("[experiment]\nfamily_first = 4\n"), ConfigError);
}

TEST(Config, FamilyRuleExpands) {
    const auto cfg = parse_config("[experiment]\nfamily_first = 4\nfamily_growth = 2\nfamily_count = 3\n");
    EXPECT_EQ(cfg.family, (std::vector<double>{4.0, 8.0, 16.0}));
}

TEST(Config, CanonicalTextRoundTrips) {
    auto cfg = parse_config(kSmall);
    cfg.solver.dt0 = 0.1 + 0.2;  // not exactly representable in short decimal
    cfg.p_values = {1.3, 1.5, 2.0 / 3.0};
    cfg.family = {4.0, 8.0};
    cfg.c_lower = 0.25;
    cfg.a = Preset{"saturating", {1.0, 0.5}};
    const auto text = to_text(cfg);
    EXPECT_EQ(parse_config(text), cfg);
    EXPECT_EQ(to_text(parse_config(text)), text);
}

TEST(Config, IdIsStableAndContentAddressed) {
    auto cfg = parse_config(kSmall);
    const auto id = experiment_id(cfg);
    EXPECT_EQ(id.rfind("run-", 0), 0u);
    EXPECT_EQ(id, experiment_id(parse_config(to_text(cfg))));
    cfg.p = 2.5;
    EXPECT_NE(id, experiment_id(cfg));
    cfg.id = "custom";
    EXPECT_EQ(experiment_id(cfg), "custom");
}

TEST(Config, TwoRayRequiresDimensionOne) {
    EXPECT_THROW(make_domain(parse_config("[domain]\nkind = two_ray\ndimension = 3\n")), ConfigError);
    EXPECT_NO_THROW(make_domain(parse_config("[domain]\nkind = two_ray\ndimension = 1\n")));
}

// --- records and determinism --------------------------------------------------------

TEST(Record, MinimalConfigHasMandatoryKeys) {
    const auto dir = fresh_dir("record");
    const auto rec = run_experiment(parse_config(kSmall), dir);
    EXPECT_EQ(rec.exit_code, 0);
    const auto all = records(dir);
    ASSERT_EQ(all.size(), 1u);
    for (const char* key : {"id", "experiment", "version", "config_text", "result", "csv", "wall_clock_seconds", "exit_code"}) {
        EXPECT_TRUE(all[0].contains(key)) << key;
    }
    const auto& outcome = all[0]["result"]["outcome"];
    EXPECT_EQ(outcome["kind"], "Global");
    ASSERT_EQ(rec.csv_files.size(), 1u);
    const auto csv = slurp(dir / rec.csv_files[0]);
    EXPECT_EQ(csv.rfind("t,sup_norm,dt,boundary_value\n", 0), 0u);
    fs::remove_all(dir);
}

TEST(Record, RerunFromRecordIsBitIdentical) {
    const auto first = fresh_dir("det_a");
    const auto second = fresh_dir("det_b");
    const auto rec = run_experiment(parse_config(kSmall), first);
    const auto again = run_experiment(load_config(first / "records.jsonl"), second);
    EXPECT_EQ(rec.id, again.id);
    EXPECT_EQ(rec.config_text, again.config_text);
    ASSERT_EQ(rec.csv_files, again.csv_files);
    for (const auto& name : rec.csv_files) EXPECT_EQ(slurp(first / name), slurp(second / name));
    fs::remove_all(first);
    fs::remove_all(second);
}

TEST(Record, AppendsOneLinePerExperiment) {
    const auto dir = fresh_dir("append");
    run_experiment(parse_config(kSmall), dir);
    run_experiment(parse_config(kSmall), dir);
    EXPECT_EQ(records(dir).size(), 2u);
    fs::remove_all(dir);
}

TEST(Record, UnknownExperimentIsAnError) {
    auto cfg = parse_config(kSmall);
    cfg.name = "dance";
    EXPECT_THROW(run_experiment(cfg, fresh_dir("unknown")), ConfigError);
}

// --- experiments ------------------------------------------------------------

TEST(Sweep, ParallelMatchesSequential) {
    auto cfg = parse_config(kSmall);
    cfg.profile.amplitude = 1.0;
    const std::vector<double> ps{1.3, 1.6, 2.0, 3.0};
    const auto seq = sweep_exponent(ps, 1.0, cfg, 1);
    const auto par = sweep_exponent(ps, 1.0, cfg, 4);
    ASSERT_EQ(seq.cells.size(), par.cells.size());
    for (std::size_t k = 0; k < ps.size(); ++k) {
        EXPECT_EQ(seq.cells[k].p, ps[k]);
        EXPECT_EQ(seq.cells[k].p, par.cells[k].p);
        EXPECT_EQ(seq.cells[k].outcome.kind, par.cells[k].outcome.kind);
        EXPECT_EQ(seq.cells[k].value, par.cells[k].value);
        EXPECT_EQ(seq.cells[k].outcome.series, par.cells[k].outcome.series);
    }
}

TEST(Sweep, EmptyListIsAnError) {
    EXPECT_THROW(sweep_exponent(std::vector<double>{}, 1.0, parse_config(kSmall)), InvalidArgument);
}

TEST(Sweep, SupercriticalSmallDataIsGlobal) {
    auto cfg = parse_config(kSmall);
    cfg.dimension = 2;
    cfg.solver.t_max = 20.0;
    const std::vector<double> ps{3.0};
    const auto res = sweep_exponent(ps, 0.01, cfg);
    EXPECT_EQ(res.cells[0].outcome.kind, RunOutcome::Kind::Global);
}

TEST(Bisect, BracketWidthAndTrail) {
    auto cfg = parse_config(kSmall);
    cfg.solver.t_max = 10.0;
    const auto res = bisect_amplitude(2.0, cfg, 0.01, 10.0, 10);
    EXPECT_LE(res.hi - res.lo, 9.99 / 1024.0 * (1.0 + 1e-12));
    EXPECT_EQ(res.iterations, 10u);
    EXPECT_LT(res.lo, res.hi);
    EXPECT_EQ(run_single(cfg, false, res.lo).kind, RunOutcome::Kind::Global);
    EXPECT_NE(run_single(cfg, false, res.hi).kind, RunOutcome::Kind::Global);
}

TEST(Bisect, InvalidBracketIsAnError) {
    auto cfg = parse_config(kSmall);
    try {
        bisect_amplitude(2.0, cfg, 50.0, 100.0, 3);
        FAIL() << "expected InvalidArgument";
    } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("BlowUp"), std::string::npos) << msg;
    }
}

TEST(CompareBc, OrderingHoldsForSmallData) {
    auto cfg = parse_config(kSmall);
    cfg.profile.amplitude = 0.3;
    const auto rep = compare_boundary_conditions(cfg, 3);
    EXPECT_TRUE(rep.ordering_holds);
    EXPECT_LE(rep.max_violation, 1e-12);
    EXPECT_EQ(rep.compared_times, 9u);
    EXPECT_LE(rep.dirichlet.final_sup, rep.robin.final_sup);
    EXPECT_LE(rep.robin.final_sup, rep.neumann.final_sup);
}

TEST(CompareBc, ZeroAlphaTiesRobinAndNeumann) {
    auto cfg = parse_config(kSmall);
    cfg.alpha = Preset{"constant", {0.0}};
    const auto rep = compare_boundary_conditions(cfg);
    EXPECT_EQ(rep.robin_neumann_difference, 0.0);
    EXPECT_EQ(rep.robin.series, rep.neumann.series);
}

TEST(CompareBc, RequiresRobinConfig) {
    auto cfg = parse_config(kSmall);
    cfg.bc_kind = BoundaryCondition::Kind::Neumann;
    EXPECT_THROW(compare_boundary_conditions(cfg), InvalidArgument);
}

TEST(Truncation, ZeroDataGivesZeroDifferences) {
    auto cfg = parse_config(kSmall);
    cfg.profile.amplitude = 0.0;
    cfg.intervals = 30;
    const auto rep = truncation_study(cfg, truncation_family(make_domain(cfg), {4.0, 8.0}));
    EXPECT_TRUE(rep.monotone);
    ASSERT_EQ(rep.cauchy_differences.size(), 1u);
    EXPECT_EQ(rep.cauchy_differences[0], 0.0);
    for (const auto& m : rep.members) EXPECT_EQ(m.outcome.final_sup, 0.0);
}

TEST(Truncation, SingleMemberIsAnError) {
    const auto cfg = parse_config(kSmall);
    EXPECT_THROW(truncation_study(cfg, TruncationFamily{{4.0}}), InvalidArgument);
}

TEST(Truncation, CommonMeshWidth) {
    auto cfg = parse_config(kSmall);
    cfg.intervals = 60;  // h = 0.05 on [1, 4]
    cfg.solver.t_max = 2.0;
    cfg.profile.amplitude = 0.3;
    const auto rep = truncation_study(cfg, truncation_family(make_domain(cfg), {4.0, 8.0, 16.0}), 3);
    ASSERT_EQ(rep.members.size(), 3u);
    EXPECT_EQ(rep.members[0].intervals, 60u);
    EXPECT_EQ(rep.members[1].intervals, 140u);
    EXPECT_EQ(rep.members[2].intervals, 300u);
    EXPECT_TRUE(rep.monotone);
}

TEST(VerifySupersolution, LaplacianPasses) {
    auto cfg = parse_config(kSmall);
    cfg.name = "verify-supersolution";
    cfg.profile.kind = ProfileSpec::Kind::SuperSolution;
    const auto rep = verify_supersolution(cfg);
    EXPECT_TRUE(rep.all_pass);
    EXPECT_DOUBLE_EQ(rep.amplitude_max, 0.5);
    EXPECT_DOUBLE_EQ(rep.params.amplitude, 0.45);
    EXPECT_GT(rep.interior.min_residual, 0.0);
}

TEST(VerifySupersolution, SubcriticalIsRefused) {
    auto cfg = parse_config(kSmall);
    cfg.p = 1.5;
    EXPECT_THROW(verify_supersolution(cfg), HypothesisFailed);
}

TEST(Thresholds, ReportContent) {
    const auto three = thresholds_report(3, 0.0, 0.0, OperatorSpec::laplacian(2.0));
    EXPECT_NE(three.find("5/3"), std::string::npos) << three;
    const auto two = thresholds_report(2, 1.0, 1.0, OperatorSpec::laplacian(2.0, 1.0, 1.0));
    EXPECT_NE(two.find("3.5"), std::string::npos) << two;
    const auto one = thresholds_report(1, 0.0, 0.0, OperatorSpec::laplacian(2.0));
    EXPECT_NE(one.find("p > 3"), std::string::npos) << one;
    EXPECT_NE(one.find("3 + 2q + s"), std::string::npos) << one;
    const auto classified = thresholds_report(2, 0.0, 0.0, OperatorSpec::laplacian(1.5), 1.5);
    EXPECT_NE(classified.find("GuaranteedBlowUp"), std::string::npos) << classified;
}

TEST(Persistence, SeriesCsvFormat) {
    const std::vector<TimeSample> s{{0.0, 1.0, 0.0, 0.5}, {0.1, 0.9, 0.1, 0.45}};
    EXPECT_EQ(series_csv(s), "t,sup_norm,dt,boundary_value\n0,1,0,0.5\n0.1,0.9,0.1,0.45\n");
}
