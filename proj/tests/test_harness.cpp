#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pclab/errors.hpp"
#include "pclab/harness/config.hpp"
#include "pclab/harness/runner.hpp"
#include "test_support.hpp"

using namespace pclab;
using namespace pclab::harness;

namespace {

std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(PCLAB_FIXTURE_DIR) / name; }

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kMinimalOrbit = R"(
[space]
dimension = 1

[mapping]
kind = "affine"
matrix = [[0.5]]
offset = [1.0]

[run]
mode = "orbit"
starts = [0.0]
)";

/// Issues reported for `text`, empty if it loads.
std::vector<std::string> issues_of(const std::string& text) {
    try {
        load_config(text);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
    for (const auto& s : issues) {
        if (s.find(needle) != std::string::npos) return true;
    }
    return false;
}

const std::vector<std::string> kFixtures = {
    "orbit_affine.toml",     "orbit_rotation_contraction.toml", "proximity_interval.toml",
    "proximity_balls.toml",  "classify_halving.toml",           "classify_identity.toml",
    "classify_rotation.toml", "classify_doubling.toml",         "certify_rotation_contraction.toml",
    "sweep_rotation_contraction.toml",
};

}  // namespace

TEST(LoadConfig, MinimalOrbit) {
    const ExperimentConfig c = load_config(kMinimalOrbit);
    EXPECT_EQ(c.space.dimension, 1u);
    EXPECT_EQ(c.run.mode, Mode::orbit);
    EXPECT_EQ(c.run.starts, (std::vector<std::vector<double>>{{0.0}}));
    EXPECT_EQ(c.run.n_max, 10000u);
    EXPECT_EQ(c.run.tol, 1e-9);
    EXPECT_FALSE(c.run.seed.has_value());
}

TEST(LoadConfig, BetaAtOneIsRejected) {
    const auto issues = issues_of(std::string(kMinimalOrbit) + "\n[params]\nbeta = 1.0\n");
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_TRUE(mentions(issues, "params.beta"));
    EXPECT_TRUE(mentions(issues, "[0, 1)"));
}

TEST(LoadConfig, BetaSequenceCheckedOverTheHorizon) {
    // 0.5 + 0.6 / n exceeds 1 at n = 1.
    const auto issues = issues_of(std::string(kMinimalOrbit) +
                                  "\n[params]\nbeta = { kind = \"harmonic\", limit = 0.5, amplitude = 0.6, power = 1 }\n");
    EXPECT_TRUE(mentions(issues, "params.beta = 1.1000000000000001 at n = 1"));
}

TEST(LoadConfig, UndefinedSet) {
    const auto issues = issues_of(R"(
[space]
dimension = 1
[sets.A]
kind = "box"
lo = [0.0]
hi = [1.0]
[mapping]
kind = "projected_affine"
matrix = [[0.5]]
offset = [0.0]
target = "C"
[run]
mode = "orbit"
starts = [0.5]
)");
    EXPECT_TRUE(mentions(issues, "undefined set 'C'"));
}

TEST(LoadConfig, SampledModesNeedASeed) {
    const auto text = read_text(fixture("classify_identity.toml"));
    const auto pos = text.find("seed = 11\n");
    ASSERT_NE(pos, std::string::npos);
    const auto issues = issues_of(text.substr(0, pos) + text.substr(pos + 10));
    EXPECT_TRUE(mentions(issues, "run.seed: missing"));
}

TEST(LoadConfig, ReportsEveryIssue) {
    const auto issues = issues_of(R"(
[space]
dimension = 2
[sets.A]
kind = "box"
lo = [0.0]
hi = [1.0]
[mapping]
kind = "affine"
matrix = [[0.5, 0.0], [0.0, 0.5]]
offset = [1.0, 0.0]
[params]
alpha = -1.0
beta = 1.5
[run]
mode = "classify"
n_max = 8
sample_x = "A"
)");
    EXPECT_TRUE(mentions(issues, "sets.A: dimension 1"));
    EXPECT_TRUE(mentions(issues, "params.alpha"));
    EXPECT_TRUE(mentions(issues, "params.beta"));
    EXPECT_TRUE(mentions(issues, "run.seed"));
    EXPECT_TRUE(mentions(issues, "run.n_max = 8"));
    EXPECT_GE(issues.size(), 5u);
}

TEST(LoadConfig, StructuralErrors) {
    EXPECT_TRUE(mentions(issues_of(std::string(kMinimalOrbit) + "\n[extra]\nx = 1\n"), "unknown key 'extra'"));
    EXPECT_TRUE(mentions(issues_of("[space]\ndimension = 1\n[run]\nmode = \"orbit\"\nstarts = [0.0]\n"),
                         "mapping: missing section"));
    EXPECT_TRUE(mentions(issues_of(R"(
[space]
dimension = 2
[mapping]
kind = "affine"
matrix = [[0.5]]
offset = [1.0]
[run]
mode = "orbit"
starts = [[0.0, 0.0]]
)"),
                         "mapping"));
    try {
        load_config("[space\ndimension = 1");
        FAIL() << "expected a parse error";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.kind(), ConfigError::Kind::parse);
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
    EXPECT_THROW(load_config_file(fixture("does_not_exist.toml")), ConfigError);
}

TEST(LoadConfig, CoincidentCyclicSetsNeedATiebreak) {
    std::string text = read_text(fixture("proximity_interval.toml"));
    text.replace(text.find("set_b = \"B\""), 11, "set_b = \"A\"");
    EXPECT_TRUE(mentions(issues_of(text), "tiebreak"));
}

TEST(Serialize, RoundTripsEveryFixture) {
    for (const auto& name : kFixtures) {
        const ExperimentConfig c = load_config_file(fixture(name));
        const std::string text = serialize(c);
        const ExperimentConfig again = load_config(text);
        EXPECT_EQ(again, c) << name;
        EXPECT_EQ(serialize(again), text) << name;
        EXPECT_EQ(digest(again), digest(c)) << name;
    }
}

TEST(Serialize, LargeSeedsSurvive) {
    ExperimentConfig c = load_config_file(fixture("classify_identity.toml"));
    c.run.seed = 0xFFFFFFFFFFFFFFFFULL;
    EXPECT_EQ(load_config(serialize(c)), c);
}

TEST(Digest, SensitiveToContent) {
    ExperimentConfig c = load_config(kMinimalOrbit);
    const std::string d = digest(c);
    EXPECT_EQ(d.size(), 16u);
    c.run.tol = 1e-8;
    EXPECT_NE(digest(c), d);
}

TEST(RunExperiment, OrbitAffine) {
    const ReportRecord r = run_experiment(load_config_file(fixture("orbit_affine.toml")));
    ASSERT_EQ(r.verdicts, std::vector<std::string>{"fixed_point"});
    EXPECT_TRUE(r.verdict_achieved);
    // ceil(log(1e-9) / log(0.5)) = 30
    EXPECT_EQ(r.scalars.at("iterations"), 30.0);
    EXPECT_NEAR(r.points.at("z")[0], 2.0, 1e-8);
    ASSERT_EQ(r.rows.size(), 30u);
    // x = 0, y = T 0 = 1: a = 1, b = 0.5^n.
    for (const auto& row : r.rows) {
        ASSERT_EQ(row.a, 1.0);
        ASSERT_EQ(row.b, std::ldexp(1.0, -static_cast<int>(row.n)));
    }
}

TEST(RunExperiment, OrbitRotationContraction) {
    const ReportRecord r = run_experiment(load_config_file(fixture("orbit_rotation_contraction.toml")));
    ASSERT_EQ(r.verdicts.size(), 3u);
    EXPECT_TRUE(r.verdict_achieved);
    const Point expected = pclab::testing::rotation_contraction_fixed_point();
    for (const char* key : {"z.0", "z.1", "z.2"}) {
        EXPECT_NEAR(r.points.at(key)[0], expected[0], 1e-8);
        EXPECT_NEAR(r.points.at(key)[1], expected[1], 1e-8);
    }
    EXPECT_LE(r.scalars.at("limit_spread"), 1e-8);
}

TEST(RunExperiment, OrbitWithoutConvergence) {
    ExperimentConfig c = load_config_file(fixture("orbit_affine.toml"));
    c.run.n_max = 10;
    const ReportRecord r = run_experiment(c);
    EXPECT_EQ(r.verdicts, std::vector<std::string>{"no_convergence"});
    EXPECT_FALSE(r.verdict_achieved);
}

TEST(RunExperiment, ProximityInterval) {
    const ReportRecord r = run_experiment(load_config_file(fixture("proximity_interval.toml")));
    ASSERT_EQ(r.verdicts, std::vector<std::string>{"proximity_cycle"});
    EXPECT_NEAR(r.points.at("z1")[0], 1.0, 1e-8);
    EXPECT_NEAR(r.points.at("z2")[0], -1.0, 1e-8);
    EXPECT_LE(std::abs(r.scalars.at("gap")), 1e-8);
}

TEST(RunExperiment, ProximityBalls) {
    const ReportRecord r = run_experiment(load_config_file(fixture("proximity_balls.toml")));
    ASSERT_EQ(r.verdicts, std::vector<std::string>{"proximity_cycle"});
    EXPECT_NEAR(r.scalars.at("pair_distance"), 2.0, 1e-6);
    EXPECT_NEAR(r.scalars.at("set_distance"), 2.0, 1e-6);
}

TEST(RunExperiment, ClassifyFixtures) {
    const auto verdict = [](const std::string& name) {
        return run_experiment(load_config_file(fixture(name)));
    };
    const ReportRecord id = verdict("classify_identity.toml");
    EXPECT_EQ(id.verdicts, std::vector<std::string>{"asymptotically_nonexpansive"});
    EXPECT_EQ(id.scalars.at("limsup_estimate"), 0.0);
    EXPECT_EQ(id.rows.size(), 16u);

    EXPECT_EQ(verdict("classify_halving.toml").verdicts, std::vector<std::string>{"beta_strict_contractive_IS"});
    const ReportRecord rot = verdict("classify_rotation.toml");
    EXPECT_EQ(rot.verdicts, std::vector<std::string>{"asymptotically_nonexpansive"});
    EXPECT_NEAR(rot.scalars.at("limsup_estimate"), 0.0, 1e-9);
    const ReportRecord dbl = verdict("classify_doubling.toml");
    EXPECT_EQ(dbl.verdicts, std::vector<std::string>{"unclassified"});
    EXPECT_FALSE(dbl.verdict_achieved);
}

TEST(RunExperiment, CertifyRowsAreNMajor) {
    const ExperimentConfig c = load_config_file(fixture("certify_rotation_contraction.toml"));
    const ReportRecord r = run_experiment(c);
    ASSERT_EQ(r.rows.size(), c.run.n_max * c.run.samples);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        ASSERT_EQ(r.rows[i].n, i / c.run.samples + 1);
        ASSERT_GE(r.rows[i].xi, 0.0);
        ASSERT_GE(r.rows[i].mu, -1.0);
        ASSERT_LE(r.rows[i].mu, 1.0);
    }
}

TEST(RunExperiment, SweepRows) {
    const ExperimentConfig c = load_config_file(fixture("sweep_rotation_contraction.toml"));
    const ReportRecord r = run_experiment(c);
    ASSERT_EQ(r.verdicts.size(), c.run.betas.size());
    ASSERT_EQ(r.rows.size(), c.run.betas.size() * c.run.n_max);
    for (const auto& row : r.rows) {
        ASSERT_TRUE(row.sweep_value.has_value());
        ASSERT_TRUE(row.alpha_fit.has_value());
        ASSERT_GE(*row.alpha_fit, 0.0);
    }
    const std::string csv = to_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "sweep_value,n,a,b,dd,mu,xi,k,case,s_n,alpha_fit");
}

TEST(RunExperiment, ErrorsAreAnnotatedWithTheMode) {
    ExperimentConfig c = load_config_file(fixture("classify_halving.toml"));
    c.params.beta = ConstantSeq{0.9};  // mu from data then exceeds its bound
    try {
        run_experiment(c);
        FAIL() << "expected an ExperimentError";
    } catch (const ExperimentError& e) {
        EXPECT_EQ(e.mode(), Mode::classify);
        EXPECT_EQ(std::string(e.what()).rfind("classify mode: ", 0), 0u);
    }
}

// Reruns with the same config and seed give byte-identical bodies.
TEST(RunExperimentProperties, RerunsAreByteIdentical) {
    for (const auto& name : kFixtures) {
        const ExperimentConfig c = load_config_file(fixture(name));
        const ReportRecord a = run_experiment(c), b = run_experiment(c);
        EXPECT_EQ(to_csv(a), to_csv(b)) << name;
        EXPECT_EQ(to_summary(a), to_summary(b)) << name;
        EXPECT_EQ(to_json(a), to_json(b)) << name;
    }
}

TEST(RunExperimentProperties, RowsSatisfySampleInvariants) {
    for (const auto& name : kFixtures) {
        const ReportRecord r = run_experiment(load_config_file(fixture(name)));
        for (const auto& row : r.rows) {
            if (!std::isfinite(row.s_n)) continue;
            CertificateSample s;
            s.a = row.a;
            s.b = row.b;
            s.dd = row.dd;
            s.coeffs.mu = row.mu;
            s.xi = row.xi;
            ASSERT_TRUE(satisfies_sample_invariants(s)) << name << " n = " << row.n;
        }
    }
}

TEST(Outputs, CsvAndSummaryFiles) {
    const ReportRecord r = run_experiment(load_config_file(fixture("orbit_affine.toml")));
    const auto dir = std::filesystem::path(::testing::TempDir()) / "pclab_outputs";
    std::filesystem::remove_all(dir);
    const auto files = write_outputs(r, dir, OutputFormat::csv);
    ASSERT_EQ(files.size(), 2u);
    const std::string csv = read_text(dir / "trace.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,a,b,dd,mu,xi,k,case,s_n");
    // First row: n = 1, a = 1, b = 0.5, dd = 0.5.
    EXPECT_EQ(csv.substr(csv.find('\n') + 1, 8), "1,1,0.5,");
    const std::string summary = read_text(dir / "summary.toml");
    EXPECT_NE(summary.find("verdicts = [ 'fixed_point' ]"), std::string::npos) << summary;
    EXPECT_NE(summary.find(r.config_digest), std::string::npos);

    write_outputs(r, dir, OutputFormat::json);
    EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
    EXPECT_NE(read_text(dir / "report.json").find("\"fixed_point\""), std::string::npos);
}
