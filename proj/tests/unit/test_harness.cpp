#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "orbitfield/errors.hpp"
#include "orbitfield/experiment.hpp"
#include "orbitfield/presets.hpp"

using namespace orbitfield;

namespace {

Vec e(int n, int i) { return Vec::Unit(n, i); }

std::string read_file(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTiny = R"({
  "id": "tiny",
  "algebra": "heis3",
  "sequence": {"base": {"Z": 1.0}, "direction": {"Z": 1.0}, "law": "1/k", "schedule": [1, 2, 4]},
  "test_function": {"factors": [{"role": "z", "kind": "bandlimited", "B": 4.0}]},
  "grid": {"N": 32, "L": "auto", "max_doublings": 1},
  "thresholds": {"final_ratio": 0.5},
  "expect_case": "Case1"
})";

}  // namespace

TEST(Presets, Dimensions) {
  const std::map<std::string, int> dims{{"heis3", 3}, {"heis5", 5}, {"h3xh3", 6},
                                        {"free32", 6}, {"free42", 10}, {"abelian2", 2}};
  for (const auto& [name, n] : dims) EXPECT_EQ(load_preset(name).dim(), n) << name;
  EXPECT_EQ(preset_names().size(), dims.size());
  EXPECT_THROW(load_preset("heis4"), MalformedInput);
}

TEST(Laws, Steps) {
  EXPECT_DOUBLE_EQ(law_step("1/k", 4), 0.25);
  EXPECT_DOUBLE_EQ(law_step("1/k^2", 4), 1.0 / 16);
  EXPECT_DOUBLE_EQ(law_step("2^-k", 3), 0.125);
  EXPECT_THROW(law_step("k", 2), MalformedInput);
}

TEST(GenerateSequence, HeisenbergToCharacters) {
  const LieAlgebra a = load_preset("heis3");
  SequenceSpec s{Vec::Zero(3), e(3, 2), "1/k", {2, 4, 8}};
  const SequenceCertificate c = generate_sequence(a, s);
  ASSERT_EQ(c.ells.size(), 3u);
  EXPECT_EQ(c.orbit_dim, 2);
  EXPECT_EQ(c.limit_orbit_dim, 0);
  EXPECT_EQ(c.label.J.size(), 1u);
  EXPECT_EQ(c.label.K.size(), 1u);
  EXPECT_TRUE(c.limit_label.J.empty());
  EXPECT_TRUE(c.limit_label.K.empty());
  EXPECT_EQ(c.certificate, "Case2 feeder");
  EXPECT_NEAR(c.ells[1](2), 0.25, 1e-15);
}

TEST(GenerateSequence, FreeFourTwoDropsOrbitDimension) {
  const LieAlgebra a = load_preset("free42");
  Vec base = e(10, 4);                                  // e12*
  SequenceSpec s{base, e(10, 9), "1/k", {1, 2, 4, 8}};  // + e34* / k
  const SequenceCertificate c = generate_sequence(a, s);
  EXPECT_EQ(c.orbit_dim, 4);
  EXPECT_EQ(c.limit_orbit_dim, 2);
  EXPECT_EQ(c.certificate, "Case3 feeder");
}

TEST(GenerateSequence, ConstantIsCaseOneFeeder) {
  const LieAlgebra a = load_preset("heis3");
  SequenceSpec s{e(3, 2), Vec::Zero(3), "1/k", {1, 2, 4}};
  EXPECT_EQ(generate_sequence(a, s).certificate, "Case1 feeder");
}

TEST(GenerateSequence, StratumDriftNamesIndex) {
  const LieAlgebra a = load_preset("heis3");
  // The last step is below the zero threshold, so that functional sits in the limit stratum.
  SequenceSpec s{e(3, 0), e(3, 2), "1/k", {1, 2, 1e300}};
  try {
    generate_sequence(a, s);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& err) {
    EXPECT_NE(std::string(err.what()).find("k=1.0000000000000001e+300"), std::string::npos) << err.what();
  }
}

TEST(Config, ParseErrors) {
  EXPECT_THROW(parse_experiment("{"), MalformedInput);
  EXPECT_THROW(parse_experiment(R"({"id": "x"})"), MalformedInput);
  std::string bad = kTiny;
  bad.replace(bad.find("\"1/k\""), 5, "\"1/q\"");
  EXPECT_THROW(parse_experiment(bad), MalformedInput);
  std::string bad_role = kTiny;
  bad_role.replace(bad_role.find("\"z\""), 3, "\"q7\"");
  EXPECT_THROW(parse_experiment(bad_role), MalformedInput);
}

TEST(Config, ShippedConfigsParse) {
  for (const char* name : {"heis3_case1", "heis3_case2", "h3xh3_case3", "free42_case3", "free32_nocase3"}) {
    const std::string path = std::string(ORBITFIELD_CONFIG_DIR) + "/" + name + ".json";
    const ExperimentConfig cfg = load_experiment(path);
    EXPECT_EQ(cfg.id, name);
  }
}

TEST(Run, TinyCaseOneIsDeterministic) {
  const ExperimentConfig cfg = parse_experiment(kTiny);
  const ExperimentResult r1 = run_experiment(cfg);
  const ExperimentResult r2 = run_experiment(cfg);
  for (const auto& c : r1.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
  ASSERT_EQ(r1.report.rows.size(), 3u);
  EXPECT_EQ(report_csv(r1.report, cfg.id, false), report_csv(r2.report, cfg.id, false));
  EXPECT_EQ(r1.limit_case->tag, CaseTag::Case1);
  EXPECT_GT(r1.report.rows[0].defect, r1.report.rows[2].defect);
}

TEST(Run, WritesArtifacts) {
  const ExperimentConfig cfg = parse_experiment(kTiny);
  const std::string dir = ::testing::TempDir() + "orbitfield_run";
  run_experiment(cfg, dir);
  const std::string csv = read_file(dir + "/tiny.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n') + 1), csv_header(true));
  EXPECT_NE(read_file(dir + "/tiny.summary.json").find("\"pass\""), std::string::npos);
}

TEST(Metrics, DecreasingFraction) {
  EXPECT_DOUBLE_EQ(decreasing_fraction({3, 2, 2, 1, 5}), 0.5);
  EXPECT_DOUBLE_EQ(decreasing_fraction({1}), 1.0);
}

TEST(Census, FreeThreeTwo) {
  const CensusResult c = census(load_preset("free32"), 80, 7);
  EXPECT_EQ(c.samples, 80);
  EXPECT_EQ(c.exceptions, 0);
  for (const auto& [dim, n] : c.orbit_dims) EXPECT_TRUE(dim == 0 || dim == 2) << dim;
  EXPECT_EQ(c.orbit_dims.size(), 2u);
}

TEST(Census, SamplerIsSeeded) {
  const LieAlgebra a = load_preset("free42");
  const auto s1 = sample_functionals(a, 12, 3), s2 = sample_functionals(a, 12, 3);
  ASSERT_EQ(s1.size(), 12u);
  for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_EQ(s1[i], s2[i]);
}
