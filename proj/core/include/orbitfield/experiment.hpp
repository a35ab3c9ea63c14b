#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitfield/frames.hpp"
#include "orbitfield/limits.hpp"
#include "orbitfield/strata.hpp"

namespace orbitfield {

struct SequenceSpec {
  Vec base;
  Vec direction;
  std::string law = "1/k";  // "1/k" | "1/k^2" | "2^-k"
  std::vector<double> schedule;
  // Step sizes s beyond the schedule, used to read off the limit frame.
  std::vector<double> tail{1e-6, 5e-7};
};

double law_step(const std::string& law, double k);

struct Thresholds {
  double decreasing_fraction = 0.8;
  double final_ratio = 0.1;
  bool require_fit = true;
  bool require_refinement = true;
  double nu_bound_slack = 2e-2;
  double nu_asym = 1e-10;
};

struct CoefficientSpec {
  std::vector<double> alpha, beta;
  double box = 1.0;
  int box_points = 5;
  bool ball = true;
  double final_max = 0.1;
  double decreasing_fraction = 0.5;
};

struct SweepSpec {
  int count = 50;
  std::uint64_t seed = 20240611;
  std::string forbid_case = "Case3";
};

struct ExperimentConfig {
  std::string id;
  std::string kind = "defect";  // "defect" | "case_sweep"
  std::string algebra_source;
  LieAlgebra algebra;
  SequenceSpec sequence;
  TestFunction test_function;
  DefectOptions grid;
  Thresholds thresholds;
  std::optional<std::string> expect_case;
  std::optional<int> expect_m;
  std::optional<CoefficientSpec> coefficient;
  SweepSpec sweep;
  double time_budget_s = 0.0;  // 0: unlimited
};

// Relative "file" references resolve against base_dir.
ExperimentConfig parse_experiment(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_experiment(const std::string& path);

struct SequenceCertificate {
  std::vector<Vec> ells;
  std::vector<Vec> tail;
  Vec limit;
  StratumLabel label;
  StratumLabel limit_label;
  int orbit_dim = 0;
  int limit_orbit_dim = 0;
  std::string certificate;  // "Case1 feeder" | "Case2 feeder" | "Case3 feeder"
};

// Throws PreconditionError naming the first k whose stratum differs.
SequenceCertificate generate_sequence(const LieAlgebra& a, const SequenceSpec& spec);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentResult {
  std::string id;
  bool pass = false;
  std::vector<CheckResult> checks;
  std::optional<SequenceCertificate> certificate;
  std::optional<LimitCase> limit_case;
  DefectReport report;
  std::vector<double> coefficient_defects;
  std::map<std::string, int> case_counts;  // case_sweep only
  double wall_time_s = 0.0;
  std::string csv;           // with timing column
  std::string summary_json;
};

// Runs the config; with a non-empty out_dir writes <id>.csv and <id>.summary.json.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir = "");

// Fraction of consecutive steps with a strict decrease.
double decreasing_fraction(const std::vector<double>& v);

// Stratified random functionals: zero derived part, rank-two derived part, generic.
std::vector<Vec> sample_functionals(const LieAlgebra& a, int count, std::uint64_t seed);

struct CensusResult {
  std::map<int, int> orbit_dims;  // dimension -> count
  int samples = 0;
  int exceptions = 0;
  std::vector<std::string> errors;
};

CensusResult census(const LieAlgebra& a, int count, std::uint64_t seed);

}  // namespace orbitfield
