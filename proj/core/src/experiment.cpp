#include "orbitfield/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "json_util.hpp"
#include "orbitfield/errors.hpp"
#include "orbitfield/io.hpp"
#include "orbitfield/parallel.hpp"

namespace orbitfield {

using detail::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string case_name(const LimitCase& lc) { return to_string(lc.tag); }

LieAlgebra algebra_from_node(const json& j, const std::string& base_dir, std::string& source) {
  if (j.is_string()) {
    source = j.get<std::string>();
    const std::filesystem::path p = std::filesystem::path(base_dir) / source;
    std::error_code ec;
    if (std::filesystem::is_regular_file(p, ec)) return load_algebra(p.string());
    return load_algebra(source);
  }
  if (j.is_object() && j.contains("file")) {
    source = j["file"].get<std::string>();
    return load_algebra((std::filesystem::path(base_dir) / source).string());
  }
  if (j.is_object()) {
    source = "inline";
    const ParsedAlgebra p = parse_algebra_json(j.dump());
    return from_tensor(p.tensor, p.basis);
  }
  throw MalformedInput("experiment: algebra must be a preset name, {\"file\": ...} or an inline object");
}

std::vector<double> number_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw MalformedInput(what + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) throw MalformedInput(what + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

StratumLabel checked_label(const LieAlgebra& a, const Vec& ell, const std::string& where) {
  return with_context(where, [&] { return label_of(a, ell); });
}

std::string feeder(const LieAlgebra& a, int d, const Vec& limit) {
  const int n = a.dim();
  const int lim_stab = stabilizer(a, limit).dim();
  if (lim_stab == n - 2 * d) return "Case1 feeder";
  if (a.derived_algebra().project(limit).norm() <= vergne_zero_threshold(a, limit)) return "Case2 feeder";
  return "Case3 feeder";
}

Vec normal_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

// Functional on the derived block whose form on generators is u ^ v.
Vec rank_two_derived(const LieAlgebra& a, const Vec& u, const Vec& v) {
  const int n = a.dim();
  const int ds = a.derived_start();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < ds; ++i)
    for (int j = i + 1; j < ds; ++j) pairs.emplace_back(i, j);
  if (pairs.empty() || ds == n) return Vec::Zero(n);
  Mat sys(static_cast<int>(pairs.size()), n - ds);
  Vec rhs(static_cast<int>(pairs.size()));
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto [i, j] = pairs[r];
    sys.row(static_cast<int>(r)) = a.structure(i, j).tail(n - ds).transpose();
    rhs(static_cast<int>(r)) = u(i) * v(j) - u(j) * v(i);
  }
  Vec sol = sys.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  Vec out = Vec::Zero(n);
  out.tail(n - ds) = sol;
  return out;
}

json checks_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return arr;
}

void add_check(ExperimentResult& r, const std::string& name, bool pass, const std::string& detail) {
  r.checks.push_back({name, pass, detail});
}

}  // namespace

double law_step(const std::string& law, double k) {
  if (law == "1/k") return 1.0 / k;
  if (law == "1/k^2") return 1.0 / (k * k);
  if (law == "2^-k") return std::pow(2.0, -k);
  throw MalformedInput("unknown sequence law '" + law + "' (use 1/k, 1/k^2 or 2^-k)");
}

ExperimentConfig parse_experiment(const std::string& text, const std::string& base_dir) {
  const json j = detail::parse_json(text, "experiment");
  if (!j.is_object()) throw MalformedInput("experiment: expected a JSON object");
  ExperimentConfig cfg;
  cfg.id = j.value("id", std::string("experiment"));
  cfg.kind = j.value("kind", std::string("defect"));
  if (cfg.kind != "defect" && cfg.kind != "case_sweep") {
    throw MalformedInput("experiment: unknown kind '" + cfg.kind + "'");
  }
  if (!j.contains("algebra")) throw MalformedInput("experiment: missing algebra");
  cfg.algebra = algebra_from_node(j["algebra"], base_dir, cfg.algebra_source);
  const LieAlgebra& a = cfg.algebra;
  cfg.time_budget_s = j.value("time_budget_s", 0.0);

  if (j.contains("sequence")) {
    const json& s = j["sequence"];
    SequenceSpec& sp = cfg.sequence;
    sp.base = s.contains("base") ? detail::vector_from_json(s["base"], a, "sequence.base") : Vec::Zero(a.dim());
    sp.direction = s.contains("direction") ? detail::vector_from_json(s["direction"], a, "sequence.direction")
                                           : Vec::Zero(a.dim());
    sp.law = s.value("law", std::string("1/k"));
    law_step(sp.law, 1.0);
    if (s.contains("schedule")) sp.schedule = number_list(s["schedule"], "sequence.schedule");
    if (s.contains("tail")) sp.tail = number_list(s["tail"], "sequence.tail");
  } else if (j.contains("law") || j.contains("schedule")) {
    cfg.sequence.law = j.value("law", std::string("1/k"));
    law_step(cfg.sequence.law, 1.0);
    if (j.contains("schedule")) cfg.sequence.schedule = number_list(j["schedule"], "schedule");
  }
  for (std::size_t i = 1; i < cfg.sequence.schedule.size(); ++i) {
    if (!(cfg.sequence.schedule[i] > cfg.sequence.schedule[i - 1])) {
      throw MalformedInput("experiment: schedule must be strictly increasing");
    }
  }
  if (cfg.kind == "defect" && cfg.sequence.schedule.empty()) {
    throw MalformedInput("experiment: defect runs need a schedule");
  }

  if (j.contains("test_function")) cfg.test_function = detail::testfunction_from_json(j["test_function"]);

  if (j.contains("grid")) {
    const json& g = j["grid"];
    cfg.grid.N = g.value("N", cfg.grid.N);
    if (cfg.grid.N < 2) throw MalformedInput("grid.N must be at least 2");
    if (g.contains("L") && g["L"].is_number()) cfg.grid.L = g["L"].get<double>();
    else if (g.contains("L") && g["L"] != "auto") throw MalformedInput("grid.L must be a number or \"auto\"");
    cfg.grid.ny = g.value("ny", cfg.grid.ny);
    cfg.grid.max_doublings = g.value("max_doublings", cfg.grid.max_doublings);
    cfg.grid.max_points = g.value("max_points", cfg.grid.max_points);
    if (g.contains("window_a")) cfg.grid.window.a = g["window_a"].get<double>();
  }
  if (j.contains("thresholds")) {
    const json& t = j["thresholds"];
    Thresholds& th = cfg.thresholds;
    th.decreasing_fraction = t.value("decreasing_fraction", th.decreasing_fraction);
    th.final_ratio = t.value("final_ratio", th.final_ratio);
    th.require_fit = t.value("require_fit", th.require_fit);
    th.require_refinement = t.value("require_refinement", th.require_refinement);
    th.nu_bound_slack = t.value("nu_bound_slack", th.nu_bound_slack);
    th.nu_asym = t.value("nu_asym", th.nu_asym);
  }
  if (j.contains("expect_case")) cfg.expect_case = j["expect_case"].get<std::string>();
  if (j.contains("expect_m")) cfg.expect_m = j["expect_m"].get<int>();
  if (j.contains("coefficient")) {
    const json& c = j["coefficient"];
    CoefficientSpec cs;
    if (c.contains("alpha")) cs.alpha = number_list(c["alpha"], "coefficient.alpha");
    if (c.contains("beta")) cs.beta = number_list(c["beta"], "coefficient.beta");
    cs.box = c.value("box", cs.box);
    cs.box_points = c.value("box_points", cs.box_points);
    if (c.contains("domain")) {
      const auto dom = c["domain"].get<std::string>();
      if (dom != "ball" && dom != "cube") throw MalformedInput("coefficient.domain must be ball or cube");
      cs.ball = dom == "ball";
    }
    cs.final_max = c.value("final_max", cs.final_max);
    cs.decreasing_fraction = c.value("decreasing_fraction", cs.decreasing_fraction);
    cfg.coefficient = cs;
  }
  cfg.sweep.count = j.value("count", cfg.sweep.count);
  cfg.sweep.seed = j.value("seed", cfg.sweep.seed);
  cfg.sweep.forbid_case = j.value("forbid_case", cfg.sweep.forbid_case);
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  const std::filesystem::path p(path);
  return parse_experiment(read_text_file(path), p.has_parent_path() ? p.parent_path().string() : ".");
}

SequenceCertificate generate_sequence(const LieAlgebra& a, const SequenceSpec& spec) {
  if (spec.base.size() != a.dim() || spec.direction.size() != a.dim()) {
    throw MalformedInput("sequence: base/direction length != algebra dimension");
  }
  SequenceCertificate cert;
  cert.limit = spec.base;
  for (double k : spec.schedule) cert.ells.push_back(spec.base + law_step(spec.law, k) * spec.direction);
  for (double s : spec.tail) cert.tail.push_back(spec.base + s * spec.direction);
  if (cert.ells.empty()) throw MalformedInput("sequence: empty schedule");

  std::vector<StratumLabel> labels(cert.ells.size());
  parallel_for(cert.ells.size(), [&](std::size_t i) {
    labels[i] = checked_label(a, cert.ells[i], "k=" + num(spec.schedule[i]));
  });
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (!(labels[i] == labels[0])) {
      throw PreconditionError("stratum drift at k=" + num(spec.schedule[i]) + ": " + to_string(labels[i]) +
                              " differs from " + to_string(labels[0]));
    }
  }
  for (std::size_t i = 0; i < cert.tail.size(); ++i) {
    const StratumLabel l = checked_label(a, cert.tail[i], "tail s=" + num(spec.tail[i]));
    if (!(l == labels[0])) {
      throw PreconditionError("stratum drift in the tail at s=" + num(spec.tail[i]) + ": " + to_string(l));
    }
  }
  cert.label = labels[0];
  cert.limit_label = checked_label(a, cert.limit, "limit");
  cert.orbit_dim = 2 * static_cast<int>(cert.label.J.size());
  cert.limit_orbit_dim = 2 * static_cast<int>(cert.limit_label.J.size());
  cert.certificate = feeder(a, cert.orbit_dim / 2, cert.limit);
  return cert;
}

double decreasing_fraction(const std::vector<double>& v) {
  if (v.size() < 2) return 1.0;
  int dec = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) ++dec;
  return static_cast<double>(dec) / static_cast<double>(v.size() - 1);
}

namespace {

void run_defect(const ExperimentConfig& cfg, ExperimentResult& res) {
  const LieAlgebra& a = cfg.algebra;
  const SequenceCertificate cert =
      with_context("stage sequence", [&] { return generate_sequence(a, cfg.sequence); });
  res.certificate = cert;
  const FrameSequence seq = with_context("stage frames", [&] {
    return frame_sequence(a, cert.ells, true, cert.tail, cert.limit);
  });
  const LimitCase lc = with_context("stage classify", [&] { return classify_limit(seq, a, cert.limit); });
  res.limit_case = lc;
  if (cfg.expect_case) {
    add_check(res, "case", case_name(lc) == *cfg.expect_case,
              "classified " + case_name(lc) + ", expected " + *cfg.expect_case);
  }
  if (cfg.expect_m) {
    add_check(res, "m", lc.m == *cfg.expect_m,
              "m = " + std::to_string(lc.m) + ", expected " + std::to_string(*cfg.expect_m));
  }
  res.report = with_context("stage defect", [&] {
    return defect(seq, cfg.sequence.schedule, lc, cfg.test_function, cfg.grid);
  });

  std::vector<double> d;
  for (const auto& r : res.report.rows) d.push_back(r.defect);
  const double first = d.front(), last = d.back();
  if (first <= 1e-12) {
    double worst = 0.0;
    for (double v : d) worst = std::max(worst, v);
    add_check(res, "defect_zero", worst <= 1e-10, "max defect " + num(worst));
  } else {
    const double frac = decreasing_fraction(d);
    add_check(res, "decreasing", frac >= cfg.thresholds.decreasing_fraction,
              "decreasing fraction " + num(frac));
    add_check(res, "final_ratio", last < cfg.thresholds.final_ratio * first,
              "final/initial = " + num(last / first));
  }
  if (cfg.thresholds.require_fit) {
    add_check(res, "driver_fit", res.report.fit_ok,
              "C = " + num(res.report.fit_C) + ", max residual ratio " + num(res.report.max_residual_ratio));
  }
  bool bound_ok = true, asym_ok = true, refine_ok = true;
  double worst_gap = -1e300, worst_asym = 0.0, worst_change = 0.0;
  for (const auto& r : res.report.rows) {
    worst_gap = std::max(worst_gap, r.nu_norm - r.nu_bound);
    worst_asym = std::max(worst_asym, r.nu_asym);
    worst_change = std::max(worst_change, r.refine_change);
    bound_ok = bound_ok && r.nu_norm <= r.nu_bound + cfg.thresholds.nu_bound_slack;
    asym_ok = asym_ok && r.nu_asym < cfg.thresholds.nu_asym;
    refine_ok = refine_ok && r.refine_converged;
  }
  add_check(res, "nu_bound", bound_ok, "max(norm - bound) = " + num(worst_gap));
  add_check(res, "nu_involutive", asym_ok, "max asymmetry " + num(worst_asym));
  if (cfg.thresholds.require_refinement) {
    add_check(res, "refinement", refine_ok, "max relative change " + num(worst_change));
  }

  if (cfg.coefficient) {
    const CoefficientSpec& cs = *cfg.coefficient;
    const int dd = seq.limit_frame.d;
    std::vector<double> alpha = cs.alpha, beta = cs.beta;
    alpha.resize(dd, 0.0);
    beta.resize(dd, 0.0);
    CoefficientOptions opt;
    opt.box = cs.box;
    opt.box_points = cs.box_points;
    opt.ball = cs.ball;
    opt.window = cfg.grid.window;
    res.coefficient_defects.assign(seq.frames.size(), 0.0);
    parallel_for(seq.frames.size(), [&](std::size_t i) {
      res.coefficient_defects[i] = with_context("stage coefficient k=" + num(cfg.sequence.schedule[i]), [&] {
        return coefficient_defect(a, seq.frames[i], seq.limit_frame, alpha, beta, opt);
      });
    });
    const double frac = decreasing_fraction(res.coefficient_defects);
    add_check(res, "coefficient_final", res.coefficient_defects.back() < cs.final_max,
              "final coefficient defect " + num(res.coefficient_defects.back()));
    add_check(res, "coefficient_decreasing", frac >= cs.decreasing_fraction,
              "decreasing fraction " + num(frac));
  }
  res.csv = csv_header() + report_csv(res.report, cfg.id);
}

void run_sweep(const ExperimentConfig& cfg, ExperimentResult& res) {
  const LieAlgebra& a = cfg.algebra;
  std::mt19937_64 rng(cfg.sweep.seed);
  const int n = a.dim();
  const int ds = a.derived_start();
  std::vector<double> schedule = cfg.sequence.schedule;
  if (schedule.empty()) schedule = {1, 2, 4, 8, 16, 32, 64};
  int produced = 0, attempts = 0, failures = 0;
  std::string first_failure;
  for (const auto& name : {"Case1", "Case2", "Case3"}) res.case_counts[name] = 0;
  while (produced < cfg.sweep.count && attempts < 20 * cfg.sweep.count) {
    const int family = attempts % 3;
    ++attempts;
    SequenceSpec spec;
    spec.law = cfg.sequence.law;
    spec.schedule = schedule;
    spec.tail = cfg.sequence.tail;
    spec.base = normal_vector(n, rng);
    spec.direction = normal_vector(n, rng);
    if (family == 1) spec.base.tail(n - ds).setZero();
    if (family == 2) spec.direction.tail(n - ds).setZero();
    SequenceCertificate cert;
    try {
      cert = generate_sequence(a, spec);
    } catch (const PreconditionError&) {
      continue;  // left its stratum; draw another
    }
    try {
      const FrameSequence seq = frame_sequence(a, cert.ells, true, cert.tail, cert.limit);
      const LimitCase lc = classify_limit(seq, a, cert.limit);
      ++res.case_counts[case_name(lc)];
    } catch (const std::exception& e) {
      ++failures;
      if (first_failure.empty()) first_failure = e.what();
    }
    ++produced;
  }
  add_check(res, "count", produced == cfg.sweep.count,
            std::to_string(produced) + " sequences generated from " + std::to_string(attempts) + " draws");
  add_check(res, "no_errors", failures == 0,
            failures ? std::to_string(failures) + " failed, first: " + first_failure : "all classified");
  const int forbidden = res.case_counts[cfg.sweep.forbid_case];
  add_check(res, "forbidden_case", forbidden == 0,
            std::to_string(forbidden) + " sequences classified " + cfg.sweep.forbid_case);
  res.csv = "experiment,case,count\n";
  for (const auto& [k, v] : res.case_counts) res.csv += cfg.id + "," + k + "," + std::to_string(v) + "\n";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  ExperimentResult res;
  res.id = cfg.id;
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.kind == "case_sweep") {
    run_sweep(cfg, res);
  } else {
    run_defect(cfg, res);
  }
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (cfg.time_budget_s > 0.0) {
    add_check(res, "time_budget", res.wall_time_s <= cfg.time_budget_s,
              num(res.wall_time_s) + " s of " + num(cfg.time_budget_s) + " s");
  }
  res.pass = true;
  for (const auto& c : res.checks) res.pass = res.pass && c.pass;

  json s;
  s["id"] = cfg.id;
  s["kind"] = cfg.kind;
  s["algebra"] = cfg.algebra_source;
  s["pass"] = res.pass;
  s["checks"] = checks_json(res.checks);
  if (res.certificate) {
    s["certificate"] = res.certificate->certificate;
    s["stratum"] = to_string(res.certificate->label);
    s["limit_stratum"] = to_string(res.certificate->limit_label);
    s["orbit_dim"] = res.certificate->orbit_dim;
    s["limit_orbit_dim"] = res.certificate->limit_orbit_dim;
  }
  if (res.limit_case) {
    s["case"] = case_name(*res.limit_case);
    s["m"] = res.limit_case->m;
  }
  if (cfg.kind == "defect") {
    s["fit_C"] = std::isfinite(res.report.fit_C) ? json(res.report.fit_C) : json("inf");
    s["max_residual_ratio"] =
        std::isfinite(res.report.max_residual_ratio) ? json(res.report.max_residual_ratio) : json("inf");
    s["test_function"] = detail::testfunction_json(cfg.test_function);
  }
  if (!res.coefficient_defects.empty()) s["coefficient_defects"] = res.coefficient_defects;
  if (!res.case_counts.empty()) s["case_counts"] = res.case_counts;
  s["wall_time_s"] = res.wall_time_s;
  s["time_budget_s"] = cfg.time_budget_s;
  res.summary_json = s.dump(2) + "\n";

  if (!out_dir.empty()) {
    const std::filesystem::path dir(out_dir);
    write_text_file((dir / (cfg.id + ".csv")).string(), res.csv);
    write_text_file((dir / (cfg.id + ".summary.json")).string(), res.summary_json);
  }
  return res;
}

std::vector<Vec> sample_functionals(const LieAlgebra& a, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = a.dim();
  const int ds = a.derived_start();
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) {
    Vec ell = normal_vector(n, rng);
    switch (i % 3) {
      case 0:
        ell.tail(n - ds).setZero();
        break;
      case 1: {
        const Vec u = normal_vector(n, rng);
        const Vec v = normal_vector(n, rng);
        ell.tail(n - ds) = rank_two_derived(a, u, v).tail(n - ds);
        break;
      }
      default:
        break;
    }
    out.push_back(ell);
  }
  return out;
}

CensusResult census(const LieAlgebra& a, int count, std::uint64_t seed) {
  const auto sample = sample_functionals(a, count, seed);
  CensusResult res;
  res.samples = count;
  std::vector<int> dims(sample.size(), -1);
  std::vector<std::string> errs(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) {
    try {
      const VergneResult v = vergne_polarization(a, sample[i]);
      const IndexList idx = pukanszky_index_set(a, sample[i]);
      const int od = a.dim() - stabilizer(a, sample[i]).dim();
      if (static_cast<int>(idx.size()) != od || v.indices.index_set != idx) {
        throw InternalError("index set disagrees with the Vergne split");
      }
      dims[i] = od;
    } catch (const std::exception& e) {
      errs[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (dims[i] < 0) {
      ++res.exceptions;
      res.errors.push_back("sample " + std::to_string(i) + ": " + errs[i]);
    } else {
      ++res.orbit_dims[dims[i]];
    }
  }
  return res;
}

}  // namespace orbitfield
