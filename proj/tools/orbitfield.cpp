#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

#include "orbitfield/algebra.hpp"
#include "orbitfield/errors.hpp"
#include "orbitfield/experiment.hpp"
#include "orbitfield/frames.hpp"
#include "orbitfield/io.hpp"
#include "orbitfield/presets.hpp"
#include "orbitfield/strata.hpp"

using json = nlohmann::json;
using namespace orbitfield;

namespace {

enum Exit { kPass = 0, kFail = 1, kInvalid = 2 };

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json basis_json(const Subspace& s) {
  json a = json::array();
  for (int i = 0; i < s.dim(); ++i) a.push_back(vec_json(s.vector(i)));
  return a;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_validate(const std::string& src) {
  const ParsedAlgebra p = load_algebra_source(src);
  const auto viol = validate_algebra(p.tensor);
  json out;
  out["dim"] = p.tensor.n;
  out["derived_start"] = p.tensor.derived_start + 1;
  out["valid"] = viol.empty();
  json arr = json::array();
  for (const auto& v : viol) {
    arr.push_back({{"invariant", v.invariant}, {"i", v.i + 1}, {"j", v.j + 1}, {"k", v.k + 1}, {"detail", v.detail}});
  }
  out["violations"] = arr;
  emit(out);
  return viol.empty() ? kPass : kFail;
}

int cmd_stabilizer(const std::string& src, const std::string& ell_spec) {
  const LieAlgebra a = load_algebra(src);
  const Vec ell = parse_vector(ell_spec, a);
  const auto sf = skew_form_and_stabilizer(a, ell);
  emit({{"dim", sf.stabilizer.dim()},
        {"orbit_dim", a.dim() - sf.stabilizer.dim()},
        {"basis", basis_json(sf.stabilizer)}});
  return kPass;
}

int cmd_polarize(const std::string& src, const std::string& ell_spec) {
  const LieAlgebra a = load_algebra(src);
  const Vec ell = parse_vector(ell_spec, a);
  const VergneResult v = vergne_polarization(a, ell);
  emit({{"index_set", v.indices.index_set},
        {"J", v.indices.J},
        {"K", v.indices.K},
        {"polarization_dim", v.polarization.subspace.dim()},
        {"polarization", basis_json(v.polarization.subspace)},
        {"zero_threshold", v.zero_threshold},
        {"warnings", v.warnings}});
  return kPass;
}

int cmd_stratify(const std::string& src, const std::string& functionals) {
  const LieAlgebra a = load_algebra(src);
  const auto ells = parse_functionals_json(read_text_file(functionals), a.dim());
  const Stratification s = stratify(a, ells);
  json strata = json::array();
  for (std::size_t r = 0; r < s.strata.size(); ++r) {
    strata.push_back({{"rank", s.strata[r].rank},
                      {"label", to_string(s.strata[r])},
                      {"J", s.strata[r].J},
                      {"K", s.strata[r].K},
                      {"members", s.members[r]}});
  }
  emit({{"strata", strata}, {"assignment", s.assignment}});
  return kPass;
}

int cmd_frames(const std::string& config) {
  const ExperimentConfig cfg = load_experiment(config);
  const SequenceCertificate cert = generate_sequence(cfg.algebra, cfg.sequence);
  const FrameSequence seq = frame_sequence(cfg.algebra, cert.ells, true, cert.tail, cert.limit);
  const LimitCase lc = classify_limit(seq, cfg.algebra, cert.limit);
  json rows = json::array();
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const AdaptedFrame& f = seq.frames[i];
    rows.push_back({{"k", cfg.sequence.schedule[i]},
                    {"lambda", f.lambda},
                    {"rho", f.rho},
                    {"c", f.c},
                    {"frame_drift", frame_distance(f, seq.limit_frame)}});
  }
  const AdaptedFrame& lf = seq.limit_frame;
  emit({{"stratum", to_string(cert.label)},
        {"limit_stratum", to_string(cert.limit_label)},
        {"certificate", cert.certificate},
        {"case", to_string(lc.tag)},
        {"m", lc.m},
        {"frames", rows},
        {"limit", {{"lambda", lf.lambda}, {"rho", lf.rho}, {"c", lf.c}}},
        {"cauchy_distance", seq.cauchy_distance}});
  return kPass;
}

int cmd_run(const std::string& config, const std::string& out_dir) {
  const ExperimentConfig cfg = load_experiment(config);
  const ExperimentResult r = run_experiment(cfg, out_dir);
  std::cout << r.summary_json;
  return r.pass ? kPass : kFail;
}

int cmd_census(const std::string& preset, int count, std::uint64_t seed) {
  const LieAlgebra a = load_algebra(preset);
  const CensusResult c = census(a, count, seed);
  json dims = json::object();
  for (const auto& [d, k] : c.orbit_dims) dims[std::to_string(d)] = k;
  emit({{"samples", c.samples}, {"orbit_dims", dims}, {"exceptions", c.exceptions}, {"errors", c.errors}});
  return c.exceptions == 0 ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbitfield: coadjoint orbits, adapted frames and limit operators of two-step nilpotent Lie groups"};
  app.require_subcommand(1);
  int code = kPass;

  std::string algebra, ell, functionals, config, out_dir = "out";
  int count = 500;
  std::uint64_t seed = 20240611;

  auto* validate = app.add_subcommand("validate", "Check structure constants");
  validate->add_option("algebra", algebra, "Algebra JSON file or preset name")->required();
  validate->callback([&] { code = cmd_validate(algebra); });

  auto* stab = app.add_subcommand("stabilizer", "Stabilizer g(l) of a functional");
  stab->add_option("algebra", algebra)->required();
  stab->add_option("--ell", ell, "Functional, e.g. 0,0,1 or Z=1")->required();
  stab->callback([&] { code = cmd_stabilizer(algebra, ell); });

  auto* pol = app.add_subcommand("polarize", "Vergne polarization and index sets");
  pol->add_option("algebra", algebra)->required();
  pol->add_option("--ell", ell)->required();
  pol->callback([&] { code = cmd_polarize(algebra, ell); });

  auto* strat = app.add_subcommand("stratify", "Group functionals by (J,K) stratum");
  strat->add_option("algebra", algebra)->required();
  strat->add_option("functionals", functionals, "JSON list of functionals")->required();
  strat->callback([&] { code = cmd_stratify(algebra, functionals); });

  auto* frames = app.add_subcommand("frames", "Adapted frames and limit case of a configured sequence");
  frames->add_option("config", config)->required();
  frames->callback([&] { code = cmd_frames(config); });

  auto* run = app.add_subcommand("run", "Run an experiment config and write CSV + summary");
  run->add_option("config", config)->required();
  run->add_option("-o,--out", out_dir, "Output directory");
  run->callback([&] { code = cmd_run(config, out_dir); });

  auto* cen = app.add_subcommand("census", "Orbit-dimension census over random functionals");
  cen->add_option("preset", algebra)->required();
  cen->add_option("--count", count)->check(CLI::PositiveNumber);
  cen->add_option("--seed", seed);
  cen->callback([&] { code = cmd_census(algebra, count, seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInvalid;
  } catch (const MalformedInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return code;
}
