#include <benchmark/benchmark.h>

#include "orbitfield/experiment.hpp"
#include "orbitfield/limits.hpp"
#include "orbitfield/presets.hpp"
#include "orbitfield/strata.hpp"

using namespace orbitfield;

static void BM_Vergne(benchmark::State& state) {
  const LieAlgebra a = load_preset("free42");
  const auto ells = sample_functionals(a, 64, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(vergne_polarization(a, ells[i++ % ells.size()]));
}
BENCHMARK(BM_Vergne);

static void BM_AdaptedFrame(benchmark::State& state) {
  const LieAlgebra a = load_preset("h3xh3");
  Vec ell = Vec::Zero(6);
  ell(4) = 1.0;
  ell(5) = 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(adapted_frame(a, ell));
}
BENCHMARK(BM_AdaptedFrame);

static void BM_RepKernelNorm(benchmark::State& state) {
  const LieAlgebra a = load_preset("heis3");
  const AdaptedFrame fr = adapted_frame(a, Vec::Unit(3, 2));
  TestFunction f;
  f.set("z", Factor::bandlimited(2.0));
  const Grid g = auto_grid(rep_extent(fr, f), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(rep_kernel(fr, f, g)).value);
}
BENCHMARK(BM_RepKernelNorm)->Arg(64)->Arg(256)->Arg(1024);

static void BM_KronApply2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = Grid::uniform(2, 4.0, n);
  KernelOperator op = KernelOperator::separable(g, 1.0, {CMat::Random(n, n), CMat::Random(n, n)});
  op.add_term({0.5, {CMat::Random(n, n), CMat::Random(n, n)}});
  const CVec v = CVec::Random(g.size());
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(v));
}
BENCHMARK(BM_KronApply2D)->Arg(48)->Arg(192);

static void BM_Case2Defect(benchmark::State& state) {
  const ExperimentConfig cfg = load_experiment(ORBITFIELD_CONFIG_DIR "/heis3_case2.json");
  const SequenceCertificate cert = generate_sequence(cfg.algebra, cfg.sequence);
  FrameSequence seq = frame_sequence(cfg.algebra, cert.ells, true, cert.tail, cert.limit);
  const LimitCase lc = classify_limit(seq, cfg.algebra, cert.limit);
  DefectOptions opt = cfg.grid;
  opt.max_doublings = 0;
  seq.frames.resize(1);
  for (auto _ : state) benchmark::DoNotOptimize(defect(seq, {cfg.sequence.schedule[0]}, lc, cfg.test_function, opt));
}
BENCHMARK(BM_Case2Defect)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
