#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "orbitfield/errors.hpp"
#include "orbitfield/limits.hpp"
#include "orbitfield/presets.hpp"

using namespace orbitfield;

namespace {

constexpr double kPi = std::numbers::pi;

Vec e(int n, int i) { return Vec::Unit(n, i); }

TestFunction heis_f(double wx, double wy, double bz) {
  TestFunction f;
  f.set("x1", Factor::gaussian(wx));
  f.set("y1", Factor::gaussian(wy));
  f.set("z", Factor::bandlimited(bz));
  return f;
}

struct Heis2 {
  LieAlgebra a = load_preset("heis3");
  FrameSequence seq;
  LimitCase lc;
  std::vector<double> ks;
};

Heis2 heis_case2(std::vector<double> ks) {
  Heis2 h;
  h.ks = ks;
  std::vector<Vec> ells;
  for (double k : ks) ells.push_back(e(3, 2) / k);
  h.seq = frame_sequence(h.a, ells, true, {1e-6 * e(3, 2), 5e-7 * e(3, 2)}, Vec::Zero(3));
  h.lc = classify_limit(h.seq, h.a, Vec::Zero(3));
  return h;
}

// nu kernel for Gaussian f_x, f_y and the default window exp(-pi t^2 / 2):
// f_x(s-r) c w mu^{-1/2} A^{-1/2} exp(pi (r+s)^2/(4A) - pi mu (r^2+s^2)/2), A = w^2 + 1/mu.
double nu_oracle(double s, double r, double wx, double wy, double mu, double c) {
  const double A = wy * wy + 1.0 / mu;
  return std::exp(-kPi * (s - r) * (s - r) / (wx * wx)) * c * wy / std::sqrt(mu * A) *
         std::exp(kPi * (r + s) * (r + s) / (4.0 * A) - kPi * mu * (r * r + s * s) / 2.0);
}

double bandlimited_ft(double xi, double b) {
  return std::abs(xi) >= b ? 0.0 : 0.5 * (1.0 + std::cos(kPi * xi / b));
}

}  // namespace

TEST(NuCase2, GaussianClosedForm) {
  const Heis2 h = heis_case2({4.0});
  const TestFunction f = heis_f(0.9, 1.3, 2.0);
  const ReducedFunction red = project_GU(f, h.seq.limit_frame);
  const AdaptedFrame& fk = h.seq.frames[0];
  const double mu = fk.lambda * fk.c[0];
  const Grid grid = Grid::uniform(1, 14.0, 96);
  const CMat k = nu_case2(fk, red, grid).samples();
  double worst = 0.0, peak = 0.0;
  for (int i = 0; i < 96; i += 5) {
    for (int j = 0; j < 96; j += 3) {
      const double o = nu_oracle(grid.axes[0].point(i), grid.axes[0].point(j), 0.9, 1.3, mu, 1.0);
      worst = std::max(worst, std::abs(k(i, j) - o));
      peak = std::max(peak, o);
    }
  }
  EXPECT_LT(worst, 1e-8 * peak);
}

TEST(NuCase2, BoundedByFourierSup) {
  for (double wy : {0.5, 1.0, 3.0}) {
    const Heis2 h = heis_case2({2.0, 16.0});
    const TestFunction f = heis_f(1.0, wy, 1.0);
    const ReducedFunction red = project_GU(f, h.seq.limit_frame);
    for (const auto& fk : h.seq.frames) {
      const Grid grid = auto_grid(defect_extents(fk, h.seq.limit_frame, h.lc, f), 256);
      const double n = operator_norm(nu_case2(fk, red, grid)).value;
      EXPECT_LE(n, fourier_sup(red) + 2e-2) << wy;
      EXPECT_LT(nu_case2(fk, red, grid).max_asymmetry(), 1e-10);
    }
  }
}

TEST(NuCase2, ZeroFunction) {
  const Heis2 h = heis_case2({4.0});
  ReducedFunction red = project_GU(heis_f(1, 1, 1), h.seq.limit_frame);
  red.constant = 0.0;
  const NormResult r = operator_norm(nu_case2(h.seq.frames[0], red, Grid::uniform(1, 5.0, 32)));
  EXPECT_EQ(r.value, 0.0);
}

TEST(NuCase2, RejectsNonzeroLimitLambda) {
  const LieAlgebra a = load_preset("heis3");
  const AdaptedFrame fr = adapted_frame(a, e(3, 2));
  EXPECT_THROW(nu_case2(fr, project_GU(heis_f(1, 1, 2), fr), Grid::uniform(1, 5.0, 16)), PreconditionError);
}

TEST(NuCase3, FullRankReducesToRepKernel) {
  const LieAlgebra a = load_preset("h3xh3");
  const AdaptedFrame fr = adapted_frame(a, e(6, 4) + 0.5 * e(6, 5));
  TestFunction f;
  f.set("x1", Factor::gaussian(1.0));
  f.set("y2", Factor::gaussian(0.7));
  f.set("z", Factor::bandlimited(3.0));
  f.set("adot1", Factor::bandlimited(1.0));
  const Grid grid = auto_grid(rep_extent(fr, f), 12);
  const CMat nu = nu_case3(fr, 2, project_GU(f, fr), grid).samples();
  const CMat rk = rep_kernel(fr, f, grid).samples();
  EXPECT_LT((nu - rk).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(NuCase3, ProductSequenceBoundAndInvolutivity) {
  const LieAlgebra a = load_preset("h3xh3");
  std::vector<Vec> ells;
  for (int k : {2, 8}) ells.push_back(e(6, 4) + e(6, 5) / k);
  const FrameSequence seq =
      frame_sequence(a, ells, true, {e(6, 4) + 1e-6 * e(6, 5), e(6, 4) + 5e-7 * e(6, 5)}, e(6, 4));
  const LimitCase lc = classify_limit(seq, a, e(6, 4));
  ASSERT_EQ(lc.tag, CaseTag::Case3);
  TestFunction f;
  f.set("x2", Factor::gaussian(0.7));
  f.set("y2", Factor::gaussian(0.7));
  f.set("z", Factor::bandlimited(2.0));
  f.set("adot1", Factor::bandlimited(2.0));
  const ReducedFunction red = project_GU(f, seq.limit_frame);
  for (const auto& fk : seq.frames) {
    const std::vector<double> ext = defect_extents(fk, seq.limit_frame, lc, f);
    EXPECT_LT(nu_case3(fk, lc.m, red, auto_grid(ext, 32)).max_asymmetry(), 1e-10);
    const Grid fine = auto_grid(ext, 384);
    EXPECT_LE(operator_norm(nu_case3(fk, lc.m, red, fine)).value, limit_sup_norm(red, lc, fine) + 2e-2);
  }
  EXPECT_THROW(nu_case3(seq.frames[0], 2, red, Grid::uniform(2, 5.0, 8)), PreconditionError);
}

TEST(Defect, ConstantCaseOneSequenceIsZero) {
  const LieAlgebra a = load_preset("heis3");
  const FrameSequence seq = frame_sequence(a, std::vector<Vec>(3, 2.0 * e(3, 2)), true, {}, 2.0 * e(3, 2));
  const LimitCase lc = classify_limit(seq, a, 2.0 * e(3, 2));
  ASSERT_EQ(lc.tag, CaseTag::Case1);
  TestFunction f;
  f.set("z", Factor::gaussian(0.3));
  const DefectReport rep = defect(seq, {1, 2, 3}, lc, f);
  for (const auto& r : rep.rows) {
    EXPECT_LT(r.defect, 1e-12);
    EXPECT_LT(r.drivers.sum(), 1e-12);
  }
}

TEST(Defect, CaseTwoMatchesDenseOracle) {
  const Heis2 h = heis_case2({3.0});
  const double wx = 0.8, wy = 1.1, bz = 2.0;
  DefectOptions opt;
  opt.N = 160;
  opt.L = 12.0;
  opt.max_doublings = 0;
  const DefectReport rep = defect(h.seq, h.ks, h.lc, heis_f(wx, wy, bz), opt);

  // Independent dense assembly: rep kernel minus nu kernel, then SVD.
  const AdaptedFrame& fk = h.seq.frames[0];
  const double lam = fk.lambda, mu = fk.lambda * fk.c[0];
  const Axis ax{12.0, 160};
  CMat m(160, 160);
  for (int i = 0; i < 160; ++i) {
    for (int j = 0; j < 160; ++j) {
      const double s = ax.point(i), x = ax.point(j);
      const double rep_k = std::exp(-kPi * (s - x) * (s - x) / (wx * wx)) * wy *
                           std::exp(-kPi * std::pow(wy * 0.5 * mu * (s + x), 2)) * bandlimited_ft(lam, bz);
      m(i, j) = (rep_k - nu_oracle(s, x, wx, wy, mu, bandlimited_ft(0.0, bz))) * ax.h();
    }
  }
  const double oracle = Eigen::JacobiSVD<CMat>(m).singularValues()(0);
  EXPECT_NEAR(rep.rows[0].defect, oracle, 1e-6 * oracle);
}

TEST(Defect, CaseTwoDecreases) {
  const Heis2 h = heis_case2({2, 4, 8});
  DefectOptions opt;
  opt.N = 128;
  opt.max_doublings = 3;
  const DefectReport rep = defect(h.seq, h.ks, h.lc, heis_f(0.7, 0.7, 2.0), opt);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_GT(rep.rows[0].defect, rep.rows[1].defect);
  EXPECT_GT(rep.rows[1].defect, rep.rows[2].defect);
  EXPECT_TRUE(rep.fit_ok);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.drivers.rho, 0.0);
    EXPECT_EQ(r.drivers.cdot, 0.0);
    EXPECT_LE(r.nu_norm, r.nu_bound + 2e-2);
    EXPECT_TRUE(r.refine_converged);
  }
  EXPECT_GT(rep.rows[0].drivers.sum(), rep.rows[2].drivers.sum());
}

TEST(Defect, RequiresBandlimitedCentre) {
  const Heis2 h = heis_case2({2, 4});
  TestFunction f;
  f.set("z", Factor::gaussian(1.0));
  EXPECT_THROW(defect(h.seq, h.ks, h.lc, f), PreconditionError);
  EXPECT_THROW(defect(h.seq, {2.0}, h.lc, heis_f(1, 1, 1)), PreconditionError);
}

TEST(Drivers, FitUsesWorstRatio) {
  DefectReport rep;
  for (double k : {1.0, 2.0, 4.0}) {
    DefectRow r;
    r.k = k;
    r.defect = 1.0 / k;
    r.drivers.lambda = 2.0 / std::sqrt(k);
    rep.rows.push_back(r);
  }
  fit_drivers(rep);
  EXPECT_NEAR(rep.fit_C, 0.5, 1e-15);
  EXPECT_TRUE(rep.fit_ok);
  EXPECT_NEAR(rep.max_residual_ratio, 1.0, 1e-15);
  rep.rows[1].drivers.lambda = 0.0;
  fit_drivers(rep);
  EXPECT_FALSE(rep.fit_ok);
}

TEST(Report, CsvFormat) {
  DefectReport rep;
  DefectRow r;
  r.k = 2;
  r.defect = 1.0 / 3.0;
  r.method = "power";
  rep.rows.push_back(r);
  const std::string header = csv_header(false);
  const std::string line = report_csv(rep, "x", false);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(line.begin(), line.end(), ','));
  EXPECT_NE(line.find("0.33333333333333331"), std::string::npos);
  EXPECT_EQ(line.back(), '\n');
  EXPECT_EQ(csv_header(true).find("wall_time_s") != std::string::npos, true);
}
