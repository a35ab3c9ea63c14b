#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "orbitfield/errors.hpp"
#include "orbitfield/kernel.hpp"
#include "orbitfield/testfunction.hpp"

using namespace orbitfield;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Factor, GaussianIsSelfDual) {
  const Factor g = Factor::gaussian(1.0);
  for (double x : {-1.3, 0.0, 0.4, 2.0}) {
    EXPECT_NEAR(g.value(x), std::exp(-kPi * x * x), 1e-15);
    EXPECT_NEAR(g.ft(x), std::exp(-kPi * x * x), 1e-15);
  }
}

TEST(Factor, TransformAtZeroIsIntegral) {
  // Trapezoid on a wide interval as the integral oracle.
  for (const Factor f : {Factor::gaussian(0.6), Factor::gaussian(2.5), Factor::bandlimited(1.5)}) {
    const double L = 400.0;
    const int n = 800000;
    const double h = 2.0 * L / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += (i == 0 || i == n ? 0.5 : 1.0) * f.value(-L + i * h);
    EXPECT_NEAR(f.ft(0.0), s * h, 2e-5);
  }
}

TEST(Factor, BandlimitedTransformOracle) {
  // F(xi) = int f(x) cos(2 pi xi x) dx for even f, by quadrature.
  const Factor f = Factor::bandlimited(1.0);
  for (double xi : {0.0, 0.3, 0.75}) {
    const double L = 600.0;
    const int n = 1200000;
    const double h = 2.0 * L / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = -L + i * h;
      s += (i == 0 || i == n ? 0.5 : 1.0) * f.value(x) * std::cos(2.0 * kPi * xi * x);
    }
    EXPECT_NEAR(f.ft(xi), s * h, 2e-5) << xi;
  }
}

TEST(Factor, BandlimitedSupport) {
  const Factor f = Factor::bandlimited(2.0);
  EXPECT_EQ(f.ft(2.0001), 0.0);
  EXPECT_EQ(f.ft(-7.0), 0.0);
  EXPECT_GT(f.ft(1.9), 0.0);
  EXPECT_NEAR(f.value(0.0), 2.0, 1e-15);
  EXPECT_NEAR(f.value(1.0 / 4.0), 1.0, 1e-12);  // u = 1: B/2
}

TEST(Factor, RadiusBoundsTail) {
  for (const Factor f : {Factor::gaussian(0.7), Factor::bandlimited(3.0)}) {
    const double r = f.radius(1e-6);
    for (double x = r; x < 4 * r; x += r / 37) EXPECT_LE(std::abs(f.value(x)), 1e-6 * f.sup() * 1.0001);
  }
  const Factor g = Factor::gaussian(2.0);
  const double rf = g.ft_radius(1e-6);
  EXPECT_NEAR(g.ft(rf) / g.ft_sup(), 1e-6, 1e-9);
}

TEST(TestFunction, RolesAndDefaults) {
  TestFunction f;
  f.set("x1", Factor::gaussian(2.0));
  f.set("z", Factor::bandlimited(1.0));
  EXPECT_TRUE(f.has("x1"));
  EXPECT_FALSE(f.has("y1"));
  EXPECT_EQ(f.factor("y1").kind, FactorKind::Gaussian);
  EXPECT_EQ(f.factor("y1").param, 1.0);
  EXPECT_THROW(f.set("w3", Factor::gaussian(1.0)), MalformedInput);
  EXPECT_THROW(f.set("x0", Factor::gaussian(1.0)), MalformedInput);
  EXPECT_THROW(f.set("y2", Factor::gaussian(-1.0)), MalformedInput);
  EXPECT_TRUE(TestFunction::valid_role("addot12"));
  EXPECT_EQ(role_x(0), "x1");
  EXPECT_EQ(role_adot(2), "adot3");
}

TEST(TestFunction, PartialTransform) {
  TestFunction f;
  f.set("x1", Factor::gaussian(1.0));
  f.set("y1", Factor::gaussian(2.0));
  const cplx v = partial_ft(f, {"y1"}, {{"x1", 0.5}, {"y1", 0.25}});
  EXPECT_NEAR(v.real(), std::exp(-kPi * 0.25) * 2.0 * std::exp(-kPi * 0.25), 1e-15);
}

TEST(Grid, PointsAndWeights) {
  const Grid g = Grid::uniform(2, 3.0, 6);
  EXPECT_EQ(g.size(), 36);
  EXPECT_DOUBLE_EQ(g.weight(), 1.0);
  EXPECT_DOUBLE_EQ(g.axes[0].point(0), -2.5);
  EXPECT_EQ(g.unflatten(7), (std::vector<int>{1, 1}));
  const Grid r = g.refined();
  EXPECT_EQ(r.axes[1].N, 12);
  EXPECT_DOUBLE_EQ(r.axes[1].L, 3.0);
  const Axis lat{2.0, 8, false};
  EXPECT_DOUBLE_EQ(lat.point(4), 0.0);
  EXPECT_DOUBLE_EQ(lat.point(0), -2.0);
}

TEST(OperatorNorm, RankOneProjection) {
  const Grid g = Grid::uniform(1, 6.0, 256);
  // eta = 2^{1/4} e^{-pi s^2}, unit L2 norm.
  const CMat f = factor_matrix(g.axes[0], [](double s, double x) {
    return cplx(std::sqrt(2.0) * std::exp(-kPi * (s * s + x * x)), 0.0);
  });
  const NormResult r = operator_norm(KernelOperator::separable(g, 1.0, {f}));
  EXPECT_NEAR(r.value, 1.0, 1e-3);
}

TEST(OperatorNorm, RankOneNonUnit) {
  const Grid g = Grid::uniform(1, 6.0, 256);
  const CMat f = factor_matrix(g.axes[0], [](double s, double x) {
    return cplx(std::exp(-kPi * (s * s + x * x)), 0.0);
  });
  EXPECT_NEAR(operator_norm(KernelOperator::separable(g, 1.0, {f})).value, std::pow(2.0, -0.5), 1e-3);
}

TEST(OperatorNorm, ZeroKernel) {
  const NormResult r = operator_norm(KernelOperator::zero(Grid::uniform(2, 1.0, 8)));
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.method, "zero");
}

TEST(OperatorNorm, MatchesSvdOnRandomTerms) {
  const Grid g{{Axis{1.0, 6}, Axis{2.0, 5}}};
  std::mt19937 rng(5);
  std::normal_distribution<double> n;
  auto rnd = [&](int k) {
    CMat m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m(i, j) = cplx(n(rng), n(rng));
    return m;
  };
  KernelOperator op = KernelOperator::separable(g, cplx(0.5, 0.2), {rnd(6), rnd(5)});
  op.add_term({cplx(-1.0, 0.0), {rnd(6), rnd(5)}});
  op.add_dense(rnd(30));
  const double svd = Eigen::JacobiSVD<CMat>(op.matrix()).singularValues()(0);
  EXPECT_NEAR(operator_norm(op, 1e-10).value, svd, 1e-6 * svd);
  // apply agrees with the materialized matrix
  CVec v = CVec::Random(30);
  EXPECT_LT((op.apply(v) - op.matrix() * v).norm(), 1e-10);
  EXPECT_LT((op.apply_adjoint(v) - op.matrix().adjoint() * v).norm(), 1e-10);
}

TEST(OperatorNorm, NonFiniteRejected) {
  const Grid g = Grid::uniform(1, 1.0, 4);
  CMat f = CMat::Identity(4, 4);
  f(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(operator_norm(KernelOperator::separable(g, 1.0, {f})), NumericalError);
}

TEST(KernelOperator, Asymmetry) {
  const Grid g = Grid::uniform(1, 2.0, 16);
  const CMat herm = factor_matrix(g.axes[0], [](double s, double x) {
    return std::exp(-(s - x) * (s - x)) * std::polar(1.0, s - x);
  });
  EXPECT_LT(KernelOperator::separable(g, 1.0, {herm}).max_asymmetry(), 1e-14);
  const CMat skew = factor_matrix(g.axes[0], [](double s, double x) { return cplx(s, 0.0) * x * x; });
  EXPECT_GT(KernelOperator::separable(g, 1.0, {skew}).max_asymmetry(), 0.1);
}

TEST(RefinedNorm, ConvergesForSmoothKernel) {
  auto build = [](const Grid& g) {
    return KernelOperator::separable(g, 1.0, {factor_matrix(g.axes[0], [](double s, double x) {
      return cplx(std::exp(-kPi * (s - x) * (s - x)) * std::exp(-kPi * (s + x) * (s + x) / 4), 0.0);
    })});
  };
  const RefinedNorm r = refined_operator_norm(build, Grid::uniform(1, 6.0, 32));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.rel_change, 1e-3);
  EXPECT_GE(r.levels.size(), 2u);
  EXPECT_EQ(r.final_grid.axes[0].N, 32 << (r.levels.size() - 1));
}

TEST(RefinedNorm, BudgetStopsRefinement) {
  auto build = [](const Grid& g) { return KernelOperator::dense(g, CMat::Identity(g.size(), g.size())); };
  const RefinedNorm r = refined_operator_norm(build, Grid::uniform(1, 1.0, 8), 1e-3, 3, 10);
  EXPECT_EQ(r.levels.size(), 1u);
  EXPECT_FALSE(r.converged);
}
