#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "orbitfield/convolution.hpp"
#include "orbitfield/errors.hpp"
#include "orbitfield/presets.hpp"
#include "orbitfield/repfield.hpp"

using namespace orbitfield;

namespace {

constexpr double kPi = std::numbers::pi;

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST(GroupConvolution, AbelianGaussians) {
  const LieAlgebra a = load_preset("abelian2");
  const Grid g = Grid::uniform(2, 4.0, 64, false);
  const auto f = sample_function(g, [](const Vec& x) { return std::exp(-kPi * x.squaredNorm()); });
  const auto fp = sample_function(g, [](const Vec& x) { return std::exp(-2.0 * kPi * x.squaredNorm()); });
  const SampledFunction c = group_convolution(a, f, fp);
  double worst = 0.0;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    const double r2 = std::pow(g.axes[0].point(idx[0]), 2) + std::pow(g.axes[1].point(idx[1]), 2);
    // (a+b)^{-1} exp(-pi ab/(a+b) r^2) with a = 1, b = 2
    worst = std::max(worst, std::abs(c.values[i] - std::exp(-kPi * 2.0 / 3.0 * r2) / 3.0));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(GroupConvolution, HeisenbergMatchesDirectQuadrature) {
  const LieAlgebra a = load_preset("heis3");
  const Grid g = Grid::uniform(3, 4.0, 48, false);
  auto f = [](double x, double y, double z) { return std::exp(-kPi * (x * x + y * y + z * z)); };
  auto fp = [](double x, double y, double z) {
    return std::exp(-kPi * (0.5 * x * x + (y - 0.3) * (y - 0.3) + 2.0 * z * z));
  };
  const auto c = group_convolution(a, sample_function(g, [&](const Vec& v) { return f(v(0), v(1), v(2)); }),
                                   sample_function(g, [&](const Vec& v) { return fp(v(0), v(1), v(2)); }));
  for (const auto& idx : {std::vector<int>{24, 24, 24}, {28, 20, 26}, {18, 30, 22}, {30, 30, 30}}) {
    const double gx = g.axes[0].point(idx[0]), gy = g.axes[1].point(idx[1]), gz = g.axes[2].point(idx[2]);
    // u^{-1} g = g - u - [u,g]/2 with [u,g]_z = u_x g_y - u_y g_x.
    const double h = 0.05;
    double s = 0.0;
    for (double ux = -5; ux <= 5; ux += h)
      for (double uy = -5; uy <= 5; uy += h)
        for (double uz = -5; uz <= 5; uz += h) {
          s += f(ux, uy, uz) * fp(gx - ux, gy - uy, gz - uz - 0.5 * (ux * gy - uy * gx));
        }
    s *= h * h * h;
    const std::int64_t flat = (static_cast<std::int64_t>(idx[0]) * 48 + idx[1]) * 48 + idx[2];
    EXPECT_NEAR(c.values[flat], s, 5e-3 * std::max(s, 0.05)) << gx << " " << gy << " " << gz;
  }
}

TEST(GroupConvolution, BumpIsApproximateIdentity) {
  const LieAlgebra a = load_preset("heis3");
  const Grid g = Grid::uniform(3, 3.0, 48, false);
  const double w = 0.2;
  const auto bump = sample_function(g, [&](const Vec& v) {
    return std::exp(-kPi * v.squaredNorm() / (w * w)) / (w * w * w);
  });
  const auto fp = sample_function(g, [](const Vec& v) { return std::exp(-kPi * v.squaredNorm() / 2.0); });
  const auto c = group_convolution(a, bump, fp);
  std::vector<double> diff(c.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = c.values[i] - fp.values[i];
  EXPECT_LT(l2(diff) / l2(fp.values), 0.05);
}

TEST(GroupConvolution, Refusals) {
  const LieAlgebra a = load_preset("heis3");
  const Grid lat = Grid::uniform(3, 2.0, 16, false);
  const auto f = sample_function(lat, [](const Vec&) { return 1.0; });
  EXPECT_THROW(group_convolution(a, f, f, 1000), PreconditionError);
  const auto other = sample_function(Grid::uniform(3, 2.0, 8, false), [](const Vec&) { return 1.0; });
  EXPECT_THROW(group_convolution(a, f, other), PreconditionError);
  const auto mid = sample_function(Grid::uniform(3, 2.0, 8), [](const Vec&) { return 1.0; });
  EXPECT_THROW(group_convolution(a, mid, mid), PreconditionError);
}

TEST(SampledRepKernel, AgreesWithClosedFormKernel) {
  const LieAlgebra a = load_preset("heis3");
  const AdaptedFrame fr = adapted_frame(a, Vec::Unit(3, 2));
  const Grid g = Grid::uniform(3, 3.0, 48, false);
  TestFunction tf;
  tf.set("x1", Factor::gaussian(1.0));
  tf.set("y1", Factor::gaussian(0.8));
  tf.set("z", Factor::gaussian(1.2));
  const double sx = fr.X[0](0), sy = fr.Y[0](1);
  const auto f = sample_function(g, [&](const Vec& v) {
    return tf.factor("x1").value(sx * v(0)) * tf.factor("y1").value(sy * v(1)) * tf.factor("z").value(v(2));
  });
  const CMat sampled = sampled_rep_kernel(a, fr, f).samples();
  const Grid sgrid{{g.axes[0]}};
  const CMat closed = rep_kernel(fr, tf, sgrid, false).samples();
  EXPECT_LT((sampled - closed).cwiseAbs().maxCoeff(), 1e-6 * closed.cwiseAbs().maxCoeff());
}
