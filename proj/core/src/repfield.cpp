#include "orbitfield/repfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbitfield/errors.hpp"

namespace orbitfield {

namespace {
constexpr double kPi = std::numbers::pi;

double collapse_constant(const TestFunction& f, const AdaptedFrame& fr) {
  double c = 1.0;
  if (fr.T) c *= f.factor("t").ft(fr.rho);
  if (fr.Z) c *= f.factor("z").ft(fr.lambda);
  for (std::size_t i = 0; i < fr.A_dot.size(); ++i) c *= f.factor(role_adot(static_cast<int>(i))).ft(0.0);
  for (std::size_t i = 0; i < fr.A_ddot.size(); ++i) c *= f.factor(role_addot(static_cast<int>(i))).ft(0.0);
  return c;
}

int next_pow2(double x) {
  int n = 2;
  while (n < x) n *= 2;
  return n;
}

// Periodic multilinear interpolation of samples at arbitrary coordinates.
cplx interpolate(const CVec& xi, const Grid& grid, const std::vector<double>& coord) {
  const int d = grid.dims();
  std::vector<int> i0(d);
  std::vector<double> th(d);
  for (int a = 0; a < d; ++a) {
    const Axis& ax = grid.axes[a];
    const double u = (coord[a] - ax.point(0)) / ax.h();
    const double fl = std::floor(u);
    th[a] = u - fl;
    long long i = static_cast<long long>(fl) % ax.N;
    if (i < 0) i += ax.N;
    i0[a] = static_cast<int>(i);
  }
  cplx acc = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    std::int64_t flat = 0;
    for (int a = 0; a < d; ++a) {
      const int bit = (corner >> a) & 1;
      w *= bit ? th[a] : 1.0 - th[a];
      const int idx = (i0[a] + bit) % grid.axes[a].N;
      flat = flat * grid.axes[a].N + idx;
    }
    if (w != 0.0) acc += w * xi(flat);
  }
  return acc;
}

}  // namespace

double Window::value(double t) const {
  return std::pow(2.0 * a, 0.25) * std::exp(-kPi * a * t * t);
}

double Window::radius(double eps) const { return std::sqrt(std::log(1.0 / eps) / (kPi * a)); }

double Window::spread(double mu) const { return std::sqrt(std::abs(mu) / (4.0 * kPi * a)); }

ReducedFunction project_GU(const TestFunction& f, const AdaptedFrame& limit) {
  ReducedFunction h;
  h.d = limit.d;
  for (int j = 0; j < limit.d; ++j) {
    h.fx.push_back(f.factor(role_x(j)));
    h.fy.push_back(f.factor(role_y(j)));
  }
  h.constant = collapse_constant(f, limit);
  h.lambda = limit.lambda;
  h.rho = limit.rho;
  h.c = limit.c;
  return h;
}

double rep_extent_axis(const Factor& fx, const Factor& fy, double mu, double eps) {
  return 0.5 * (fx.radius(eps) + 2.0 * fy.ft_radius(eps) / std::abs(mu));
}

double window_extent_axis(const Factor& fy, double mu, const Window& w, double eps) {
  const double m = std::abs(mu);
  return fy.ft_radius(eps) / m + w.radius(eps) / std::sqrt(m);
}

std::vector<double> rep_extent(const AdaptedFrame& frame, const TestFunction& f, double eps) {
  std::vector<double> out;
  for (int j = 0; j < frame.d; ++j) {
    out.push_back(rep_extent_axis(f.factor(role_x(j)), f.factor(role_y(j)),
                                  frame.lambda * frame.c[j], eps));
  }
  return out;
}

Grid auto_grid(const std::vector<double>& extents, int n_points, bool midpoint) {
  Grid g;
  for (double e : extents) g.axes.push_back(Axis{e, n_points, midpoint});
  return g;
}

KernelOperator rep_kernel(const AdaptedFrame& frame, const TestFunction& f, const Grid& grid,
                          bool check_tail) {
  if (frame.d > 0 && frame.lambda == 0.0) {
    throw PreconditionError("rep_kernel: frame has lambda = 0 with d > 0");
  }
  if (grid.dims() != frame.d) throw PreconditionError("rep_kernel: grid dimension != d");
  if (check_tail) {
    const auto ext = rep_extent(frame, f);
    for (int j = 0; j < frame.d; ++j) {
      if (grid.axes[j].L < ext[j] * (1.0 - 1e-12)) {
        throw PreconditionError("rep_kernel: tail mass exceeds 1e-6 on axis " + std::to_string(j + 1) +
                                "; suggested L = " + std::to_string(ext[j]));
      }
    }
  }
  std::vector<CMat> factors;
  for (int j = 0; j < frame.d; ++j) {
    const Factor fx = f.factor(role_x(j));
    const Factor fy = f.factor(role_y(j));
    const double mu = frame.lambda * frame.c[j];
    factors.push_back(factor_matrix(grid.axes[j], [&](double s, double x) {
      return cplx(fx.value(s - x) * fy.ft(-0.5 * mu * (s + x)), 0.0);
    }));
  }
  return KernelOperator::separable(grid, collapse_constant(f, frame), std::move(factors));
}

CVec rep_point_action(const LieAlgebra& a, const AdaptedFrame& frame, const Vec& g, const CVec& xi,
                      const Grid& grid) {
  const int d = frame.d;
  if (grid.dims() != d || xi.size() != grid.size()) {
    throw PreconditionError("rep_point_action: samples do not match the transversal grid");
  }
  const Vec& ell = frame.ell;
  Vec s_vec = Vec::Zero(a.dim());
  std::vector<double> x(d);
  for (int j = 0; j < d; ++j) {
    x[j] = frame.X[j].dot(g);
    s_vec += x[j] * frame.X[j];
  }
  const Vec y = g - s_vec - 0.5 * a.bracket(s_vec, g);
  const Vec resid = bch_product(a, s_vec, y) - g;
  if (resid.norm() > 1e-9 * (1.0 + g.norm())) {
    throw NumericalError("rep_point_action: S.Y decomposition failed");
  }
  const double base = -ell.dot(y);
  // <l, [R,S]> and <l, [R,Y]> are linear in R: precompute per X_j.
  std::vector<double> rs(d), ry(d);
  for (int j = 0; j < d; ++j) {
    rs[j] = ell.dot(a.bracket(frame.X[j], s_vec));
    ry[j] = ell.dot(a.bracket(frame.X[j], y));
  }
  const double sy = ell.dot(a.bracket(s_vec, y));

  CVec out(xi.size());
  std::vector<double> coord(d);
  for (std::int64_t i = 0; i < xi.size(); ++i) {
    const auto idx = grid.unflatten(i);
    double phase = base - sy;
    for (int j = 0; j < d; ++j) {
      const double s = grid.axes[j].point(idx[j]);
      phase += 0.5 * s * rs[j] + s * ry[j];
      coord[j] = s - x[j];
    }
    out(i) = std::polar(1.0, 2.0 * kPi * phase) * interpolate(xi, grid, coord);
  }
  return out;
}

double fourier_sup(const ReducedFunction& h, int points) {
  double sup = std::abs(h.constant);
  for (int j = 0; j < h.d; ++j) {
    for (const Factor* fac : {&h.fx[j], &h.fy[j]}) {
      const double r = fac->ft_radius();
      double m = 0.0;
      for (int i = 0; i < points; ++i) {
        const double xi = -r + 2.0 * r * i / (points - 1);
        m = std::max(m, std::abs(fac->ft(xi)));
      }
      sup *= m;
    }
  }
  return sup;
}

CVec window_samples(const std::vector<double>& mu, const std::vector<double>& alpha,
                    const std::vector<double>& beta, const Grid& grid, const Window& w) {
  const int d = grid.dims();
  CVec out(grid.size());
  for (std::int64_t i = 0; i < out.size(); ++i) {
    const auto idx = grid.unflatten(i);
    cplx v = 1.0;
    for (int j = 0; j < d; ++j) {
      const double s = grid.axes[j].point(idx[j]);
      const double m = std::abs(mu[j]);
      v *= std::pow(m, 0.25) * w.value(std::sqrt(m) * (s + beta[j] / mu[j])) *
           std::polar(1.0, 2.0 * kPi * alpha[j] * s);
    }
    out(i) = v;
  }
  return out;
}

double coefficient_defect(const LieAlgebra& a, const AdaptedFrame& frame_k,
                          const AdaptedFrame& limit, const std::vector<double>& alpha,
                          const std::vector<double>& beta, const CoefficientOptions& opt) {
  const int d = frame_k.d;
  const int n = a.dim();
  if (static_cast<int>(alpha.size()) != d || static_cast<int>(beta.size()) != d || limit.d != d) {
    throw PreconditionError("coefficient_defect: alpha/beta/limit do not match d");
  }
  std::vector<double> mu(d);
  for (int j = 0; j < d; ++j) mu[j] = frame_k.lambda * frame_k.c[j];

  const double shift = opt.ball ? opt.box : opt.box * std::sqrt(static_cast<double>(n));
  const std::int64_t budget = d <= 1 ? 4096 : (1 << 16);
  const int per_axis_cap = d == 0 ? 1 : static_cast<int>(std::pow(double(budget), 1.0 / d));
  Grid grid;
  for (int j = 0; j < d; ++j) {
    const double m = std::abs(mu[j]);
    const double L = std::abs(beta[j] / mu[j]) + opt.window.radius() / std::sqrt(m) + shift;
    double h = 1.0 / std::sqrt(m);
    if (alpha[j] != 0.0) h = std::min(h, 1.0 / std::abs(alpha[j]));
    h = std::min(h, 1.0 / (m * shift + 1e-300));
    h *= 0.05;
    const int N = std::min(next_pow2(2.0 * L / h), std::max(2, per_axis_cap));
    grid.axes.push_back(Axis{L, N, true});
  }
  const CVec eta = window_samples(mu, alpha, beta, grid, opt.window);
  const double wgt = grid.weight();

  const int p = std::max(1, opt.box_points);
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= p;
  double worst = 0.0;
  for (std::int64_t t = 0; t < total; ++t) {
    Vec g(n);
    std::int64_t r = t;
    for (int i = n - 1; i >= 0; --i) {
      const int k = static_cast<int>(r % p);
      r /= p;
      g(i) = p == 1 ? 0.0 : -opt.box + 2.0 * opt.box * k / (p - 1);
    }
    if (opt.ball && g.norm() > opt.box * (1.0 + 1e-12)) continue;
    const CVec moved = rep_point_action(a, frame_k, g, eta, grid);
    const cplx coef = eta.dot(moved) * wgt;  // sum conj(eta) * moved
    double phase = limit.ell.dot(g);
    for (int j = 0; j < d; ++j) phase += alpha[j] * limit.X[j].dot(g) + beta[j] * limit.Y[j].dot(g);
    const cplx target = std::polar(1.0, -2.0 * kPi * phase);
    worst = std::max(worst, std::abs(coef - target));
  }
  return worst;
}

std::vector<double> fourier_section(const LieAlgebra& a, const TestFunction& f, const Vec& ell,
                                    const Subspace& annihilator, const std::vector<Vec>& qs,
                                    int n_points) {
  std::vector<double> out;
  for (const Vec& q : qs) {
    if ((q - annihilator.project(q)).norm() > 1e-8 * (1.0 + q.norm())) {
      throw PreconditionError("fourier_section: q is outside the annihilator subspace");
    }
    const AdaptedFrame fr = adapted_frame(a, ell + q);
    const Grid grid = auto_grid(rep_extent(fr, f), n_points);
    out.push_back(operator_norm(rep_kernel(fr, f, grid)).value);
  }
  return out;
}

}  // namespace orbitfield
