#include "orbitfield/limits.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "orbitfield/errors.hpp"
#include "orbitfield/parallel.hpp"

namespace orbitfield {

namespace {

CMat window_factor(const Axis& ax, const Factor& fx, const Factor& fy, double mu, const Window& w,
                   int ny) {
  const double am = std::abs(mu);
  const double sq = std::sqrt(am);
  const double half = 6.0 * w.spread(mu);
  const double yr = fy.ft_radius(1e-12);
  const double cut = 1e-16 * fx.sup();
  return factor_matrix(ax, [&](double s, double r) {
    const double fxv = fx.value(s - r);
    if (std::abs(fxv) <= cut) return cplx(0.0);
    const double c0 = -0.5 * mu * (s + r);
    const double lo = std::max(c0 - half, -yr);
    const double hi = std::min(c0 + half, yr);
    if (!(lo < hi)) return cplx(0.0);
    const double dy = (hi - lo) / ny;
    double acc = 0.0;
    for (int q = 0; q < ny; ++q) {
      const double y = lo + (q + 0.5) * dy;
      acc += fy.ft(y) * w.value(sq * (r + y / mu)) * w.value(sq * (s + y / mu));
    }
    // eta_{y~} carries |mu|^{1/4} each; divided by |mu| from the measure.
    return cplx(fxv * acc * dy * sq / am, 0.0);
  });
}

CMat rep_factor(const Axis& ax, const Factor& fx, const Factor& fy, double mu) {
  return factor_matrix(ax, [&](double s, double x) {
    return cplx(fx.value(s - x) * fy.ft(-0.5 * mu * (s + x)), 0.0);
  });
}

bool is_zero_c(double c, const std::vector<double>& all) {
  double m = 0.0;
  for (double v : all) m = std::max(m, std::abs(v));
  return std::abs(c) <= 1e-8 * std::max(1.0, m);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

KernelOperator nu_case2(const AdaptedFrame& frame_k, const ReducedFunction& h, const Grid& grid,
                        const Window& w, int ny) {
  if (h.lambda != 0.0) {
    throw PreconditionError("nu_case2: limit has lambda != 0; the sequence is not in the second case");
  }
  if (frame_k.d != h.d || grid.dims() != h.d) throw PreconditionError("nu_case2: dimension mismatch");
  std::vector<CMat> factors;
  for (int j = 0; j < h.d; ++j) {
    const double mu = frame_k.lambda * frame_k.c[j];
    if (mu == 0.0) throw PreconditionError("nu_case2: frame_k has a degenerate plane");
    factors.push_back(window_factor(grid.axes[j], h.fx[j], h.fy[j], mu, w, ny));
  }
  return KernelOperator::separable(grid, h.constant, std::move(factors));
}

KernelOperator nu_case3(const AdaptedFrame& frame_k, int m, const ReducedFunction& h,
                        const Grid& grid, const Window& w, int ny) {
  if (frame_k.d != h.d || grid.dims() != h.d) throw PreconditionError("nu_case3: dimension mismatch");
  if (m < 0 || m > h.d) throw PreconditionError("nu_case3: m out of range");
  if (m > 0 && h.lambda == 0.0) throw PreconditionError("nu_case3: limit lambda is 0 but m > 0");
  for (int j = 0; j < h.d; ++j) {
    const bool zero = is_zero_c(h.c[j], h.c);
    if ((j < m) == zero) {
      throw PreconditionError("nu_case3: m = " + std::to_string(m) +
                              " is inconsistent with the limit frame at plane " + std::to_string(j + 1));
    }
  }
  std::vector<CMat> factors;
  for (int j = 0; j < h.d; ++j) {
    if (j < m) {
      factors.push_back(rep_factor(grid.axes[j], h.fx[j], h.fy[j], h.lambda * h.c[j]));
    } else {
      const double mu = frame_k.lambda * frame_k.c[j];
      if (mu == 0.0) throw PreconditionError("nu_case3: frame_k has a degenerate plane");
      factors.push_back(window_factor(grid.axes[j], h.fx[j], h.fy[j], mu, w, ny));
    }
  }
  return KernelOperator::separable(grid, h.constant, std::move(factors));
}

DefectDrivers defect_drivers(const AdaptedFrame& frame_k, const AdaptedFrame& limit,
                             const LimitCase& lc) {
  DefectDrivers dr;
  dr.rho = std::abs(frame_k.rho - limit.rho);
  dr.lambda = std::abs(frame_k.lambda - limit.lambda);
  dr.frame = frame_distance(frame_k, limit);
  const int d = frame_k.d;
  const int m = lc.tag == CaseTag::Case1 ? d : (lc.tag == CaseTag::Case2 ? 0 : lc.m);
  double vanish = 0.0, moving = 0.0;
  std::vector<double> mu(d);
  for (int j = 0; j < d; ++j) mu[j] = std::abs(frame_k.lambda * frame_k.c[j]);
  for (int j = 0; j < d; ++j) {
    if (j < m) {
      const double diff = limit.lambda * limit.c[j] - frame_k.lambda * frame_k.c[j];
      moving += diff * diff;
    } else {
      vanish += mu[j] * mu[j];
    }
  }
  vanish = std::sqrt(vanish);
  if (m < d) dr.c = std::sqrt(vanish) * (1.0 + std::sqrt(vanish));
  dr.cdot = std::sqrt(moving);
  if (m < d) {
    double prod = 1.0;
    for (int i = m; i < d; ++i) prod *= std::sqrt(mu[i]);
    double s = 0.0;
    for (int j = m; j < d; ++j) s += prod * mu[j];
    dr.window = std::sqrt(s);
  }
  return dr;
}

std::vector<double> defect_extents(const AdaptedFrame& frame_k, const AdaptedFrame& limit,
                                   const LimitCase& lc, const TestFunction& f, const Window& w) {
  const int d = frame_k.d;
  const int m = lc.tag == CaseTag::Case1 ? d : (lc.tag == CaseTag::Case2 ? 0 : lc.m);
  std::vector<double> ext(d);
  for (int j = 0; j < d; ++j) {
    const Factor fx = f.factor(role_x(j));
    const Factor fy = f.factor(role_y(j));
    double e = rep_extent_axis(fx, fy, frame_k.lambda * frame_k.c[j]);
    if (j < m) {
      e = std::max(e, rep_extent_axis(fx, fy, limit.lambda * limit.c[j]));
    } else {
      e = std::max(e, window_extent_axis(fy, frame_k.lambda * frame_k.c[j], w));
    }
    ext[j] = e;
  }
  return ext;
}

double limit_sup_norm(const ReducedFunction& h, const LimitCase& lc, const Grid& grid) {
  if (lc.tag == CaseTag::Case2) return fourier_sup(h);
  const int m = lc.tag == CaseTag::Case3 ? lc.m : h.d;
  Grid dotted;
  dotted.axes.assign(grid.axes.begin(), grid.axes.begin() + m);
  std::vector<CMat> factors;
  for (int j = 0; j < m; ++j) factors.push_back(rep_factor(dotted.axes[j], h.fx[j], h.fy[j], h.lambda * h.c[j]));
  const double dn = operator_norm(KernelOperator::separable(dotted, h.constant, std::move(factors))).value;
  ReducedFunction rest;
  rest.d = h.d - m;
  rest.constant = 1.0;
  rest.fx.assign(h.fx.begin() + m, h.fx.end());
  rest.fy.assign(h.fy.begin() + m, h.fy.end());
  return dn * fourier_sup(rest);
}

DefectReport defect(const FrameSequence& seq, const std::vector<double>& ks, const LimitCase& lc,
                    const TestFunction& f, const DefectOptions& opt) {
  if (ks.size() != seq.frames.size()) throw PreconditionError("defect: one k label per frame required");
  const AdaptedFrame& limit = seq.limit_frame;
  if (lc.tag != CaseTag::Case1) {
    if (limit.Z && f.factor("z").kind != FactorKind::Bandlimited) {
      throw PreconditionError("defect: the z factor must be bandlimited");
    }
    for (std::size_t i = 0; i < limit.A_dot.size(); ++i) {
      if (f.factor(role_adot(static_cast<int>(i))).kind != FactorKind::Bandlimited) {
        throw PreconditionError("defect: the " + role_adot(static_cast<int>(i)) + " factor must be bandlimited");
      }
    }
  }
  const ReducedFunction h = project_GU(f, limit);

  DefectReport rep;
  rep.limit_case = lc;
  rep.rows.resize(seq.frames.size());
  auto defect_row = [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    const AdaptedFrame& fk = seq.frames[i];
    const int d = fk.d;
    const Grid grid0 = opt.L ? Grid::uniform(d, *opt.L, opt.N)
                             : auto_grid(defect_extents(fk, limit, lc, f, opt.window), opt.N);
    auto limit_op = [&](const Grid& g) {
      const int ny = d > 0 ? opt.ny * g.axes[0].N / opt.N : opt.ny;
      switch (lc.tag) {
        case CaseTag::Case1:
          return rep_kernel(limit, f, g, !opt.L.has_value());
        case CaseTag::Case2:
          return nu_case2(fk, h, g, opt.window, ny);
        case CaseTag::Case3:
          return nu_case3(fk, lc.m, h, g, opt.window, ny);
      }
      throw InternalError("defect: unknown case");
    };
    auto build = [&](const Grid& g) { return rep_kernel(fk, f, g, !opt.L.has_value()) - limit_op(g); };
    const RefinedNorm rn = refined_operator_norm(build, grid0, 1e-3, opt.max_doublings, opt.max_points);

    DefectRow& row = rep.rows[i];
    row.k = ks[i];
    row.defect = rn.value;
    row.defect_coarse = rn.coarse;
    row.refine_change = rn.rel_change;
    row.refine_converged = rn.converged;
    row.method = rn.method;
    row.drivers = defect_drivers(fk, limit, lc);
    row.nu_norm = operator_norm(limit_op(rn.final_grid)).value;
    row.nu_asym = limit_op(grid0).max_asymmetry();
    if (lc.tag == CaseTag::Case1) {
      double l1 = std::abs(h.constant);
      for (int j = 0; j < d; ++j) l1 *= h.fx[j].l1_norm() * h.fy[j].l1_norm();
      row.nu_bound = l1;
    } else {
      row.nu_bound = limit_sup_norm(h, lc, grid0);
    }
    row.grid_N = opt.N;
    row.grid_N_final = rn.final_grid.dims() ? rn.final_grid.axes[0].N : opt.N;
    double L = 0.0;
    for (const auto& ax : grid0.axes) L = std::max(L, ax.L);
    row.grid_L = L;
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  parallel_for(seq.frames.size(), [&](std::size_t i) {
    with_context("k=" + num(ks[i]), [&] { defect_row(i); });
  });
  fit_drivers(rep);
  return rep;
}

void fit_drivers(DefectReport& rep) {
  double c = 0.0;
  bool finite = true;
  for (const auto& r : rep.rows) {
    const double s = r.drivers.sum();
    if (s > 0.0) {
      c = std::max(c, r.defect / s);
    } else if (r.defect > 1e-8) {
      finite = false;
    }
  }
  rep.fit_C = finite ? c : std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& r : rep.rows) {
    const double s = r.drivers.sum();
    if (s > 0.0 && c > 0.0) worst = std::max(worst, r.defect / (c * s));
  }
  rep.max_residual_ratio = finite ? worst : std::numeric_limits<double>::infinity();
  rep.fit_ok = finite && std::isfinite(c) && worst <= 1.0 + 1e-12;
}

std::string csv_header(bool with_time) {
  std::string h =
      "experiment,k,defect,defect_coarse,refine_change,drv_rho,drv_lambda,drv_c,drv_cdot,drv_frame,"
      "drv_window,driver_sum,nu_norm,nu_bound,nu_asym,grid_N,grid_N_final,grid_L,method";
  if (with_time) h += ",wall_time_s";
  return h + "\n";
}

std::string report_csv(const DefectReport& rep, const std::string& experiment, bool with_time) {
  std::string out;
  for (const auto& r : rep.rows) {
    const auto& d = r.drivers;
    out += experiment + "," + num(r.k) + "," + num(r.defect) + "," + num(r.defect_coarse) + "," +
           num(r.refine_change) + "," + num(d.rho) + "," + num(d.lambda) + "," + num(d.c) + "," +
           num(d.cdot) + "," + num(d.frame) + "," + num(d.window) + "," + num(d.sum()) + "," +
           num(r.nu_norm) + "," + num(r.nu_bound) + "," + num(r.nu_asym) + "," +
           std::to_string(r.grid_N) + "," + std::to_string(r.grid_N_final) + "," + num(r.grid_L) +
           "," + r.method;
    if (with_time) out += "," + num(r.wall_time_s);
    out += "\n";
  }
  return out;
}

}  // namespace orbitfield
