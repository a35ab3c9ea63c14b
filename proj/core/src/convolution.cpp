#include "orbitfield/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbitfield/errors.hpp"
#include "orbitfield/parallel.hpp"

namespace orbitfield {

namespace {

constexpr double kPi = std::numbers::pi;

Vec coords_of(const Grid& g, const std::vector<int>& idx) {
  Vec v(g.dims());
  for (int a = 0; a < g.dims(); ++a) v(a) = g.axes[a].point(idx[a]);
  return v;
}

void require_lattice(const Grid& g, const char* what) {
  for (const auto& ax : g.axes) {
    if (ax.midpoint) throw PreconditionError(std::string(what) + ": lattice grid required");
  }
}

struct Entry {
  int b;  // flattened b-index
  double v;
};

}  // namespace

SampledFunction sample_function(const Grid& grid, const std::function<double(const Vec&)>& f) {
  SampledFunction out{grid, std::vector<double>(static_cast<std::size_t>(grid.size()))};
  for (std::int64_t i = 0; i < grid.size(); ++i) out.values[i] = f(coords_of(grid, grid.unflatten(i)));
  return out;
}

SampledFunction group_convolution(const LieAlgebra& a, const SampledFunction& f,
                                  const SampledFunction& fp, std::int64_t max_points) {
  const int n = a.dim();
  if (!(f.grid == fp.grid) || f.grid.dims() != n) {
    throw PreconditionError("group_convolution: both functions need the same n-dimensional grid");
  }
  require_lattice(f.grid, "group_convolution");
  if (f.grid.size() > max_points) {
    throw PreconditionError("group_convolution: grid has " + std::to_string(f.grid.size()) +
                            " points, budget is " + std::to_string(max_points));
  }
  const int ds = a.derived_start();
  const int na = ds, nb = n - ds;
  Grid ga, gb;
  ga.axes.assign(f.grid.axes.begin(), f.grid.axes.begin() + na);
  gb.axes.assign(f.grid.axes.begin() + na, f.grid.axes.end());
  const std::int64_t Na = ga.size(), Nb = gb.size();

  // Convolution index space: per b-axis 2N-1 entries.
  std::vector<int> cdims(nb);
  std::int64_t Nc = 1;
  for (int j = 0; j < nb; ++j) {
    cdims[j] = 2 * gb.axes[j].N - 1;
    Nc *= cdims[j];
  }
  std::vector<std::vector<int>> bidx(Nb);
  for (std::int64_t b = 0; b < Nb; ++b) bidx[b] = gb.unflatten(b);
  auto cflat = [&](const std::vector<int>& w) {
    std::int64_t o = 0;
    for (int j = 0; j < nb; ++j) o = o * cdims[j] + w[j];
    return o;
  };
  std::vector<std::int64_t> pair_offset(Nb);  // u_b + v_b = w: flat offset of u_b in C-space
  for (std::int64_t b = 0; b < Nb; ++b) pair_offset[b] = cflat(bidx[b]);

  double fmax = 0.0, fpmax = 0.0;
  for (double v : f.values) fmax = std::max(fmax, std::abs(v));
  for (double v : fp.values) fpmax = std::max(fpmax, std::abs(v));
  auto rows = [&](const SampledFunction& s, double m) {
    std::vector<std::vector<Entry>> r(Na);
    for (std::int64_t ia = 0; ia < Na; ++ia) {
      for (std::int64_t ib = 0; ib < Nb; ++ib) {
        const double v = s.values[ia * Nb + ib];
        if (std::abs(v) > 1e-16 * m) r[ia].push_back({static_cast<int>(ib), v});
      }
    }
    return r;
  };
  const auto fr = rows(f, fmax);
  const auto fpr = rows(fp, fpmax);

  std::vector<std::vector<int>> aidx(Na);
  for (std::int64_t i = 0; i < Na; ++i) aidx[i] = ga.unflatten(i);
  auto aflat = [&](const std::vector<int>& w) -> std::int64_t {
    std::int64_t o = 0;
    for (int j = 0; j < na; ++j) {
      if (w[j] < 0 || w[j] >= ga.axes[j].N) return -1;
      o = o * ga.axes[j].N + w[j];
    }
    return o;
  };

  const double weight = f.grid.weight();
  SampledFunction out{f.grid, std::vector<double>(static_cast<std::size_t>(f.grid.size()), 0.0)};

  parallel_for(static_cast<std::size_t>(Na), [&](std::size_t iga) {
    std::vector<double> conv(static_cast<std::size_t>(Nc));
    std::vector<int> iv(na), base(nb), m0(nb);
    std::vector<double> th(nb);
    Vec ga_vec = Vec::Zero(n), ua_vec = Vec::Zero(n);
    for (int j = 0; j < na; ++j) ga_vec(j) = ga.axes[j].point(aidx[iga][j]);
    double* orow = out.values.data() + static_cast<std::int64_t>(iga) * Nb;
    for (std::int64_t iua = 0; iua < Na; ++iua) {
      if (fr[iua].empty()) continue;
      for (int j = 0; j < na; ++j) iv[j] = aidx[iga][j] - aidx[iua][j] + ga.axes[j].N / 2;
      const std::int64_t iva = aflat(iv);
      if (iva < 0 || fpr[iva].empty()) continue;
      for (int j = 0; j < na; ++j) ua_vec(j) = ga.axes[j].point(aidx[iua][j]);
      const Vec sigma = 0.5 * a.bracket(ua_vec, ga_vec);

      std::fill(conv.begin(), conv.end(), 0.0);
      for (const Entry& e : fr[iua]) {
        const std::int64_t off = pair_offset[e.b];
        for (const Entry& q : fpr[iva]) conv[off + pair_offset[q.b]] += e.v * q.v;
      }
      for (int j = 0; j < nb; ++j) {
        const double u = sigma(na + j) / gb.axes[j].h();
        const double fl = std::floor(u);
        m0[j] = static_cast<int>(fl);
        th[j] = u - fl;
      }
      for (std::int64_t igb = 0; igb < Nb; ++igb) {
        double acc = 0.0;
        for (int corner = 0; corner < (1 << nb); ++corner) {
          double w = 1.0;
          std::int64_t o = 0;
          bool ok = true;
          for (int j = 0; j < nb; ++j) {
            const int bit = (corner >> j) & 1;
            w *= bit ? th[j] : 1.0 - th[j];
            const int c = bidx[igb][j] + gb.axes[j].N / 2 - m0[j] - bit;
            if (c < 0 || c >= cdims[j]) {
              ok = false;
              break;
            }
            o = o * cdims[j] + c;
          }
          if (ok && w != 0.0) acc += w * conv[o];
        }
        orow[igb] += acc * weight;
      }
    }
  });
  return out;
}

KernelOperator sampled_rep_kernel(const LieAlgebra& a, const AdaptedFrame& frame,
                                  const SampledFunction& f) {
  const int n = a.dim();
  const int d = frame.d;
  if (f.grid.dims() != n) throw PreconditionError("sampled_rep_kernel: grid dimension != n");
  require_lattice(f.grid, "sampled_rep_kernel");
  std::vector<int> axis_of(d);
  std::vector<int> sign(d);
  Grid sgrid;
  for (int j = 0; j < d; ++j) {
    Eigen::Index arg;
    frame.X[j].cwiseAbs().maxCoeff(&arg);
    if (std::abs(std::abs(frame.X[j](arg)) - 1.0) > 1e-12) {
      throw PreconditionError("sampled_rep_kernel: transversal is not coordinate aligned");
    }
    axis_of[j] = static_cast<int>(arg);
    sign[j] = frame.X[j](arg) > 0 ? 1 : -1;
    sgrid.axes.push_back(f.grid.axes[arg]);
  }
  const std::int64_t Ns = sgrid.size();
  const double scale = f.grid.weight() / sgrid.weight();

  struct GData {
    double value, c0;
    std::vector<double> lin;
    std::vector<int> shift;  // lattice shift of x_j in s-grid units
  };
  std::vector<GData> gs;
  double fmax = 0.0;
  for (double v : f.values) fmax = std::max(fmax, std::abs(v));
  const Vec& ell = frame.ell;
  for (std::int64_t i = 0; i < f.grid.size(); ++i) {
    const double v = f.values[i];
    if (std::abs(v) <= 1e-16 * fmax) continue;
    const auto idx = f.grid.unflatten(i);
    const Vec g = coords_of(f.grid, idx);
    Vec s_vec = Vec::Zero(n);
    GData gd{v, 0.0, std::vector<double>(d), std::vector<int>(d)};
    for (int j = 0; j < d; ++j) {
      s_vec += frame.X[j].dot(g) * frame.X[j];
      gd.shift[j] = sign[j] * (idx[axis_of[j]] - f.grid.axes[axis_of[j]].N / 2);
    }
    const Vec y = g - s_vec - 0.5 * a.bracket(s_vec, g);
    gd.c0 = -ell.dot(y) - ell.dot(a.bracket(s_vec, y));
    for (int j = 0; j < d; ++j) {
      gd.lin[j] = 0.5 * ell.dot(a.bracket(frame.X[j], s_vec)) + ell.dot(a.bracket(frame.X[j], y));
    }
    gs.push_back(std::move(gd));
  }

  CMat k = CMat::Zero(Ns, Ns);
  parallel_for(static_cast<std::size_t>(Ns), [&](std::size_t is) {
    const auto sidx = sgrid.unflatten(static_cast<std::int64_t>(is));
    std::vector<double> s(d);
    for (int j = 0; j < d; ++j) s[j] = sgrid.axes[j].point(sidx[j]);
    for (const GData& gd : gs) {
      std::int64_t ir = 0;
      bool ok = true;
      double phase = gd.c0;
      for (int j = 0; j < d; ++j) {
        const int r = sidx[j] - gd.shift[j];
        if (r < 0 || r >= sgrid.axes[j].N) {
          ok = false;
          break;
        }
        ir = ir * sgrid.axes[j].N + r;
        phase += s[j] * gd.lin[j];
      }
      if (!ok) continue;
      k(static_cast<Eigen::Index>(is), ir) += gd.value * scale * std::polar(1.0, 2.0 * kPi * phase);
    }
  });
  return KernelOperator::dense(sgrid, std::move(k));
}

}  // namespace orbitfield
