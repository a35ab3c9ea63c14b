#include "orbitfield/kernel.hpp"


#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "orbitfield/errors.hpp"
#include "orbitfield/parallel.hpp"

namespace orbitfield {

Grid Grid::uniform(int dims, double L, int N, bool midpoint) {
  Grid g;
  g.axes.assign(dims, Axis{L, N, midpoint});
  return g;
}

std::int64_t Grid::size() const {
  std::int64_t s = 1;
  for (const auto& a : axes) s *= a.N;
  return s;
}

double Grid::weight() const {
  double w = 1.0;
  for (const auto& a : axes) w *= a.h();
  return w;
}

Grid Grid::refined() const {
  Grid g = *this;
  for (auto& a : g.axes) a.N *= 2;
  return g;
}

std::vector<int> Grid::unflatten(std::int64_t idx) const {
  std::vector<int> out(axes.size());
  for (int a = dims() - 1; a >= 0; --a) {
    out[a] = static_cast<int>(idx % axes[a].N);
    idx /= axes[a].N;
  }
  return out;
}

CMat factor_matrix(const Axis& ax, const std::function<cplx(double, double)>& k) {
  CMat f(ax.N, ax.N);
  for (int i = 0; i < ax.N; ++i)
    for (int j = 0; j < ax.N; ++j) f(i, j) = k(ax.point(i), ax.point(j));
  return f;
}

KernelOperator KernelOperator::separable(const Grid& g, cplx coeff, std::vector<CMat> factors) {
  KernelOperator k(g);
  k.add_term({coeff, std::move(factors)});
  return k;
}

KernelOperator KernelOperator::dense(const Grid& g, CMat samples) {
  KernelOperator k(g);
  k.add_dense(samples);
  return k;
}

void KernelOperator::add_term(Term t) {
  if (static_cast<int>(t.factors.size()) != grid_.dims()) {
    throw InternalError("kernel term has wrong number of axis factors");
  }
  for (int a = 0; a < grid_.dims(); ++a) {
    const int n = grid_.axes[a].N;
    if (t.factors[a].rows() != n || t.factors[a].cols() != n) {
      throw InternalError("kernel factor shape does not match grid axis");
    }
  }
  if (t.coeff == cplx(0.0, 0.0)) return;
  terms_.push_back(std::move(t));
}

void KernelOperator::add_dense(const CMat& samples) {
  if (samples.rows() != size() || samples.cols() != size()) {
    throw InternalError("dense kernel shape does not match grid");
  }
  if (dense_) {
    *dense_ += samples;
  } else {
    dense_ = samples;
  }
}

KernelOperator KernelOperator::scaled(cplx s) const {
  KernelOperator out = *this;
  for (auto& t : out.terms_) t.coeff *= s;
  if (out.dense_) *out.dense_ *= s;
  return out;
}

KernelOperator KernelOperator::operator+(const KernelOperator& o) const {
  if (!(grid_ == o.grid_)) throw InternalError("kernel operators live on different grids");
  KernelOperator out = *this;
  for (const auto& t : o.terms_) out.terms_.push_back(t);
  if (o.dense_) out.add_dense(*o.dense_);
  return out;
}

KernelOperator KernelOperator::operator-(const KernelOperator& o) const {
  return *this + o.scaled(-1.0);
}

namespace {

// out = (F_0 (x) ... (x) F_{d-1}) v, axis 0 slowest.
CVec kron_apply(const std::vector<CMat>& factors, const std::vector<int>& ns, const CVec& v,
                bool adjoint) {
  CVec cur = v;
  std::int64_t pre = 1;
  const std::int64_t total = cur.size();
  CVec next(total);
  for (std::size_t a = 0; a < factors.size(); ++a) {
    const int n = ns[a];
    const std::int64_t post = total / (pre * n);
    // Block p holds entries (q, j) at j * post + q: a post x n column-major matrix.
    for (std::int64_t p = 0; p < pre; ++p) {
      Eigen::Map<const CMat> in(cur.data() + p * n * post, post, n);
      Eigen::Map<CMat> out(next.data() + p * n * post, post, n);
      if (adjoint) {
        out.noalias() = in * factors[a].conjugate();
      } else {
        out.noalias() = in * factors[a].transpose();
      }
    }
    cur.swap(next);
    pre *= n;
  }
  return cur;
}

}  // namespace

CVec KernelOperator::apply(const CVec& v) const {
  std::vector<int> ns;
  for (const auto& a : grid_.axes) ns.push_back(a.N);
  CVec out = CVec::Zero(size());
  for (const auto& t : terms_) out += t.coeff * kron_apply(t.factors, ns, v, false);
  if (dense_) out += (*dense_) * v;
  return out * grid_.weight();
}

CVec KernelOperator::apply_adjoint(const CVec& v) const {
  std::vector<int> ns;
  for (const auto& a : grid_.axes) ns.push_back(a.N);
  CVec out = CVec::Zero(size());
  for (const auto& t : terms_) out += std::conj(t.coeff) * kron_apply(t.factors, ns, v, true);
  if (dense_) out += dense_->adjoint() * v;
  return out * grid_.weight();
}

CMat KernelOperator::samples() const {
  const std::int64_t n = size();
  CMat k = dense_ ? *dense_ : CMat::Zero(n, n);
  for (const auto& t : terms_) {
    CMat acc = CMat::Constant(1, 1, t.coeff);
    for (const auto& f : t.factors) {
      CMat next(acc.rows() * f.rows(), acc.cols() * f.cols());
      for (int i = 0; i < acc.rows(); ++i)
        for (int j = 0; j < acc.cols(); ++j)
          next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = acc(i, j) * f;
      acc = std::move(next);
    }
    k += acc;
  }
  return k;
}

CMat KernelOperator::matrix() const { return samples() * grid_.weight(); }

double KernelOperator::max_asymmetry() const {
  const std::int64_t n = size();
  const int d = grid_.dims();
  std::vector<std::vector<int>> idx(n);
  for (std::int64_t i = 0; i < n; ++i) idx[i] = grid_.unflatten(i);
  auto entry = [&](std::int64_t r, std::int64_t c) {
    cplx v = dense_ ? (*dense_)(r, c) : cplx(0.0);
    for (const auto& t : terms_) {
      cplx p = t.coeff;
      for (int a = 0; a < d; ++a) p *= t.factors[a](idx[r][a], idx[c][a]);
      v += p;
    }
    return v;
  };
  std::vector<double> row_max(n, 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t r) {
    double m = 0.0;
    for (std::int64_t c = static_cast<std::int64_t>(r); c < n; ++c) {
      m = std::max(m, std::abs(entry(r, c) - std::conj(entry(c, r))));
    }
    row_max[r] = m;
  });
  return n ? *std::max_element(row_max.begin(), row_max.end()) : 0.0;
}

bool KernelOperator::all_finite() const {
  for (const auto& t : terms_) {
    if (!std::isfinite(std::abs(t.coeff))) return false;
    for (const auto& f : t.factors)
      if (!f.allFinite()) return false;
  }
  return !dense_ || dense_->allFinite();
}

namespace {

// Axis whose factor is the same matrix in every term, up to 1e-12 of its size.
int common_axis(const KernelOperator& k) {
  const auto& terms = k.terms();
  if (k.dense_part() || terms.empty() || k.grid().dims() < 2) return -1;
  for (int a = 0; a < k.grid().dims(); ++a) {
    const CMat& f0 = terms[0].factors[a];
    const double tol = 1e-12 * f0.cwiseAbs().maxCoeff();
    bool same = true;
    for (std::size_t t = 1; t < terms.size() && same; ++t) {
      same = (terms[t].factors[a] - f0).cwiseAbs().maxCoeff() <= tol;
    }
    if (same) return a;
  }
  return -1;
}

}  // namespace

NormResult operator_norm(const KernelOperator& k, double tol, int max_iter) {
  if (!k.all_finite()) throw NumericalError("operator_norm: kernel has non-finite entries");
  if (const int a = common_axis(k); a >= 0) {
    // F_a (x) R has norm ||F_a|| ||R||.
    Grid rest = k.grid();
    rest.axes.erase(rest.axes.begin() + a);
    KernelOperator r(rest);
    for (const auto& t : k.terms()) {
      KernelOperator::Term u{t.coeff, t.factors};
      u.factors.erase(u.factors.begin() + a);
      r.add_term(std::move(u));
    }
    const NormResult nr = operator_norm(r, tol, max_iter);
    const NormResult nf = operator_norm(
        KernelOperator::separable(Grid{{k.grid().axes[a]}}, 1.0, {k.terms()[0].factors[a]}), tol, max_iter);
    return {nr.value * nf.value, nr.method, nr.iterations + nf.iterations};
  }
  NormResult res;
  const std::int64_t n = k.size();
  std::mt19937_64 rng(0x6f72626974ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CVec v(n);
  for (std::int64_t i = 0; i < n; ++i) v(i) = cplx(u(rng), u(rng));
  v.normalize();

  double sigma = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const CVec w = k.apply(v);
    const double s = w.norm();
    if (s == 0.0) {
      res.value = 0.0;
      res.method = "zero";
      res.iterations = it;
      return res;
    }
    CVec next = k.apply_adjoint(w);
    const double nn = next.norm();
    if (nn == 0.0) throw NumericalError("operator_norm: adjoint vanished on a nonzero image");
    v = next / nn;
    if (it > 3 && std::abs(s - sigma) <= tol * s) {
      res.value = s;
      res.method = "power";
      res.iterations = it;
      return res;
    }
    sigma = s;
  }
  if (n > 8192) {
    res.value = sigma;
    res.method = "power-unconverged";
    res.iterations = max_iter;
    return res;
  }
  Eigen::BDCSVD<CMat> svd(k.matrix());
  res.value = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  res.method = "svd";
  res.iterations = max_iter;
  return res;
}

RefinedNorm refined_operator_norm(const std::function<KernelOperator(const Grid&)>& build,
                                  const Grid& start, double rel_tol, int max_doublings,
                                  std::int64_t max_points) {
  RefinedNorm out;
  Grid g = start;
  NormResult cur = operator_norm(build(g));
  out.levels.push_back(cur.value);
  out.value = cur.value;
  out.coarse = cur.value;
  out.method = cur.method;
  out.final_grid = g;
  for (int step = 0; step < max_doublings; ++step) {
    const Grid next = g.refined();
    if (next.size() > max_points) break;
    const NormResult fine = operator_norm(build(next));
    out.levels.push_back(fine.value);
    out.coarse = out.value;
    out.value = fine.value;
    out.method = fine.method;
    out.final_grid = next;
    const double scale = std::max(std::abs(fine.value), 1e-300);
    out.rel_change = std::abs(fine.value - out.coarse) / scale;
    g = next;
    if (out.rel_change < rel_tol) {
      out.converged = true;
      return out;
    }
  }
  if (out.levels.size() == 1) out.rel_change = 0.0;
  return out;
}

}  // namespace orbitfield
