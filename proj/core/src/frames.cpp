#include "orbitfield/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "orbitfield/errors.hpp"
#include "orbitfield/parallel.hpp"
#include "orbitfield/strata.hpp"

namespace orbitfield {

PlaneDecomposition decompose_skew(const Mat& s) {
  const int n = static_cast<int>(s.rows());
  if (s.cols() != n) throw MalformedInput("decompose_skew: matrix not square");
  PlaneDecomposition out;
  if (n == 0) return out;
  const double scale = std::max(1.0, s.norm());
  if ((s + s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw PreconditionError("decompose_skew: matrix is not skew-symmetric");
  }
  if (n % 2 != 0) throw PreconditionError("decompose_skew: odd dimension");
  Eigen::JacobiSVD<Mat> svd(s);
  const auto& sv = svd.singularValues();
  if (sv(n - 1) <= 1e-9 * sv(0)) throw NumericalError("decompose_skew: singular matrix");

  Eigen::RealSchur<Mat> schur(s);
  const Mat& u = schur.matrixU();
  Mat taken = Mat::Zero(n, 0);
  for (int i = 0; i + 1 < n; i += 2) {
    Vec x = u.col(i);
    // Re-project against earlier planes; Schur vectors are already orthogonal
    // up to rounding, this keeps the output orthonormal to 1e-14.
    if (taken.cols()) x -= taken * (taken.transpose() * x);
    x.normalize();
    Vec sx = s * x;
    const double mu = sx.norm();
    Vec y = sx / mu;
    if (taken.cols()) y -= taken * (taken.transpose() * y);
    y -= x.dot(y) * x;
    y.normalize();
    out.x.push_back(x);
    out.y.push_back(y);
    out.magnitudes.push_back(mu);
    taken.conservativeResize(n, taken.cols() + 2);
    taken.col(taken.cols() - 2) = x;
    taken.col(taken.cols() - 1) = y;
  }
  std::vector<int> order(out.x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return out.magnitudes[a] > out.magnitudes[b]; });
  PlaneDecomposition sorted;
  for (int j : order) {
    sorted.x.push_back(out.x[j]);
    sorted.y.push_back(out.y[j]);
    sorted.magnitudes.push_back(out.magnitudes[j]);
  }
  return sorted;
}

int AdaptedFrame::dim() const {
  return 2 * d + (T ? 1 : 0) + (Z ? 1 : 0) + p;
}

Mat AdaptedFrame::basis_matrix() const {
  const int n = static_cast<int>(ell.size());
  Mat m(n, dim());
  int c = 0;
  for (const auto& v : X) m.col(c++) = v;
  for (const auto& v : Y) m.col(c++) = v;
  if (T) m.col(c++) = *T;
  if (Z) m.col(c++) = *Z;
  for (const auto& v : A_dot) m.col(c++) = v;
  for (const auto& v : A_ddot) m.col(c++) = v;
  return m;
}

namespace {

// W minus V for V inside W: orthonormal basis of W cap V^perp.
Subspace minus(const Subspace& w, const Subspace& v) {
  if (w.dim() == 0) return w;
  Mat r = w.basis() - v.basis() * (v.basis().transpose() * w.basis());
  if (r.norm() < 1e-12) return Subspace::zero(w.ambient());
  return Subspace::span(r, 1e-8);
}

std::vector<Vec> columns(const Subspace& s) {
  std::vector<Vec> out;
  for (int i = 0; i < s.dim(); ++i) out.push_back(s.vector(i));
  return out;
}

}  // namespace

AdaptedFrame adapted_frame(const LieAlgebra& a, const Vec& ell) {
  const int n = a.dim();
  AdaptedFrame f;
  const Mat b = a.skew_form(ell);
  const Subspace stab(n, null_space(b, kRankTol));
  const Subspace r = stab.complement();
  f.ell = ell - r.project(ell);
  f.d = r.dim() / 2;

  if (f.d > 0) {
    const Mat& rb = r.basis();
    const Mat s = rb.transpose() * b * rb;
    const PlaneDecomposition pd = decompose_skew(s);
    const Mat s_amb = rb * s * rb.transpose();

    // Group equal magnitudes, then pick planes greedily by lowest basis index.
    std::size_t g0 = 0;
    while (g0 < pd.magnitudes.size()) {
      std::size_t g1 = g0 + 1;
      while (g1 < pd.magnitudes.size() &&
             std::abs(pd.magnitudes[g1] - pd.magnitudes[g0]) <= 1e-8 * pd.magnitudes[g0])
        ++g1;
      Mat wcols(n, 2 * static_cast<int>(g1 - g0));
      for (std::size_t j = g0; j < g1; ++j) {
        wcols.col(2 * static_cast<int>(j - g0)) = rb * pd.x[j];
        wcols.col(2 * static_cast<int>(j - g0) + 1) = rb * pd.y[j];
      }
      Subspace wr = Subspace::span(wcols, 1e-8);
      while (wr.dim() > 0) {
        Vec x;
        for (int i = 0; i < n; ++i) {
          Vec v = wr.project(Vec::Unit(n, i));
          if (v.norm() > 1e-6) {
            x = v.normalized();
            break;
          }
        }
        Vec sx = s_amb * x;
        Vec y = -sx / sx.norm();
        y -= x.dot(y) * x;
        y.normalize();
        f.X.push_back(x);
        f.Y.push_back(y);
        Mat two(n, 2);
        two << x, y;
        wr = minus(wr, Subspace::span(two));
      }
      g0 = g1;
    }
  }

  const Subspace der = a.derived_algebra();
  const double tol = 1e-12 * (1.0 + ell.norm());
  Subspace n0 = der;
  const Vec w = der.project(f.ell);
  if (w.norm() > tol) {
    Vec z = w / w.norm();
    f.Z = z;
    f.lambda = f.ell.dot(z);
    n0 = minus(der, Subspace(n, Mat(z)));
  } else if (f.d > 0) {
    throw InternalError("adapted_frame: nondegenerate form but l vanishes on [g,g]");
  }

  const Subspace s = minus(stab, der);
  Subspace s0 = s;
  const Vec u = s.project(f.ell);
  if (s.dim() > 0 && u.norm() > tol) {
    Vec t = u / u.norm();
    f.T = t;
    f.rho = f.ell.dot(t);
    s0 = minus(s, Subspace(n, Mat(t)));
  }
  f.A_dot = columns(Subspace::canonical(n0));
  f.A_ddot = columns(Subspace::canonical(s0));
  f.p_tilde = static_cast<int>(f.A_dot.size());
  f.p = f.p_tilde + static_cast<int>(f.A_ddot.size());

  for (int j = 0; j < f.d; ++j) {
    const double mu = f.X[j].dot(b * f.Y[j]);
    f.c.push_back(mu / f.lambda);
  }
  return f;
}

double frame_distance(const AdaptedFrame& a, const AdaptedFrame& b) {
  if (a.d != b.d || a.T.has_value() != b.T.has_value() || a.Z.has_value() != b.Z.has_value() ||
      a.A_dot.size() != b.A_dot.size() || a.A_ddot.size() != b.A_ddot.size()) {
    return std::numeric_limits<double>::infinity();
  }
  const Mat ma = a.basis_matrix();
  const Mat mb = b.basis_matrix();
  double m = 0.0;
  for (int c = 0; c < ma.cols(); ++c) m = std::max(m, (ma.col(c) - mb.col(c)).norm());
  return m;
}

namespace {

void procrustes(std::vector<Vec>& cur, const std::vector<Vec>& prev) {
  if (cur.empty() || cur.size() != prev.size()) return;
  const int n = static_cast<int>(cur[0].size());
  const int k = static_cast<int>(cur.size());
  Mat c(n, k), p(n, k);
  for (int i = 0; i < k; ++i) {
    c.col(i) = cur[i];
    p.col(i) = prev[i];
  }
  Eigen::JacobiSVD<Mat> svd(c.transpose() * p, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat q = svd.matrixU() * svd.matrixV().transpose();
  Mat out = c * q;
  for (int i = 0; i < k; ++i) cur[i] = out.col(i);
}

}  // namespace

AdaptedFrame align_frame(const AdaptedFrame& f, const AdaptedFrame& prev) {
  if (f.d != prev.d || f.A_dot.size() != prev.A_dot.size() ||
      f.A_ddot.size() != prev.A_ddot.size()) {
    throw PreconditionError("align_frame: frames have different shapes");
  }
  AdaptedFrame out = f;
  // Reorder planes inside groups of equal c_j * lambda.
  std::size_t g0 = 0;
  while (g0 < f.c.size()) {
    std::size_t g1 = g0 + 1;
    const double mu0 = f.c[g0] * f.lambda;
    while (g1 < f.c.size() && std::abs(f.c[g1] * f.lambda - mu0) <= 1e-8 * std::abs(mu0)) ++g1;
    std::vector<bool> used(g1 - g0, false);
    for (std::size_t j = g0; j < g1; ++j) {
      double best = -1.0;
      std::size_t arg = g0;
      for (std::size_t q = g0; q < g1; ++q) {
        if (used[q - g0]) continue;
        const double ov = std::pow(f.X[q].dot(prev.X[j]), 2) + std::pow(f.Y[q].dot(prev.X[j]), 2) +
                          std::pow(f.X[q].dot(prev.Y[j]), 2) + std::pow(f.Y[q].dot(prev.Y[j]), 2);
        if (ov > best) {
          best = ov;
          arg = q;
        }
      }
      used[arg - g0] = true;
      out.X[j] = f.X[arg];
      out.Y[j] = f.Y[arg];
      out.c[j] = f.c[arg];
    }
    g0 = g1;
  }
  for (int j = 0; j < out.d; ++j) {
    const Vec x = out.X[j], y = out.Y[j];
    const double ca = x.dot(prev.X[j]) + y.dot(prev.Y[j]);
    const double sa = y.dot(prev.X[j]) - x.dot(prev.Y[j]);
    const double th = std::atan2(sa, ca);
    out.X[j] = std::cos(th) * x + std::sin(th) * y;
    out.Y[j] = -std::sin(th) * x + std::cos(th) * y;
  }
  procrustes(out.A_dot, prev.A_dot);
  procrustes(out.A_ddot, prev.A_ddot);
  return out;
}

FrameSequence frame_sequence(const LieAlgebra& a, const std::vector<Vec>& ells, bool align,
                             const std::vector<Vec>& tail, const std::optional<Vec>& ell_limit,
                             double cauchy_tol) {
  if (ells.empty()) throw PreconditionError("frame_sequence: empty sequence");
  std::vector<Vec> all = ells;
  all.insert(all.end(), tail.begin(), tail.end());

  std::vector<StratumLabel> labels(all.size());
  std::vector<AdaptedFrame> frames(all.size());
  parallel_for(all.size(), [&](std::size_t i) {
    labels[i] = label_of(a, all[i]);
    frames[i] = adapted_frame(a, all[i]);
  });
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (!(labels[i] == labels[0])) {
      throw PreconditionError("frame_sequence: stratum drift at position " + std::to_string(i) +
                              ": " + to_string(labels[i]) + " != " + to_string(labels[0]));
    }
  }
  if (align) {
    for (std::size_t i = 1; i < frames.size(); ++i) frames[i] = align_frame(frames[i], frames[i - 1]);
  }

  FrameSequence seq;
  seq.frames.assign(frames.begin(), frames.begin() + static_cast<long>(ells.size()));
  const AdaptedFrame& last = frames.back();
  seq.cauchy_distance = frames.size() >= 2 ? frame_distance(frames[frames.size() - 2], last) : 0.0;
  if (!(seq.cauchy_distance < cauchy_tol)) {
    throw NumericalError("frame_sequence: frames not converged (distance " +
                         std::to_string(seq.cauchy_distance) +
                         " at the last step); use a finer sequence or pass to a subsequence");
  }
  seq.limit_frame = last;
  seq.u_limit = stabilizer(a, all.back());

  if (ell_limit) {
    AdaptedFrame& lf = seq.limit_frame;
    const int n = a.dim();
    Mat rcols(n, 2 * lf.d);
    for (int j = 0; j < lf.d; ++j) {
      rcols.col(j) = lf.X[j];
      rcols.col(lf.d + j) = lf.Y[j];
    }
    Vec l = *ell_limit;
    if (lf.d > 0) l -= Subspace(n, rcols).project(l);
    lf.ell = l;
    lf.lambda = lf.Z ? l.dot(*lf.Z) : 0.0;
    lf.rho = lf.T ? l.dot(*lf.T) : 0.0;
    const double tol = 1e-12 * (1.0 + l.norm());
    if (std::abs(lf.lambda) > tol) {
      for (int j = 0; j < lf.d; ++j) lf.c[j] = lf.X[j].dot(a.skew_form(l) * lf.Y[j]) / lf.lambda;
    } else {
      lf.lambda = 0.0;
    }
  }
  return seq;
}

std::string to_string(CaseTag t) {
  switch (t) {
    case CaseTag::Case1:
      return "Case1";
    case CaseTag::Case2:
      return "Case2";
    case CaseTag::Case3:
      return "Case3";
  }
  return "?";
}

LimitCase classify_limit(const FrameSequence& seq, const LieAlgebra& a, const Vec& ell_limit) {
  if (seq.frames.empty()) throw PreconditionError("classify_limit: empty sequence");
  const int d = seq.frames.front().d;
  for (const auto& f : seq.frames) {
    if (f.d != d) throw PreconditionError("classify_limit: orbit dimension not constant");
  }
  const int n = a.dim();
  const int lim_stab = stabilizer(a, ell_limit).dim();
  if (lim_stab == n - 2 * d) return {CaseTag::Case1, 0};
  const Subspace der = a.derived_algebra();
  if (der.project(ell_limit).norm() <= vergne_zero_threshold(a, ell_limit)) {
    return {CaseTag::Case2, 0};
  }
  const int m = (n - lim_stab) / 2;
  if (m < 1 || m >= d) throw InternalError("classify_limit: inconsistent third-case index");
  return {CaseTag::Case3, m};
}

}  // namespace orbitfield
