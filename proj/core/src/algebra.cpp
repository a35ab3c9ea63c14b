#include "orbitfield/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "orbitfield/errors.hpp"

namespace orbitfield {

LieAlgebra::LieAlgebra(int n, std::vector<std::string> names, int derived_start)
    : n_(n), derived_start_(derived_start), names_(std::move(names)) {
  if (n <= 0 || n > kMaxAlgebraDim) {
    throw MalformedInput("algebra dimension must be in 1.." + std::to_string(kMaxAlgebraDim));
  }
  if (derived_start < 0 || derived_start > n) throw MalformedInput("derived_start out of range");
  if (names_.empty()) {
    for (int i = 0; i < n; ++i) names_.push_back("H" + std::to_string(i + 1));
  }
  if (static_cast<int>(names_.size()) != n) throw MalformedInput("basis name count != dim");
  comp_.assign(n, Mat::Zero(n, n));
}

void LieAlgebra::set_bracket(int i, int j, const Vec& v) {
  set_structure(i, j, v);
  set_structure(j, i, -v);
}

void LieAlgebra::set_structure(int i, int j, const Vec& v) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw MalformedInput("bracket index out of range");
  if (v.size() != n_) throw MalformedInput("bracket result has wrong length");
  for (int k = 0; k < n_; ++k) comp_[k](i, j) = v(k);
}

Vec LieAlgebra::structure(int i, int j) const {
  Vec v(n_);
  for (int k = 0; k < n_; ++k) v(k) = comp_[k](i, j);
  return v;
}

double LieAlgebra::max_structure_norm() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m = std::max(m, structure(i, j).norm());
  return m;
}

Vec LieAlgebra::bracket(const Vec& u, const Vec& v) const {
  if (u.size() != n_ || v.size() != n_) throw MalformedInput("vector length != algebra dim");
  Vec out(n_);
  for (int k = 0; k < n_; ++k) out(k) = u.dot(comp_[k] * v);
  return out;
}

Mat LieAlgebra::skew_form(const Vec& ell) const {
  if (ell.size() != n_) throw MalformedInput("functional length != algebra dim");
  Mat b = Mat::Zero(n_, n_);
  for (int k = 0; k < n_; ++k)
    if (ell(k) != 0.0) b += ell(k) * comp_[k];
  return b;
}

Subspace LieAlgebra::derived_algebra() const {
  Mat cols(n_, n_ * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) cols.col(i * n_ + j) = structure(i, j);
  return Subspace::span(cols);
}

namespace {

std::string fmt_triple(int i, int j, int k) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1;
  if (k >= 0) os << "," << k + 1;
  os << ")";
  return os.str();
}

}  // namespace

std::vector<Violation> validate_algebra(const LieAlgebra& a, double tol) {
  const int n = a.dim();
  std::vector<Violation> out;
  const double scale = std::max(1.0, a.max_structure_norm());
  const double eps = tol * scale;

  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Vec s = a.structure(i, j) + a.structure(j, i);
      if (s.cwiseAbs().maxCoeff() > eps) {
        out.push_back({"antisymmetry", i, j, -1,
                       "c" + fmt_triple(i, j, -1) + " + c" + fmt_triple(j, i, -1) + " != 0"});
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec c = a.structure(i, j);
      for (int k = 0; k < n; ++k) {
        if (std::abs(c(k)) <= eps) continue;
        if (k < a.derived_start()) {
          out.push_back({"derived placement", i, j, k,
                         "[H" + std::to_string(i + 1) + ",H" + std::to_string(j + 1) +
                             "] has component on H" + std::to_string(k + 1)});
        }
      }
    }
  }

  // Jordan-Hoelder: [H_i, H_j] in span{H_m, m >= min index}, i.e. the flag is made of ideals.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int lo = std::max(i, j);
      Vec c = a.structure(i, j);
      for (int k = 0; k < lo; ++k) {
        if (std::abs(c(k)) > eps) {
          out.push_back({"jordan-hoelder", i, j, k,
                         "span{H" + std::to_string(lo + 1) + ",...} is not an ideal"});
          break;
        }
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec c = a.structure(i, j);
      if (c.cwiseAbs().maxCoeff() <= eps) continue;
      for (int k = 0; k < n; ++k) {
        Vec e = Vec::Unit(n, k);
        Vec t = a.bracket(c, e);
        if (t.cwiseAbs().maxCoeff() > eps * scale) {
          out.push_back({"two-step", i, j, k,
                         "[[H" + std::to_string(i + 1) + ",H" + std::to_string(j + 1) + "],H" +
                             std::to_string(k + 1) + "] != 0"});
        }
      }
    }
  }
  return out;
}

LieAlgebra from_tensor(const StructureTensor& t, std::vector<std::string> names) {
  if (t.n <= 0) throw MalformedInput("tensor dimension must be positive");
  if (static_cast<int>(t.c.size()) != t.n) throw MalformedInput("tensor has wrong number of rows");
  for (const auto& row : t.c) {
    if (static_cast<int>(row.size()) != t.n) throw MalformedInput("tensor row has wrong length");
    for (const auto& v : row)
      if (v.size() != t.n) throw MalformedInput("tensor entry has wrong length");
  }
  LieAlgebra a(t.n, std::move(names), t.derived_start);
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) a.set_structure(i, j, t.c[i][j]);
  return a;
}

std::vector<Violation> validate_algebra(const StructureTensor& t, double tol) {
  return validate_algebra(from_tensor(t), tol);
}

Vec bch_product(const LieAlgebra& a, const Vec& u, const Vec& v) {
  return u + v + 0.5 * a.bracket(u, v);
}

SkewFormAndStabilizer skew_form_and_stabilizer(const LieAlgebra& a, const Vec& ell) {
  Mat b = a.skew_form(ell);
  // Same zero test as the Vergne iteration: singular values below
  // kRankTol * (1 + |l| max|c|) vanish even when all of B is that small.
  const double floor = kRankTol * (1.0 + ell.norm() * a.max_structure_norm());
  if (b.cwiseAbs().maxCoeff() <= floor) return {b, Subspace::whole(a.dim())};
  Eigen::JacobiSVD<Mat> svd(b, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = std::max(kRankTol * s(0), floor);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return {b, Subspace(a.dim(), svd.matrixV().rightCols(a.dim() - r))};
}

Subspace stabilizer(const LieAlgebra& a, const Vec& ell) {
  return skew_form_and_stabilizer(a, ell).stabilizer;
}

Vec coadjoint(const LieAlgebra& a, const Vec& x, const Vec& ell) {
  // <ad*(x) l, H_j> = <l, [x, H_j]> = sum_k l_k (x^T M_k)_j = (B_l^T x)_j with B_l = sum l_k M_k.
  return ell + a.skew_form(ell).transpose() * x;
}

Subspace orbit_space(const LieAlgebra& a, const Vec& ell) {
  return stabilizer(a, ell).complement();
}

cplx character_eval(const Vec& ell, const Vec& x) {
  const double phase = -2.0 * std::numbers::pi * ell.dot(x);
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace orbitfield
