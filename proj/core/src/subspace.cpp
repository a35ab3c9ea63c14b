#include "orbitfield/subspace.hpp"

#include <Eigen/SVD>

#include "orbitfield/errors.hpp"

namespace orbitfield {

Subspace::Subspace(int ambient, Mat orthonormal_basis)
    : ambient_(ambient), basis_(std::move(orthonormal_basis)) {
  if (basis_.cols() > 0 && basis_.rows() != ambient_) {
    throw MalformedInput("subspace basis has wrong ambient dimension");
  }
  if (basis_.cols() == 0) basis_.resize(ambient_, 0);
}

Subspace Subspace::zero(int ambient) { return Subspace(ambient, Mat(ambient, 0)); }

Subspace Subspace::whole(int ambient) {
  return Subspace(ambient, Mat::Identity(ambient, ambient));
}

Subspace Subspace::span(const Mat& cols, double rel_tol) {
  const int n = static_cast<int>(cols.rows());
  if (cols.cols() == 0 || n == 0) return zero(n);
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  if (smax <= 0.0) return zero(n);
  int r = 0;
  while (r < s.size() && s(r) > rel_tol * smax) ++r;
  return Subspace(n, svd.matrixU().leftCols(r));
}

Subspace Subspace::canonical(const Subspace& s) {
  const int n = s.ambient();
  Mat out(n, s.dim());
  int got = 0;
  for (int i = 0; i < n && got < s.dim(); ++i) {
    Vec v = s.basis().row(i).transpose();  // P e_i in basis coordinates
    v = s.basis() * v;
    for (int j = 0; j < got; ++j) v -= out.col(j).dot(v) * out.col(j);
    for (int j = 0; j < got; ++j) v -= out.col(j).dot(v) * out.col(j);
    const double nv = v.norm();
    if (nv > 1e-6) out.col(got++) = v / nv;
  }
  if (got != s.dim()) throw InternalError("canonical basis lost rank");
  return Subspace(n, out);
}

bool Subspace::contains(const Vec& v, double tol) const {
  return (v - project(v)).norm() <= tol * std::max(1.0, v.norm());
}

Subspace Subspace::complement() const {
  if (dim() == 0) return whole(ambient_);
  if (dim() == ambient_) return zero(ambient_);
  Mat p = Mat::Identity(ambient_, ambient_) - projector();
  return span(p, 1e-6);
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (dim() == 0 || other.dim() == 0) return zero(ambient_);
  // x in A and in B  <=>  (I - P_B) x = 0 for x = A a.
  Mat m = basis_ - other.basis() * (other.basis().transpose() * basis_);
  Mat k = null_space(m, 1e-8);
  if (k.cols() == 0) return zero(ambient_);
  return span(basis_ * k);
}

Subspace Subspace::operator+(const Subspace& other) const {
  Mat both(ambient_, dim() + other.dim());
  both << basis_, other.basis();
  return span(both);
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  return (a.projector() - b.projector()).norm();
}

bool same_subspace(const Subspace& a, const Subspace& b, double tol) {
  return a.ambient() == b.ambient() && subspace_distance(a, b) < tol;
}

Mat null_space(const Mat& m, double rel_tol) {
  const int n = static_cast<int>(m.cols());
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  if (smax <= 0.0) return Mat::Identity(n, n);
  int r = 0;
  while (r < s.size() && s(r) > rel_tol * smax) ++r;
  return svd.matrixV().rightCols(n - r);
}

int numerical_rank(const Mat& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  int r = 0;
  while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
  return r;
}

}  // namespace orbitfield
