#pragma once

#include <Eigen/Dense>

namespace orbitfield {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kRankTol = 1e-9;

// Linear subspace of R^n held as an orthonormal column basis.
class Subspace {
 public:
  Subspace() = default;
  Subspace(int ambient, Mat orthonormal_basis);

  static Subspace zero(int ambient);
  static Subspace whole(int ambient);
  // Column span of `cols`; columns below rel_tol * sigma_max are dropped.
  static Subspace span(const Mat& cols, double rel_tol = kRankTol);
  // Gram-Schmidt over P e_1, P e_2, ... where P projects onto `s`. Gives a
  // basis that does not depend on how `s` was computed.
  static Subspace canonical(const Subspace& s);

  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }
  Vec vector(int i) const { return basis_.col(i); }

  Mat projector() const { return basis_ * basis_.transpose(); }
  Vec project(const Vec& v) const { return basis_ * (basis_.transpose() * v); }
  bool contains(const Vec& v, double tol = 1e-8) const;

  Subspace complement() const;
  Subspace intersect(const Subspace& other) const;
  Subspace operator+(const Subspace& other) const;

 private:
  int ambient_ = 0;
  Mat basis_;
};

// Frobenius distance between orthogonal projectors.
double subspace_distance(const Subspace& a, const Subspace& b);
bool same_subspace(const Subspace& a, const Subspace& b, double tol = 1e-8);

// Orthonormal basis of ker M, singular values below rel_tol * sigma_max count as zero.
Mat null_space(const Mat& m, double rel_tol = kRankTol);
int numerical_rank(const Mat& m, double rel_tol = kRankTol);

}  // namespace orbitfield
