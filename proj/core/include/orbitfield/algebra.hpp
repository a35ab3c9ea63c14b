#pragma once

#include <complex>
#include <string>
#include <vector>

#include "orbitfield/subspace.hpp"

namespace orbitfield {

using cplx = std::complex<double>;

inline constexpr int kMaxAlgebraDim = 32;

// Two-step nilpotent Lie algebra given by dense structure constants in a fixed
// Jordan-Hoelder basis H_0..H_{n-1}. Indices are 0-based in the API.
class LieAlgebra {
 public:
  LieAlgebra() = default;
  LieAlgebra(int n, std::vector<std::string> names, int derived_start);

  // Sets [H_i,H_j] = v and [H_j,H_i] = -v.
  void set_bracket(int i, int j, const Vec& v);
  // Sets only c[i][j]; used to build deliberately broken tensors.
  void set_structure(int i, int j, const Vec& v);

  int dim() const { return n_; }
  int derived_start() const { return derived_start_; }
  const std::vector<std::string>& basis_names() const { return names_; }
  Vec structure(int i, int j) const;
  // M_k(i,j) = k-th coordinate of c[i][j].
  const Mat& component(int k) const { return comp_[k]; }
  double max_structure_norm() const;

  Vec bracket(const Vec& u, const Vec& v) const;
  // B_l(i,j) = <l, [H_i,H_j]>.
  Mat skew_form(const Vec& ell) const;
  // Span of all brackets, computed (not read off derived_start).
  Subspace derived_algebra() const;

 private:
  int n_ = 0;
  int derived_start_ = 0;
  std::vector<std::string> names_;
  std::vector<Mat> comp_;
};

struct Violation {
  std::string invariant;  // "antisymmetry" | "two-step" | "jordan-hoelder" | "derived placement"
  int i = -1, j = -1, k = -1;
  std::string detail;
};

// Raw tensor form, used where shapes have not been checked yet.
struct StructureTensor {
  int n = 0;
  std::vector<std::vector<Vec>> c;  // c[i][j] of length n
  int derived_start = 0;
};

std::vector<Violation> validate_algebra(const LieAlgebra& a, double tol = 1e-12);
// Throws MalformedInput on inconsistent dimensions.
std::vector<Violation> validate_algebra(const StructureTensor& t, double tol = 1e-12);
LieAlgebra from_tensor(const StructureTensor& t, std::vector<std::string> names = {});

Vec bch_product(const LieAlgebra& a, const Vec& u, const Vec& v);
inline Vec group_inverse(const Vec& u) { return -u; }

struct SkewFormAndStabilizer {
  Mat form;
  Subspace stabilizer;
};
SkewFormAndStabilizer skew_form_and_stabilizer(const LieAlgebra& a, const Vec& ell);
Subspace stabilizer(const LieAlgebra& a, const Vec& ell);

// Ad*(x) l with <ad*(x) l, y> = <l,[x,y]>.
Vec coadjoint(const LieAlgebra& a, const Vec& x, const Vec& ell);
// g(l)^perp; the orbit is ell + orbit_space.
Subspace orbit_space(const LieAlgebra& a, const Vec& ell);

cplx character_eval(const Vec& ell, const Vec& x);

}  // namespace orbitfield
