#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitfield/algebra.hpp"

namespace orbitfield {

struct PlaneDecomposition {
  std::vector<Vec> x;  // x[j], y[j] span plane j; S x = mu y, S y = -mu x
  std::vector<Vec> y;
  std::vector<double> magnitudes;
};

PlaneDecomposition decompose_skew(const Mat& s);

struct AdaptedFrame {
  std::vector<Vec> X, Y;
  std::optional<Vec> T, Z;
  std::vector<Vec> A_dot, A_ddot;
  std::vector<double> c;
  double lambda = 0.0;
  double rho = 0.0;
  int d = 0, p = 0, p_tilde = 0;
  // Functional the frame was built for: the input shifted along g(l)^perp so
  // that it vanishes on r = span{X_j, Y_j}. Same coadjoint orbit.
  Vec ell;

  int dim() const;
  // Columns X_1..X_d, Y_1..Y_d, T, Z, A_dot, A_ddot (absent T/Z skipped).
  Mat basis_matrix() const;
};

AdaptedFrame adapted_frame(const LieAlgebra& a, const Vec& ell);

struct FrameSequence {
  std::vector<AdaptedFrame> frames;
  AdaptedFrame limit_frame;
  Subspace u_limit;
  double cauchy_distance = 0.0;
};

// Largest distance between matching basis vectors of two frames with equal shape.
double frame_distance(const AdaptedFrame& a, const AdaptedFrame& b);

// Rotates/reorders `f` within its legal freedom to match `prev`.
AdaptedFrame align_frame(const AdaptedFrame& f, const AdaptedFrame& prev);

// `tail` holds functionals further along the same sequence (closer to the
// limit); when present the limit frame is read off them, otherwise off the
// last two frames of the list. `ell_limit`, when given, fixes the limit scalars.
FrameSequence frame_sequence(const LieAlgebra& a, const std::vector<Vec>& ells, bool align = true,
                             const std::vector<Vec>& tail = {},
                             const std::optional<Vec>& ell_limit = std::nullopt,
                             double cauchy_tol = 1e-4);

enum class CaseTag { Case1, Case2, Case3 };

struct LimitCase {
  CaseTag tag = CaseTag::Case1;
  int m = 0;
};

std::string to_string(CaseTag t);
LimitCase classify_limit(const FrameSequence& seq, const LieAlgebra& a, const Vec& ell_limit);

}  // namespace orbitfield
