#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace orbitfield {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct Axis {
  double L = 1.0;
  int N = 2;
  bool midpoint = true;  // false: lattice x_i = (i - N/2) h

  double h() const { return 2.0 * L / N; }
  double point(int i) const { return midpoint ? -L + (i + 0.5) * h() : (i - N / 2) * h(); }
  bool operator==(const Axis&) const = default;
};

struct Grid {
  std::vector<Axis> axes;

  static Grid uniform(int dims, double L, int N, bool midpoint = true);
  int dims() const { return static_cast<int>(axes.size()); }
  std::int64_t size() const;
  double weight() const;  // product of h over axes
  Grid refined() const;   // every N doubled, L kept
  // Row-major multi-index: axis 0 varies slowest.
  std::vector<int> unflatten(std::int64_t idx) const;
  bool operator==(const Grid&) const = default;
};

// Integral operator (K xi)(s) = int K(s,x) xi(x) dx discretized on `grid`.
// The kernel is a sum of Kronecker terms coeff * F_0 (x) F_1 (x) ... with one
// N_a x N_a factor per axis, plus an optional dense sample matrix.
class KernelOperator {
 public:
  struct Term {
    cplx coeff{1.0, 0.0};
    std::vector<CMat> factors;
  };

  KernelOperator() = default;
  explicit KernelOperator(Grid g) : grid_(std::move(g)) {}

  static KernelOperator separable(const Grid& g, cplx coeff, std::vector<CMat> factors);
  static KernelOperator dense(const Grid& g, CMat samples);
  static KernelOperator zero(const Grid& g) { return KernelOperator(g); }

  const Grid& grid() const { return grid_; }
  std::int64_t size() const { return grid_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const std::optional<CMat>& dense_part() const { return dense_; }

  void add_term(Term t);
  void add_dense(const CMat& samples);
  KernelOperator scaled(cplx s) const;
  KernelOperator operator-(const KernelOperator& o) const;
  KernelOperator operator+(const KernelOperator& o) const;

  // Weighted action: h^d * sum_x K(s_i, x_j) v_j.
  CVec apply(const CVec& v) const;
  CVec apply_adjoint(const CVec& v) const;

  // Kernel samples K(s_i, x_j) on the full product grid.
  CMat samples() const;
  // samples() * h^d, the matrix whose 2-norm approximates the L2 operator norm.
  CMat matrix() const;

  // max |K(s,x) - conj K(x,s)|.
  double max_asymmetry() const;
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<Term> terms_;
  std::optional<CMat> dense_;
};

struct NormResult {
  double value = 0.0;
  std::string method;  // "power" | "svd" | "zero"
  int iterations = 0;
};

NormResult operator_norm(const KernelOperator& k, double tol = 1e-6, int max_iter = 10000);

struct RefinedNorm {
  double value = 0.0;         // finest level computed
  double coarse = 0.0;        // level before it
  double rel_change = 0.0;
  bool converged = false;
  std::string method;
  Grid final_grid;
  std::vector<double> levels;
};

// Recomputes the norm with every N doubled until the relative change drops
// below rel_tol. Levels whose grid would exceed max_points are skipped and
// reported as not converged.
RefinedNorm refined_operator_norm(const std::function<KernelOperator(const Grid&)>& build,
                                  const Grid& start, double rel_tol = 1e-3, int max_doublings = 3,
                                  std::int64_t max_points = 1 << 14);

// Per-axis factor matrix F(i,j) = k(s_i, x_j).
CMat factor_matrix(const Axis& ax, const std::function<cplx(double, double)>& k);

}  // namespace orbitfield
