#pragma once

#include <vector>

#include "orbitfield/frames.hpp"
#include "orbitfield/kernel.hpp"
#include "orbitfield/testfunction.hpp"

namespace orbitfield {

inline constexpr double kTailEps = 1e-6;

// eta(t) = (2a)^{1/4} exp(-pi a t^2); a = 1/2 gives exp(-pi t^2 / 2).
struct Window {
  double a = 0.5;
  double value(double t) const;
  double radius(double eps = kTailEps) const;
  // Standard deviation in y~ of eta_{y~}(s) * eta_{y~}(r) at scale mu.
  double spread(double mu) const;
};

// f with the t, z, adot, addot factors collapsed to their transforms at
// (rho, lambda, 0, 0) of the limit frame.
struct ReducedFunction {
  int d = 0;
  std::vector<Factor> fx, fy;
  cplx constant{0.0, 0.0};
  double lambda = 0.0;
  double rho = 0.0;
  std::vector<double> c;
};

ReducedFunction project_GU(const TestFunction& f, const AdaptedFrame& limit);

// Half-width per axis that holds the rep kernel's mass.
std::vector<double> rep_extent(const AdaptedFrame& frame, const TestFunction& f,
                               double eps = kTailEps);
// Same, with the frame scalars replaced by the reduced function's limit scalars.
double rep_extent_axis(const Factor& fx, const Factor& fy, double mu, double eps = kTailEps);
double window_extent_axis(const Factor& fy, double mu, const Window& w = {},
                          double eps = kTailEps);

// K(s,x) = f^(y,t,z,adot,addot)(s - x, -(lambda c/2)(s + x), rho, lambda, 0, 0).
KernelOperator rep_kernel(const AdaptedFrame& frame, const TestFunction& f, const Grid& grid,
                          bool check_tail = true);

// pi(g) xi for xi sampled on `grid` (transversal coordinates of the frame).
CVec rep_point_action(const LieAlgebra& a, const AdaptedFrame& frame, const Vec& g,
                      const CVec& xi, const Grid& grid);

// Sup of the full transform of h (x and y axes) over a frequency grid.
double fourier_sup(const ReducedFunction& h, int points = 257);

// eta_{k,alpha,beta} sampled on `grid`, scales mu_j = lambda_k c_j^k.
CVec window_samples(const std::vector<double>& mu, const std::vector<double>& alpha,
                    const std::vector<double>& beta, const Grid& grid, const Window& w = {});

struct CoefficientOptions {
  double box = 1.0;
  int box_points = 5;
  // Keep only lattice points with |g| <= box; otherwise the full cube.
  bool ball = true;
  Window window{};
};

// max over g in {|g| <= box} (or [-box, box]^n) of |<pi_k(g) eta, eta> - chi_{l + l_{alpha,beta}}(g)|.
double coefficient_defect(const LieAlgebra& a, const AdaptedFrame& frame_k,
                          const AdaptedFrame& limit, const std::vector<double>& alpha,
                          const std::vector<double>& beta, const CoefficientOptions& opt = {});

// ||pi_{l+q}(f)||_op for each q; q must lie in `annihilator`.
std::vector<double> fourier_section(const LieAlgebra& a, const TestFunction& f, const Vec& ell,
                                    const Subspace& annihilator, const std::vector<Vec>& qs,
                                    int n_points = 64);

// Grid whose half-widths cover rep_extent, N points per axis.
Grid auto_grid(const std::vector<double>& extents, int n_points, bool midpoint = true);

}  // namespace orbitfield
