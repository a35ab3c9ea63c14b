#pragma once

#include <functional>
#include <vector>

#include "orbitfield/algebra.hpp"
#include "orbitfield/frames.hpp"
#include "orbitfield/kernel.hpp"

namespace orbitfield {

// Real function sampled on a lattice grid over algebra coordinates.
struct SampledFunction {
  Grid grid;
  std::vector<double> values;  // row-major, axis 0 slowest
};

SampledFunction sample_function(const Grid& grid, const std::function<double(const Vec&)>& f);

// (f * f')(g) = int f(u) f'(u^{-1} g) du on the same lattice, derived
// coordinates interpolated linearly. Throws PreconditionError when the grid
// holds more than max_points points.
SampledFunction group_convolution(const LieAlgebra& a, const SampledFunction& f,
                                  const SampledFunction& fp, std::int64_t max_points = 1 << 20);

// Kernel of pi(F) on the transversal lattice, built from samples of F. Each
// X_j must be +-1 times a coordinate vector whose axis matches grid axis j.
KernelOperator sampled_rep_kernel(const LieAlgebra& a, const AdaptedFrame& frame,
                                  const SampledFunction& f);

}  // namespace orbitfield
