#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitfield/frames.hpp"
#include "orbitfield/kernel.hpp"
#include "orbitfield/repfield.hpp"

namespace orbitfield {

// Limit operator for a characters-only limit set: per plane
// K(s,r) = f_x(s-r) int f^_y(y~) eta_{y~}(r) eta_{y~}(s) dy~ / |mu|.
KernelOperator nu_case2(const AdaptedFrame& frame_k, const ReducedFunction& h, const Grid& grid,
                        const Window& w = {}, int ny = 64);

// Planes 0..m-1 carry the limit representation, planes m..d-1 the window
// projections of frame_k.
KernelOperator nu_case3(const AdaptedFrame& frame_k, int m, const ReducedFunction& h,
                        const Grid& grid, const Window& w = {}, int ny = 64);

struct DefectDrivers {
  double rho = 0.0;
  double lambda = 0.0;
  double c = 0.0;     // ||l_k c^k||^{1/2} (1 + ||l_k c^k||^{1/2}) over the vanishing planes
  double cdot = 0.0;  // ||l c - l_k c^k|| over the non-vanishing planes
  double frame = 0.0;
  double window = 0.0;
  double sum() const { return rho + lambda + c + cdot + frame + window; }
};

DefectDrivers defect_drivers(const AdaptedFrame& frame_k, const AdaptedFrame& limit,
                             const LimitCase& lc);

struct DefectRow {
  double k = 0.0;
  double defect = 0.0;
  double defect_coarse = 0.0;
  double refine_change = 0.0;
  bool refine_converged = false;
  DefectDrivers drivers;
  double nu_norm = 0.0;
  double nu_bound = 0.0;
  double nu_asym = 0.0;
  int grid_N = 0;
  int grid_N_final = 0;
  double grid_L = 0.0;
  std::string method;
  double wall_time_s = 0.0;
};

struct DefectReport {
  LimitCase limit_case;
  std::vector<DefectRow> rows;
  double fit_C = 0.0;
  double max_residual_ratio = 0.0;
  bool fit_ok = false;
};

struct DefectOptions {
  int N = 64;
  std::optional<double> L;  // fixed half-width; auto when empty
  Window window{};
  int ny = 64;
  int max_doublings = 2;
  std::int64_t max_points = 1 << 14;
};

// Throws PreconditionError when f violates the band-limit hypothesis.
DefectReport defect(const FrameSequence& seq, const std::vector<double>& ks, const LimitCase& lc,
                    const TestFunction& f, const DefectOptions& opt = {});

// Fits one constant C with defect_k <= C * drivers_k; fills fit_* fields.
void fit_drivers(DefectReport& rep);

// Half-widths per axis covering pi_k and the case-matched limit operator.
std::vector<double> defect_extents(const AdaptedFrame& frame_k, const AdaptedFrame& limit,
                                   const LimitCase& lc, const TestFunction& f,
                                   const Window& w = {});

// Sup over the limit set of ||pi_{l+q}(h)||.
double limit_sup_norm(const ReducedFunction& h, const LimitCase& lc, const Grid& grid);

// One CSV line per row; numbers with 17 significant digits.
std::string report_csv(const DefectReport& rep, const std::string& experiment, bool with_time = true);
std::string csv_header(bool with_time = true);

}  // namespace orbitfield
