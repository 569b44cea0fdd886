#pragma once

#include <string>
#include <vector>

#include "shocktrack/flux.hpp"
#include "shocktrack/problem.hpp"

namespace shocktrack {

struct FvConfig {
  int cells = 200;
  double cfl = 0.9;           // time step = cfl * dx / max|f'(u)|, recomputed per step
  bool dirichlet = false;     // default: transmissive (zero-gradient ghosts)
  int snapshots = 50;         // uniform snapshot times including t=0 and T
};

struct FvGrid {
  double a = 0, b = 0, dx = 0, cfl = 0;
  std::vector<double> centers;
  std::vector<double> times;
  std::vector<std::vector<double>> data;  // [snapshot][cell] averages
};

// Exact-Riemann (minimax) numerical flux for a convex or concave scalar
// flux: min of f between the states when ul <= ur, max when ul > ur, with
// interior critical points included (sonic correction).
double godunov_flux(const FluxModel& f, double ul, double ur);

// First-order Godunov scheme for scalar problems on a uniform grid.
FvGrid godunov_solve(const ProblemSpec& spec, const FvConfig& cfg);

// A tracked discontinuity trajectory; times start at the first snapshot
// where the jump was found (shocks forming from smooth data appear late).
struct ShockPath {
  std::vector<double> times;
  std::vector<double> pos;
};

// Track the `rank`-th (left to right) discontinuity: per snapshot, the cell
// interface maximizing the neighbor jump inside a window seeded by the
// previous position. Contiguous interfaces above min_jump count as one
// discontinuity when ranking. Throws TrackingError (naming the last good
// time) when the jump falls below min_jump.
ShockPath extract_shock_path(const FvGrid& grid, int rank, double min_jump);

// Mean absolute gap between a sampled trajectory and a reference path,
// linearly interpolated in time (clamped at the reference ends).
double l1_dl_error(const std::vector<double>& times, const std::vector<double>& pos,
                   const ShockPath& reference);

// Long-format CSV: t, x, u
void export_fv_csv(const FvGrid& grid, const std::string& path);

}  // namespace shocktrack
