#include "shocktrack/godunov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace shocktrack {

double godunov_flux(const FluxModel& f, double ul, double ur) {
  if (ul == ur) return scalar_flux(f, ul);
  const double lo = std::min(ul, ur), hi = std::max(ul, ur);
  double best = scalar_flux(f, ul);
  const double fr = scalar_flux(f, ur);
  const bool take_min = ul <= ur;
  if (take_min ? fr < best : fr > best) best = fr;
  for (double c : scalar_flux_critical_points(f, lo, hi)) {
    const double fc = scalar_flux(f, c);
    if (take_min ? fc < best : fc > best) best = fc;
  }
  return best;
}

namespace {

double cell_average(const ProblemSpec& spec, double xl, double xr) {
  // composite midpoint; resolves cells straddling a breakpoint
  const int k = 8;
  double s = 0;
  for (int i = 0; i < k; ++i) s += eval_initial(spec, xl + (xr - xl) * (i + 0.5) / k)[0];
  return s / k;
}

}  // namespace

FvGrid godunov_solve(const ProblemSpec& spec, const FvConfig& cfg) {
  if (!spec.flux.scalar()) throw ConfigError("finite-volume reference is scalar only");
  spec.validate();
  if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0) throw ConfigError("CFL number must be in (0, 1]");
  if (cfg.cells < 2) throw ConfigError("need at least two cells");
  if (cfg.snapshots < 2) throw ConfigError("need at least two snapshots");

  FvGrid g;
  g.a = spec.domain.a;
  g.b = spec.domain.b;
  g.cfl = cfg.cfl;
  const int n = cfg.cells;
  g.dx = (g.b - g.a) / n;
  g.centers.resize(std::size_t(n));
  for (int j = 0; j < n; ++j) g.centers[std::size_t(j)] = g.a + (j + 0.5) * g.dx;

  std::vector<double> u(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    u[std::size_t(j)] = cell_average(spec, g.a + j * g.dx, g.a + (j + 1) * g.dx);

  const double ghost_l = spec.initial.left_state[0];
  const double ghost_r = spec.initial.right_state[0];

  g.times.resize(std::size_t(cfg.snapshots));
  for (int k = 0; k < cfg.snapshots; ++k)
    g.times[std::size_t(k)] = spec.final_time * double(k) / (cfg.snapshots - 1);
  g.data.reserve(g.times.size());
  g.data.push_back(u);

  std::vector<double> flux(std::size_t(n) + 1);
  double t = 0;
  for (int k = 1; k < cfg.snapshots; ++k) {
    const double target = g.times[std::size_t(k)];
    while (t < target - 1e-15 * std::max(1.0, target)) {
      double amax = std::max(std::abs(scalar_flux_prime(spec.flux, ghost_l)),
                             std::abs(scalar_flux_prime(spec.flux, ghost_r)));
      for (double v : u) amax = std::max(amax, std::abs(scalar_flux_prime(spec.flux, v)));
      double dt = amax > 1e-14 ? cfg.cfl * g.dx / amax : target - t;
      dt = std::min(dt, target - t);

      const double ul_ghost = cfg.dirichlet ? ghost_l : u.front();
      const double ur_ghost = cfg.dirichlet ? ghost_r : u.back();
      flux[0] = godunov_flux(spec.flux, ul_ghost, u[0]);
      for (int j = 1; j < n; ++j)
        flux[std::size_t(j)] = godunov_flux(spec.flux, u[std::size_t(j) - 1], u[std::size_t(j)]);
      flux[std::size_t(n)] = godunov_flux(spec.flux, u[std::size_t(n) - 1], ur_ghost);

      const double r = dt / g.dx;
      for (int j = 0; j < n; ++j)
        u[std::size_t(j)] -= r * (flux[std::size_t(j) + 1] - flux[std::size_t(j)]);
      t += dt;
    }
    t = target;
    g.data.push_back(u);
  }
  return g;
}

namespace {

int argmax_jump(const std::vector<double>& u, int lo, int hi) {
  int best = lo;
  double bj = -1;
  for (int j = lo; j <= hi; ++j) {
    const double a = std::abs(u[std::size_t(j) + 1] - u[std::size_t(j)]);
    if (a > bj) {
      bj = a;
      best = j;
    }
  }
  return best;
}

}  // namespace

ShockPath extract_shock_path(const FvGrid& grid, int rank, double min_jump) {
  if (grid.data.empty()) throw ConfigError("empty grid");
  const int n = int(grid.data[0].size());
  if (rank < 0) throw ConfigError("negative discontinuity rank");

  // worst-case inter-snapshot travel in cells: snapshots are many CFL steps
  // apart, so derive the radius from the observed jump speed bound
  double amax = 0;
  for (double v : grid.data.front()) amax = std::max(amax, std::abs(v));
  const double dt_snap = grid.times.size() > 1 ? grid.times[1] - grid.times[0] : 0.0;

  ShockPath path;
  int prev = -1;
  for (std::size_t k = 0; k < grid.data.size(); ++k) {
    const std::vector<double>& u = grid.data[k];
    if (prev < 0) {
      // not yet locked: rank the jump clusters at this snapshot
      std::vector<int> reps;
      int j = 0;
      while (j < n - 1) {
        if (std::abs(u[std::size_t(j) + 1] - u[std::size_t(j)]) >= min_jump) {
          int end = j;
          while (end + 1 < n - 1 &&
                 std::abs(u[std::size_t(end) + 2] - u[std::size_t(end) + 1]) >= min_jump)
            ++end;
          reps.push_back(argmax_jump(u, j, end));
          j = end + 1;
        } else {
          ++j;
        }
      }
      if (int(reps.size()) <= rank) continue;  // discontinuity not formed yet
      prev = reps[std::size_t(rank)];
    } else {
      double vmax = amax;
      for (double v : u) vmax = std::max(vmax, std::abs(v));
      const int w = 3 + int(std::ceil(4.0 * vmax * dt_snap / grid.dx));
      const int lo = std::max(0, prev - w);
      const int hi = std::min(n - 2, prev + w);
      const int best = argmax_jump(u, lo, hi);
      if (std::abs(u[std::size_t(best) + 1] - u[std::size_t(best)]) < min_jump) {
        const double last_good = path.times.empty() ? grid.times[k - 1] : path.times.back();
        throw TrackingError("discontinuity lost after t = " + std::to_string(last_good));
      }
      prev = best;
    }
    path.times.push_back(grid.times[k]);
    path.pos.push_back(grid.a + (prev + 1) * grid.dx);
  }
  if (path.times.empty())
    throw TrackingError("no discontinuity of rank " + std::to_string(rank) + " found");
  return path;
}

double l1_dl_error(const std::vector<double>& times, const std::vector<double>& pos,
                   const ShockPath& reference) {
  if (times.size() != pos.size()) throw ConfigError("trajectory arrays differ in length");
  if (times.empty()) throw ConfigError("empty trajectory");
  if (reference.times.empty()) throw ConfigError("empty reference path");

  const auto ref_at = [&](double t) {
    const auto& rt = reference.times;
    if (t <= rt.front()) return reference.pos.front();
    if (t >= rt.back()) return reference.pos.back();
    const auto it = std::upper_bound(rt.begin(), rt.end(), t);
    const std::size_t i = std::size_t(it - rt.begin());
    const double w = (t - rt[i - 1]) / (rt[i] - rt[i - 1]);
    return (1 - w) * reference.pos[i - 1] + w * reference.pos[i];
  };

  double s = 0;
  for (std::size_t i = 0; i < times.size(); ++i) s += std::abs(pos[i] - ref_at(times[i]));
  return s / double(times.size());
}

void export_fv_csv(const FvGrid& grid, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  std::fprintf(f, "t,x,u\n");
  for (std::size_t k = 0; k < grid.data.size(); ++k)
    for (std::size_t j = 0; j < grid.data[k].size(); ++j)
      std::fprintf(f, "%.12g,%.12g,%.12g\n", grid.times[k], grid.centers[j], grid.data[k][j]);
  std::fclose(f);
}

}  // namespace shocktrack
