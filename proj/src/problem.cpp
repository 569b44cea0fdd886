#include "shocktrack/problem.hpp"

#include <algorithm>
#include <cmath>

namespace shocktrack {

void ProblemSpec::validate() const {
  if (!(domain.b > domain.a)) throw ConfigError("domain must have b > a");
  if (!(final_time > 0.0)) throw ConfigError("final time must be positive");
  const auto& bp = initial.breakpoints;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    if (bp[i] <= domain.a || bp[i] >= domain.b)
      throw ConfigError("breakpoints must lie strictly inside the domain");
    if (i > 0 && !(bp[i] > bp[i - 1]))
      throw ConfigError("breakpoints must be strictly increasing");
  }
  if (initial.profiles.size() != bp.size() + 1)
    throw ConfigError("need exactly one profile per interval");
  const int m = flux.components();
  for (const auto& p : initial.profiles)
    if (p.components() != m)
      throw ConfigError("profile component count does not match the flux");
  if (int(initial.left_state.size()) != m || int(initial.right_state.size()) != m)
    throw ConfigError("boundary state component count does not match the flux");
  if (!wave_counts.empty()) {
    if (wave_counts.size() != bp.size())
      throw ConfigError("need one wave count per breakpoint");
    for (int w : wave_counts)
      if (w < 1 || w > m) throw ConfigError("wave count must be in [1, m]");
  }
  for (std::size_t i = 0; i < artificial.size(); ++i) {
    const double x = artificial[i];
    if (x <= domain.a || x >= domain.b)
      throw ConfigError("artificial lines must lie strictly inside the domain");
    if (i > 0 && !(x > artificial[i - 1]))
      throw ConfigError("artificial lines must be strictly increasing");
    if (std::binary_search(bp.begin(), bp.end(), x))
      throw ConfigError("artificial lines must not coincide with breakpoints");
  }
}

StateVec eval_initial(const ProblemSpec& spec, double x) {
  if (x < spec.domain.a || x > spec.domain.b)
    throw DomainError("initial data queried outside the domain");
  const auto& bp = spec.initial.breakpoints;
  // lower_bound: first breakpoint >= x, so x exactly on a breakpoint picks
  // the interval to its left.
  const std::size_t idx = std::size_t(std::lower_bound(bp.begin(), bp.end(), x) - bp.begin());
  return spec.initial.profiles[idx].eval(x);
}

double initial_total_variation(const ProblemSpec& spec) {
  constexpr int kGrid = 4096;
  double tv = 0.0;
  StateVec prev = eval_initial(spec, spec.domain.a);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = spec.domain.a + (spec.domain.b - spec.domain.a) * double(i) / kGrid;
    const StateVec cur = eval_initial(spec, x);
    for (std::size_t c = 0; c < cur.size(); ++c) tv += std::fabs(cur[c] - prev[c]);
    prev = cur;
  }
  // Grid sampling straddles each interior jump, so discontinuities are
  // already counted; no separate breakpoint pass needed.
  return tv;
}

}  // namespace shocktrack
