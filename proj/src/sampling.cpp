#include "shocktrack/sampling.hpp"

#include <cmath>
#include <random>

#include "shocktrack/mlp.hpp"

namespace shocktrack {

SampleSet draw_samples(const SampleCounts& counts, double T, std::uint64_t seed) {
  if (counts.interior <= 0 || counts.initial <= 0 || counts.times <= 0 || counts.cone <= 0)
    throw ConfigError("sample counts must be positive");
  if (!(T > 0.0)) throw ConfigError("sampling needs a positive time horizon");

  std::mt19937_64 rng(seed);
  auto u01 = [&rng] { return uniform01(rng()); };

  SampleSet s;
  s.seed = seed;
  s.rect.reserve(std::size_t(counts.interior));
  for (int i = 0; i < counts.interior; ++i) s.rect.push_back({u01(), T * u01()});

  s.unit.reserve(std::size_t(counts.initial));
  for (int i = 0; i < counts.initial; ++i) s.unit.push_back(u01());

  s.times.reserve(std::size_t(counts.times));
  for (int i = 0; i < counts.times; ++i) s.times.push_back(T * u01());

  // Uniform over the triangle |x| <= t <= T: t = T sqrt(u) weights area
  // correctly; reject the sliver below t_min where cone subdomains are
  // degenerate.
  const double t_min = 1e-3 * T;
  s.cone.reserve(std::size_t(counts.cone));
  while (int(s.cone.size()) < counts.cone) {
    const double t = T * std::sqrt(u01());
    if (t < t_min) continue;
    const double x = t * (2.0 * u01() - 1.0);
    s.cone.push_back({x, t});
  }
  return s;
}

}  // namespace shocktrack
