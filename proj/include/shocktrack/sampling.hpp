#pragma once

#include <cstdint>
#include <vector>

#include "shocktrack/errors.hpp"

namespace shocktrack {

struct SamplePoint {
  double x = 0.0;  // reference abscissa
  double t = 0.0;  // local time
};

struct SampleCounts {
  int interior = 500;  // reference rectangle (0,1) x (0,T)
  int initial = 200;   // unit interval at t = 0
  int times = 200;     // time interval (0,T)
  int cone = 300;      // cone |x| <= t <= T, for system wave fans
};

// Training collocation points, drawn uniformly once per run and then fixed.
// The same reference-domain samples serve every subdomain (the transforms
// differ, the reference points need not). Cone samples avoid an initial
// band t < 1e-3 T where the wedge between waves has essentially no width.
struct SampleSet {
  std::vector<SamplePoint> rect;
  std::vector<double> unit;
  std::vector<double> times;
  std::vector<SamplePoint> cone;
  std::uint64_t seed = 0;
};

SampleSet draw_samples(const SampleCounts& counts, double T, std::uint64_t seed);

}  // namespace shocktrack
