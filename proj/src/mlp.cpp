#include "shocktrack/mlp.hpp"

#include <cmath>
#include <random>

namespace shocktrack {

MlpParams MlpParams::init(Architecture a, std::uint64_t seed) {
  a.validate();
  MlpParams m;
  m.arch = a;
  m.flat.assign(std::size_t(a.param_count()), 0.0);
  std::mt19937_64 rng(seed);
  int off = 0;
  for (int layer = 1; layer <= a.layers(); ++layer) {
    const int rows = a.sizes[layer];
    const int cols = a.sizes[layer - 1];
    const double bound = std::sqrt(6.0 / double(rows + cols));
    for (int i = 0; i < rows * cols; ++i)
      m.flat[std::size_t(off + i)] = bound * (2.0 * uniform01(rng()) - 1.0);
    // biases stay zero
    off += rows * (cols + 1);
  }
  return m;
}

}  // namespace shocktrack
