#pragma once

#include <cstdint>
#include <vector>

#include "shocktrack/errors.hpp"
#include "shocktrack/jet.hpp"
#include "shocktrack/small_vec.hpp"
#include "shocktrack/tape.hpp"

namespace shocktrack {

// Fully connected feed-forward network with tanh hidden activations and an
// affine last layer. sizes = [n_0, n_1, ..., n_l] from input to output.
struct Architecture {
  std::vector<int> sizes;

  int inputs() const { return sizes.front(); }
  int outputs() const { return sizes.back(); }
  int layers() const { return int(sizes.size()) - 1; }

  // Flat parameter count: each layer holds an n_i x n_{i-1} weight block
  // (row major) followed by n_i biases.
  int param_count() const {
    int n = 0;
    for (std::size_t i = 1; i < sizes.size(); ++i) n += sizes[i] * (sizes[i - 1] + 1);
    return n;
  }

  void validate() const {
    if (sizes.size() < 2) throw ConfigError("network needs at least two layers");
    for (int s : sizes)
      if (s < 1) throw ConfigError("network layer sizes must be positive");
  }

  friend bool operator==(const Architecture& a, const Architecture& b) {
    return a.sizes == b.sizes;
  }
};

// Deterministic uniform double in [0, 1) from a raw 64-bit draw; avoids the
// implementation-defined std::uniform_real_distribution so that a seed
// reproduces bit-identical parameters on any platform.
inline double uniform01(std::uint64_t raw) {
  return double(raw >> 11) * 0x1.0p-53;
}

struct MlpParams {
  Architecture arch;
  std::vector<double> flat;

  // Offset of the weight W[row, col] of layer i (1-based layer index as in
  // sizes); biases follow the weight block.
  int weight_index(int layer, int row, int col) const {
    int off = 0;
    for (int i = 1; i < layer; ++i) off += arch.sizes[i] * (arch.sizes[i - 1] + 1);
    return off + row * arch.sizes[layer - 1] + col;
  }
  int bias_index(int layer, int row) const {
    int off = 0;
    for (int i = 1; i < layer; ++i) off += arch.sizes[i] * (arch.sizes[i - 1] + 1);
    return off + arch.sizes[layer] * arch.sizes[layer - 1] + row;
  }

  double& weight(int layer, int row, int col) { return flat[weight_index(layer, row, col)]; }
  double& bias(int layer, int row) { return flat[bias_index(layer, row)]; }
  double weight(int layer, int row, int col) const { return flat[weight_index(layer, row, col)]; }
  double bias(int layer, int row) const { return flat[bias_index(layer, row)]; }

  // Weights uniform in +-sqrt(6/(n_in + n_out)) per layer, biases zero.
  static MlpParams init(Architecture a, std::uint64_t seed);
};

// A network whose parameters live as scalars of type S: doubles for plain
// evaluation, tape variables for training.
template <class S>
struct NetView {
  const Architecture* arch = nullptr;
  const S* p = nullptr;
};

inline NetView<double> view(const MlpParams& m) { return {&m.arch, m.flat.data()}; }

// Tape binding: every flat parameter becomes a leaf. slot_base is the leaf
// slot of flat[0]; gradients and updates address leaves through it.
struct TapedNet {
  Architecture arch;
  std::vector<ad::Var> params;
  std::size_t slot_base = 0;

  NetView<ad::Var> view() const { return {&arch, params.data()}; }
};

inline TapedNet bind(ad::Tape& tape, const MlpParams& m) {
  TapedNet net;
  net.arch = m.arch;
  net.slot_base = tape.leaf_count();
  net.params.reserve(m.flat.size());
  for (double v : m.flat) net.params.push_back(tape.leaf(v));
  return net;
}

// Forward pass carrying K directional derivatives of the inputs. Inputs are
// jets over S; outputs one jet per output component (at most 3 here).
// Works at record time on Vars and directly on doubles.
template <int K, class S, std::size_t NIn>
SmallVec<Jet<S, K>, 3> net_eval(const NetView<S>& net, const std::array<Jet<S, K>, NIn>& in) {
  const Architecture& a = *net.arch;
  if (int(NIn) != a.inputs()) throw ConfigError("network input arity mismatch");
  std::vector<Jet<S, K>> cur(in.begin(), in.end());
  std::vector<Jet<S, K>> next;
  const S* p = net.p;
  int off = 0;
  for (int layer = 1; layer <= a.layers(); ++layer) {
    const int rows = a.sizes[layer];
    const int cols = a.sizes[layer - 1];
    next.assign(std::size_t(rows), Jet<S, K>{});
    const S* w = p + off;
    const S* b = p + off + rows * cols;
    for (int r = 0; r < rows; ++r) {
      Jet<S, K> acc = jet_const<K>(b[r]);
      for (int c = 0; c < cols; ++c) acc = acc + cur[std::size_t(c)] * w[r * cols + c];
      next[std::size_t(r)] = layer == a.layers() ? acc : tanh(acc);
    }
    cur.swap(next);
    off += rows * (cols + 1);
  }
  SmallVec<Jet<S, K>, 3> out(std::size_t(a.outputs()));
  for (int i = 0; i < a.outputs(); ++i) out[i] = cur[std::size_t(i)];
  return out;
}

// Space-time field evaluation on doubles: value plus d/dx and d/dt.
struct FieldJet {
  StateVec value;
  StateVec dx;
  StateVec dt;
};

inline FieldJet eval_field(const MlpParams& m, double x, double t) {
  const std::array<Jet<double, 2>, 2> in{jet_input<2>(x, 0), jet_input<2>(t, 1)};
  const auto out = net_eval(view(m), in);
  FieldJet r;
  r.value.resize(out.size());
  r.dx.resize(out.size());
  r.dt.resize(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    r.value[i] = out[i].v;
    r.dx[i] = out[i].d[0];
    r.dt[i] = out[i].d[1];
  }
  return r;
}

}  // namespace shocktrack
