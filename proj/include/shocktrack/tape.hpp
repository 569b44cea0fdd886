#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

namespace shocktrack::ad {

// Reverse-mode automatic differentiation on a write-once tape.
//
// The tape is a linearized computation graph: each node stores an opcode,
// up to two parent indices and one immediate constant. Recording happens
// once (through the Var operator overloads); afterwards the same graph can
// be re-evaluated cheaply for new leaf values with forward(), and
// differentiated with backward(). Training loops exploit this: the loss
// graph over a fixed sample set is recorded a single time and then replayed
// every epoch, so the per-epoch cost is two linear sweeps over flat arrays.
//
// Local partial derivatives are recomputed in backward() from stored node
// values instead of being materialized at record time; this keeps a node at
// 25 bytes and the sweeps memory-bound rather than capacity-bound.
//
// Constant subexpressions fold at record time (const op const -> const,
// x*1 -> x, x+0 -> x, x*0 -> 0), which matters because directional-seed
// arithmetic in jet propagation multiplies by literal zeros and ones.

enum class Op : std::uint8_t {
  kConst,
  kLeaf,
  kAdd,   // a + b
  kSub,   // a - b
  kMul,   // a * b
  kDiv,   // a / b
  kNeg,   // -a
  kTanh,  // tanh(a)
  kSqrt,  // sqrt(a)
  kSqr,   // a * a
  kAbs,   // |a|
  kAddC,  // a + c
  kMulC,  // a * c
  kRSubC, // c - a
  kRDivC, // c / a
};

class Tape;

// Lightweight handle into a Tape. Invalidated only by Tape destruction.
struct Var {
  std::int32_t idx = -1;
  Tape* tape = nullptr;
  bool valid() const { return idx >= 0; }
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  void reserve(std::size_t n) {
    op_.reserve(n);
    a_.reserve(n);
    b_.reserve(n);
    aux_.reserve(n);
    val_.reserve(n);
  }

  std::size_t size() const { return op_.size(); }

  Var leaf(double v) {
    Var x = emit(Op::kLeaf, -1, -1, 0.0, v);
    leaves_.push_back(x.idx);
    return x;
  }

  Var constant(double c) { return emit(Op::kConst, -1, -1, 0.0, c); }

  bool is_const(Var x) const { return op_[x.idx] == Op::kConst; }
  double value(Var x) const { return val_[x.idx]; }

  // Number of leaves created so far; leaf slot i is the i-th leaf() call.
  std::size_t leaf_count() const { return leaves_.size(); }
  void set_leaf(std::size_t slot, double v) { val_[leaves_[slot]] = v; }
  double leaf_value(std::size_t slot) const { return val_[leaves_[slot]]; }
  Var leaf_var(std::size_t slot) const {
    return Var{leaves_[slot], const_cast<Tape*>(this)};
  }

  // Recompute every node value from the current leaf/constant values.
  void forward() {
    const std::size_t n = op_.size();
    double* v = val_.data();
    for (std::size_t i = 0; i < n; ++i) {
      const std::int32_t a = a_[i];
      const std::int32_t b = b_[i];
      switch (op_[i]) {
        case Op::kConst:
        case Op::kLeaf:
          break;
        case Op::kAdd:  v[i] = v[a] + v[b]; break;
        case Op::kSub:  v[i] = v[a] - v[b]; break;
        case Op::kMul:  v[i] = v[a] * v[b]; break;
        case Op::kDiv:  v[i] = v[a] / v[b]; break;
        case Op::kNeg:  v[i] = -v[a]; break;
        case Op::kTanh: v[i] = std::tanh(v[a]); break;
        case Op::kSqrt: v[i] = std::sqrt(v[a]); break;
        case Op::kSqr:  v[i] = v[a] * v[a]; break;
        case Op::kAbs:  v[i] = std::fabs(v[a]); break;
        case Op::kAddC: v[i] = v[a] + aux_[i]; break;
        case Op::kMulC: v[i] = v[a] * aux_[i]; break;
        case Op::kRSubC: v[i] = aux_[i] - v[a]; break;
        case Op::kRDivC: v[i] = aux_[i] / v[a]; break;
      }
    }
  }

  // Reverse sweep seeding d(root)/d(root) = 1. Adjoints of all nodes are
  // available afterwards through adjoint(); leaf adjoints are the gradient.
  void backward(Var root) {
    assert(root.valid());
    const std::size_t n = op_.size();
    adj_.assign(n, 0.0);
    adj_[root.idx] = 1.0;
    const double* v = val_.data();
    double* g = adj_.data();
    for (std::size_t ii = n; ii-- > 0;) {
      const double gi = g[ii];
      if (gi == 0.0) continue;
      const std::int32_t a = a_[ii];
      const std::int32_t b = b_[ii];
      switch (op_[ii]) {
        case Op::kConst:
        case Op::kLeaf:
          break;
        case Op::kAdd:
          g[a] += gi;
          g[b] += gi;
          break;
        case Op::kSub:
          g[a] += gi;
          g[b] -= gi;
          break;
        case Op::kMul:
          g[a] += gi * v[b];
          g[b] += gi * v[a];
          break;
        case Op::kDiv:
          g[a] += gi / v[b];
          g[b] -= gi * v[ii] / v[b];
          break;
        case Op::kNeg:  g[a] -= gi; break;
        case Op::kTanh: g[a] += gi * (1.0 - v[ii] * v[ii]); break;
        case Op::kSqrt: g[a] += gi * 0.5 / v[ii]; break;
        case Op::kSqr:  g[a] += gi * 2.0 * v[a]; break;
        case Op::kAbs:  g[a] += v[a] < 0.0 ? -gi : gi; break;
        case Op::kAddC: g[a] += gi; break;
        case Op::kMulC: g[a] += gi * aux_[ii]; break;
        case Op::kRSubC: g[a] -= gi; break;
        case Op::kRDivC: g[a] -= gi * v[ii] / v[a]; break;
      }
    }
  }

  double adjoint(Var x) const { return adj_[x.idx]; }
  double leaf_adjoint(std::size_t slot) const { return adj_[leaves_[slot]]; }

  // Record-time emission. Exposed for the operator overloads below.
  Var emit(Op o, std::int32_t a, std::int32_t b, double aux, double v) {
    op_.push_back(o);
    a_.push_back(a);
    b_.push_back(b);
    aux_.push_back(aux);
    val_.push_back(v);
    return Var{static_cast<std::int32_t>(op_.size() - 1), this};
  }

 private:
  std::vector<Op> op_;
  std::vector<std::int32_t> a_, b_;
  std::vector<double> aux_;
  std::vector<double> val_;
  std::vector<double> adj_;
  std::vector<std::int32_t> leaves_;
};

// --- record-time arithmetic -------------------------------------------------

inline Var operator+(Var x, Var y) {
  Tape* t = x.tape;
  assert(t && t == y.tape);
  if (t->is_const(x) && t->is_const(y)) return t->constant(t->value(x) + t->value(y));
  if (t->is_const(x)) {
    if (t->value(x) == 0.0) return y;
    return t->emit(Op::kAddC, y.idx, -1, t->value(x), t->value(y) + t->value(x));
  }
  if (t->is_const(y)) {
    if (t->value(y) == 0.0) return x;
    return t->emit(Op::kAddC, x.idx, -1, t->value(y), t->value(x) + t->value(y));
  }
  return t->emit(Op::kAdd, x.idx, y.idx, 0.0, t->value(x) + t->value(y));
}

inline Var operator-(Var x, Var y) {
  Tape* t = x.tape;
  assert(t && t == y.tape);
  if (t->is_const(x) && t->is_const(y)) return t->constant(t->value(x) - t->value(y));
  if (t->is_const(y)) {
    if (t->value(y) == 0.0) return x;
    return t->emit(Op::kAddC, x.idx, -1, -t->value(y), t->value(x) - t->value(y));
  }
  if (t->is_const(x))
    return t->emit(Op::kRSubC, y.idx, -1, t->value(x), t->value(x) - t->value(y));
  return t->emit(Op::kSub, x.idx, y.idx, 0.0, t->value(x) - t->value(y));
}

inline Var operator*(Var x, Var y) {
  Tape* t = x.tape;
  assert(t && t == y.tape);
  if (t->is_const(x) && t->is_const(y)) return t->constant(t->value(x) * t->value(y));
  if (t->is_const(x)) {
    const double c = t->value(x);
    if (c == 0.0) return t->constant(0.0);
    if (c == 1.0) return y;
    return t->emit(Op::kMulC, y.idx, -1, c, c * t->value(y));
  }
  if (t->is_const(y)) {
    const double c = t->value(y);
    if (c == 0.0) return t->constant(0.0);
    if (c == 1.0) return x;
    return t->emit(Op::kMulC, x.idx, -1, c, t->value(x) * c);
  }
  if (x.idx == y.idx) return t->emit(Op::kSqr, x.idx, -1, 0.0, t->value(x) * t->value(x));
  return t->emit(Op::kMul, x.idx, y.idx, 0.0, t->value(x) * t->value(y));
}

inline Var operator/(Var x, Var y) {
  Tape* t = x.tape;
  assert(t && t == y.tape);
  if (t->is_const(x) && t->is_const(y)) return t->constant(t->value(x) / t->value(y));
  if (t->is_const(y)) {
    const double c = t->value(y);
    if (c == 1.0) return x;
    return t->emit(Op::kMulC, x.idx, -1, 1.0 / c, t->value(x) / c);
  }
  if (t->is_const(x)) {
    if (t->value(x) == 0.0) return t->constant(0.0);
    return t->emit(Op::kRDivC, y.idx, -1, t->value(x), t->value(x) / t->value(y));
  }
  return t->emit(Op::kDiv, x.idx, y.idx, 0.0, t->value(x) / t->value(y));
}

inline Var operator-(Var x) {
  Tape* t = x.tape;
  if (t->is_const(x)) return t->constant(-t->value(x));
  return t->emit(Op::kNeg, x.idx, -1, 0.0, -t->value(x));
}

inline Var operator+(Var x, double c) { return x + x.tape->constant(c); }
inline Var operator+(double c, Var x) { return x + c; }
inline Var operator-(Var x, double c) { return x + (-c); }
inline Var operator-(double c, Var x) { return x.tape->constant(c) - x; }
inline Var operator*(Var x, double c) { return x * x.tape->constant(c); }
inline Var operator*(double c, Var x) { return x * c; }
inline Var operator/(Var x, double c) { return x * (1.0 / c); }
inline Var operator/(double c, Var x) { return x.tape->constant(c) / x; }

inline Var tanh(Var x) {
  Tape* t = x.tape;
  if (t->is_const(x)) return t->constant(std::tanh(t->value(x)));
  return t->emit(Op::kTanh, x.idx, -1, 0.0, std::tanh(t->value(x)));
}

inline Var sqrt(Var x) {
  Tape* t = x.tape;
  if (t->is_const(x)) return t->constant(std::sqrt(t->value(x)));
  return t->emit(Op::kSqrt, x.idx, -1, 0.0, std::sqrt(t->value(x)));
}

inline Var sqr(Var x) {
  Tape* t = x.tape;
  if (t->is_const(x)) return t->constant(t->value(x) * t->value(x));
  return t->emit(Op::kSqr, x.idx, -1, 0.0, t->value(x) * t->value(x));
}

inline Var abs(Var x) {
  Tape* t = x.tape;
  if (t->is_const(x)) return t->constant(std::fabs(t->value(x)));
  return t->emit(Op::kAbs, x.idx, -1, 0.0, std::fabs(t->value(x)));
}

}  // namespace shocktrack::ad
