#pragma once

#include <array>
#include <cmath>

#include "shocktrack/tape.hpp"

namespace shocktrack {

// First-order jet: a value together with K directional derivatives,
// propagated forward through arithmetic. The scalar type S is either plain
// double (cheap evaluation) or ad::Var (recording on a tape, which makes the
// propagated derivatives differentiable in their own right -- that is how
// parameter gradients of losses containing d/dx-of-network terms are
// obtained). Only first derivatives are carried; there is deliberately no
// second-order support.
template <class S, int K>
struct Jet {
  S v{};
  std::array<S, K> d{};
};

namespace detail {
inline double zero_like(double) { return 0.0; }
inline ad::Var zero_like(ad::Var x) { return x.tape->constant(0.0); }
inline double const_like(double, double c) { return c; }
inline ad::Var const_like(ad::Var x, double c) { return x.tape->constant(c); }
}  // namespace detail

// An input coordinate: derivative 1 along direction `dir`, 0 elsewhere.
template <int K, class S>
Jet<S, K> jet_input(S v, int dir) {
  Jet<S, K> j;
  j.v = v;
  for (int k = 0; k < K; ++k) j.d[k] = detail::const_like(v, k == dir ? 1.0 : 0.0);
  return j;
}

// A value with no dependence on the seeded directions.
template <int K, class S>
Jet<S, K> jet_const(S v) {
  Jet<S, K> j;
  j.v = v;
  for (int k = 0; k < K; ++k) j.d[k] = detail::zero_like(v);
  return j;
}

template <class S, int K>
Jet<S, K> operator+(const Jet<S, K>& x, const Jet<S, K>& y) {
  Jet<S, K> r;
  r.v = x.v + y.v;
  for (int k = 0; k < K; ++k) r.d[k] = x.d[k] + y.d[k];
  return r;
}

template <class S, int K>
Jet<S, K> operator-(const Jet<S, K>& x, const Jet<S, K>& y) {
  Jet<S, K> r;
  r.v = x.v - y.v;
  for (int k = 0; k < K; ++k) r.d[k] = x.d[k] - y.d[k];
  return r;
}

template <class S, int K>
Jet<S, K> operator*(const Jet<S, K>& x, const Jet<S, K>& y) {
  Jet<S, K> r;
  r.v = x.v * y.v;
  for (int k = 0; k < K; ++k) r.d[k] = x.d[k] * y.v + x.v * y.d[k];
  return r;
}

template <class S, int K>
Jet<S, K> operator/(const Jet<S, K>& x, const Jet<S, K>& y) {
  Jet<S, K> r;
  r.v = x.v / y.v;
  for (int k = 0; k < K; ++k) r.d[k] = (x.d[k] - r.v * y.d[k]) / y.v;
  return r;
}

template <class S, int K>
Jet<S, K> operator-(const Jet<S, K>& x) {
  Jet<S, K> r;
  r.v = -x.v;
  for (int k = 0; k < K; ++k) r.d[k] = -x.d[k];
  return r;
}

// Scalar (S) and double mixes.
template <class S, int K>
Jet<S, K> operator+(const Jet<S, K>& x, const S& c) {
  Jet<S, K> r = x;
  r.v = x.v + c;
  return r;
}
template <class S, int K>
Jet<S, K> operator+(const S& c, const Jet<S, K>& x) { return x + c; }

template <class S, int K>
Jet<S, K> operator-(const Jet<S, K>& x, const S& c) {
  Jet<S, K> r = x;
  r.v = x.v - c;
  return r;
}
template <class S, int K>
Jet<S, K> operator-(const S& c, const Jet<S, K>& x) {
  Jet<S, K> r = -x;
  r.v = c - x.v;
  return r;
}

template <class S, int K>
Jet<S, K> operator*(const Jet<S, K>& x, const S& c) {
  Jet<S, K> r;
  r.v = x.v * c;
  for (int k = 0; k < K; ++k) r.d[k] = x.d[k] * c;
  return r;
}
template <class S, int K>
Jet<S, K> operator*(const S& c, const Jet<S, K>& x) { return x * c; }

template <int K>
Jet<ad::Var, K> operator+(const Jet<ad::Var, K>& x, double c) {
  Jet<ad::Var, K> r = x;
  r.v = x.v + c;
  return r;
}
template <int K>
Jet<ad::Var, K> operator+(double c, const Jet<ad::Var, K>& x) { return x + c; }
template <int K>
Jet<ad::Var, K> operator-(const Jet<ad::Var, K>& x, double c) { return x + (-c); }
template <int K>
Jet<ad::Var, K> operator-(double c, const Jet<ad::Var, K>& x) {
  Jet<ad::Var, K> r = -x;
  r.v = c - x.v;
  return r;
}
template <int K>
Jet<ad::Var, K> operator*(const Jet<ad::Var, K>& x, double c) {
  Jet<ad::Var, K> r;
  r.v = x.v * c;
  for (int k = 0; k < K; ++k) r.d[k] = x.d[k] * c;
  return r;
}
template <int K>
Jet<ad::Var, K> operator*(double c, const Jet<ad::Var, K>& x) { return x * c; }
template <int K>
Jet<ad::Var, K> operator/(const Jet<ad::Var, K>& x, double c) { return x * (1.0 / c); }

using std::tanh;
using std::sqrt;

inline double sqr(double x) { return x * x; }

template <class S, int K>
Jet<S, K> tanh(const Jet<S, K>& x) {
  Jet<S, K> r;
  r.v = tanh(x.v);
  // d tanh = (1 - tanh^2) dx
  for (int k = 0; k < K; ++k) r.d[k] = (1.0 - sqr(r.v)) * x.d[k];
  return r;
}

template <class S, int K>
Jet<S, K> sqrt(const Jet<S, K>& x) {
  Jet<S, K> r;
  r.v = sqrt(x.v);
  for (int k = 0; k < K; ++k) r.d[k] = x.d[k] / (2.0 * r.v);
  return r;
}

template <class S, int K>
Jet<S, K> sqr(const Jet<S, K>& x) {
  Jet<S, K> r;
  r.v = sqr(x.v);
  for (int k = 0; k < K; ++k) r.d[k] = 2.0 * x.v * x.d[k];
  return r;
}

}  // namespace shocktrack
