#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "shocktrack/errors.hpp"
#include "shocktrack/small_vec.hpp"

namespace shocktrack {

// Hyperbolic flux functions f(u) for u_t + f(u)_x = 0.
//
// Scalar kinds: Burgers u^2/2, the concave quadratic 4u(2-u), and arbitrary
// polynomials. System kinds: 1D shallow water (h, hu) and the 1D Euler
// equations (rho, rho u, rho E). Evaluation is templated on the scalar type
// so the same expressions run on doubles, on autodiff variables inside loss
// graphs, and on std::complex for derivative checks in tests.

enum class FluxKind {
  kBurgers,
  kQuadratic,     // f(u) = 4u(2-u)
  kPolynomial,    // f(u) = sum_i coeffs[i] u^i
  kShallowWater,  // states (h, hu)
  kEuler,         // states (rho, rho u, rho E)
};

// Positivity floor for depth, density and internal energy.
inline constexpr double kAdmissibleFloor = 1e-12;

struct FluxModel {
  FluxKind kind = FluxKind::kBurgers;
  double gravity = 1.0;  // shallow water only
  double gamma = 1.4;    // Euler only
  std::vector<double> coeffs;  // polynomial only, ascending powers

  int components() const {
    switch (kind) {
      case FluxKind::kShallowWater: return 2;
      case FluxKind::kEuler: return 3;
      default: return 1;
    }
  }
  bool scalar() const { return components() == 1; }

  static FluxModel burgers() { return FluxModel{}; }
  static FluxModel quadratic() { return FluxModel{FluxKind::kQuadratic}; }
  static FluxModel polynomial(std::vector<double> c) {
    FluxModel m{FluxKind::kPolynomial};
    m.coeffs = std::move(c);
    return m;
  }
  static FluxModel shallow_water(double g) {
    FluxModel m{FluxKind::kShallowWater};
    m.gravity = g;
    return m;
  }
  static FluxModel euler(double gamma) {
    FluxModel m{FluxKind::kEuler};
    m.gamma = gamma;
    return m;
  }
};

// Scalar flux value on a generic scalar type.
template <class S>
S scalar_flux(const FluxModel& f, const S& u) {
  switch (f.kind) {
    case FluxKind::kBurgers:
      return 0.5 * (u * u);
    case FluxKind::kQuadratic:
      return 8.0 * u - 4.0 * (u * u);
    case FluxKind::kPolynomial: {
      if (f.coeffs.empty()) return u * 0.0;
      S acc = u * 0.0 + f.coeffs.back();
      for (std::size_t i = f.coeffs.size() - 1; i-- > 0;) acc = acc * u + f.coeffs[i];
      return acc;
    }
    default:
      throw ConfigError("scalar_flux called on a system flux");
  }
}

// Euler pressure from conserved state (rho, rho u, rho E).
template <class S>
S euler_pressure(const FluxModel& f, const SmallVec<S, 3>& q) {
  return (f.gamma - 1.0) * (q[2] - 0.5 * (q[1] * q[1]) / q[0]);
}

template <class S>
SmallVec<S, 3> flux_eval(const FluxModel& f, const SmallVec<S, 3>& q) {
  SmallVec<S, 3> out(q.size());
  switch (f.kind) {
    case FluxKind::kBurgers:
    case FluxKind::kQuadratic:
    case FluxKind::kPolynomial:
      out[0] = scalar_flux(f, q[0]);
      return out;
    case FluxKind::kShallowWater: {
      // f(h, q) = (q, q^2/h + g h^2/2)
      out[0] = q[1];
      out[1] = (q[1] * q[1]) / q[0] + 0.5 * f.gravity * (q[0] * q[0]);
      return out;
    }
    case FluxKind::kEuler: {
      S p = euler_pressure(f, q);
      S u = q[1] / q[0];
      out[0] = q[1];
      out[1] = q[1] * u + p;
      out[2] = (q[2] + p) * u;
      return out;
    }
  }
  throw ConfigError("unknown flux kind");
}

// Unit right eigenvector of family k (1-based) as a template expression, so
// wave-curve defects can be differentiated through it. Every family's first
// component is positive by construction, which keeps the orientation stable
// while a curve trains.
template <class S>
SmallVec<S, 3> eig_vector(const FluxModel& f, const SmallVec<S, 3>& q, int family) {
  using std::sqrt;
  switch (f.kind) {
    case FluxKind::kBurgers:
    case FluxKind::kQuadratic:
    case FluxKind::kPolynomial: {
      SmallVec<S, 3> r(1);
      r[0] = q[0] * 0.0 + 1.0;
      return r;
    }
    case FluxKind::kShallowWater: {
      const S u = q[1] / q[0];
      const S c = sqrt(f.gravity * q[0]);
      const S lam = family == 1 ? u - c : u + c;
      const S n = sqrt(lam * lam + 1.0);
      SmallVec<S, 3> r(2);
      r[0] = 1.0 / n;
      r[1] = lam / n;
      return r;
    }
    case FluxKind::kEuler: {
      const S u = q[1] / q[0];
      const S p = euler_pressure(f, q);
      const S c = sqrt(f.gamma * p / q[0]);
      const S H = (q[2] + p) / q[0];
      SmallVec<S, 3> r(3);
      if (family == 1) {
        r[1] = u - c;
        r[2] = H - u * c;
      } else if (family == 2) {
        r[1] = u;
        r[2] = 0.5 * (u * u);
      } else {
        r[1] = u + c;
        r[2] = H + u * c;
      }
      const S n = sqrt(r[1] * r[1] + r[2] * r[2] + 1.0);
      r[0] = 1.0 / n;
      r[1] = r[1] / n;
      r[2] = r[2] / n;
      return r;
    }
  }
  throw ConfigError("unknown flux kind");
}

// Scalar characteristic speed f'(u), closed form per kind.
double scalar_flux_prime(const FluxModel& f, double u);

// Second derivative f''(u), used by breaking-time estimates.
double scalar_flux_second(const FluxModel& f, double u);

// Interior critical points of the scalar flux on [lo, hi] (f' sign changes,
// refined by bisection). Needed by the Godunov min/max flux.
std::vector<double> scalar_flux_critical_points(const FluxModel& f, double lo, double hi);

// Throws AdmissibilityError if depth, density or internal energy is at or
// below the positivity floor. No-op for scalar kinds.
void check_admissible(const FluxModel& f, const StateVec& q);

struct EigenPairs {
  int m = 1;
  SmallVec<double, 3> lambda;          // ascending
  std::array<StateVec, 3> r;           // unit right eigenvectors
};

// Analytic eigendecomposition of f'(u). Eigenvectors are unit length with
// the first nonzero component positive. Throws HyperbolicityError when the
// eigenvalues are not real and distinct (systems) and AdmissibilityError for
// inadmissible states.
EigenPairs eval_eigen(const FluxModel& f, const StateVec& q);

// Rows are left eigenvectors l_k with l_j . r_k = delta_jk (inverse of the
// right-eigenvector matrix). Used to project boundary mismatches onto
// incoming characteristic fields.
std::array<StateVec, 3> eval_left_eigen(const FluxModel& f, const StateVec& q);

std::string flux_kind_name(FluxKind k);

}  // namespace shocktrack
