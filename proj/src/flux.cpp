#include "shocktrack/flux.hpp"

#include <algorithm>
#include <cmath>

namespace shocktrack {

double scalar_flux_prime(const FluxModel& f, double u) {
  switch (f.kind) {
    case FluxKind::kBurgers: return u;
    case FluxKind::kQuadratic: return 8.0 - 8.0 * u;
    case FluxKind::kPolynomial: {
      if (f.coeffs.size() < 2) return 0.0;
      double acc = f.coeffs.back() * double(f.coeffs.size() - 1);
      for (std::size_t i = f.coeffs.size() - 1; i-- > 1;) acc = acc * u + f.coeffs[i] * double(i);
      return acc;
    }
    default:
      throw ConfigError("scalar_flux_prime called on a system flux");
  }
}

double scalar_flux_second(const FluxModel& f, double u) {
  switch (f.kind) {
    case FluxKind::kBurgers: return 1.0;
    case FluxKind::kQuadratic: return -8.0;
    case FluxKind::kPolynomial: {
      if (f.coeffs.size() < 3) return 0.0;
      double acc = f.coeffs.back() * double((f.coeffs.size() - 1) * (f.coeffs.size() - 2));
      for (std::size_t i = f.coeffs.size() - 1; i-- > 2;) acc = acc * u + f.coeffs[i] * double(i * (i - 1));
      return acc;
    }
    default:
      throw ConfigError("scalar_flux_second called on a system flux");
  }
}

std::vector<double> scalar_flux_critical_points(const FluxModel& f, double lo, double hi) {
  std::vector<double> roots;
  if (!(hi > lo)) return roots;
  switch (f.kind) {
    case FluxKind::kBurgers:
      if (lo < 0.0 && 0.0 < hi) roots.push_back(0.0);
      return roots;
    case FluxKind::kQuadratic:
      if (lo < 1.0 && 1.0 < hi) roots.push_back(1.0);
      return roots;
    case FluxKind::kPolynomial: {
      // Scan f' for sign changes, refine each bracket by bisection.
      constexpr int kScan = 256;
      double prev_u = lo;
      double prev_d = scalar_flux_prime(f, lo);
      for (int i = 1; i <= kScan; ++i) {
        const double u = lo + (hi - lo) * double(i) / kScan;
        const double d = scalar_flux_prime(f, u);
        if (prev_d == 0.0 && prev_u > lo) roots.push_back(prev_u);
        if (prev_d * d < 0.0) {
          double a = prev_u, b = u;
          double da = prev_d;
          for (int it = 0; it < 80; ++it) {
            const double m = 0.5 * (a + b);
            const double dm = scalar_flux_prime(f, m);
            if (da * dm <= 0.0) b = m; else { a = m; da = dm; }
          }
          roots.push_back(0.5 * (a + b));
        }
        prev_u = u;
        prev_d = d;
      }
      return roots;
    }
    default:
      throw ConfigError("critical points only defined for scalar fluxes");
  }
}

void check_admissible(const FluxModel& f, const StateVec& q) {
  switch (f.kind) {
    case FluxKind::kShallowWater:
      if (!(q[0] > kAdmissibleFloor))
        throw AdmissibilityError("water depth below positivity floor");
      return;
    case FluxKind::kEuler: {
      if (!(q[0] > kAdmissibleFloor))
        throw AdmissibilityError("density below positivity floor");
      const double internal = q[2] - 0.5 * q[1] * q[1] / q[0];
      if (!(internal > kAdmissibleFloor))
        throw AdmissibilityError("internal energy below positivity floor");
      return;
    }
    default:
      return;
  }
}

namespace {

StateVec unit_signed(StateVec v) {
  double norm = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) norm += v[i] * v[i];
  norm = std::sqrt(norm);
  double sign = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      sign = v[i] > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= sign / norm;
  return v;
}

}  // namespace

EigenPairs eval_eigen(const FluxModel& f, const StateVec& q) {
  check_admissible(f, q);
  EigenPairs e;
  switch (f.kind) {
    case FluxKind::kBurgers:
    case FluxKind::kQuadratic:
    case FluxKind::kPolynomial:
      e.m = 1;
      e.lambda = {scalar_flux_prime(f, q[0])};
      e.r[0] = {1.0};
      return e;
    case FluxKind::kShallowWater: {
      const double h = q[0];
      const double u = q[1] / h;
      const double c = std::sqrt(f.gravity * h);
      if (!(c > 0.0)) throw HyperbolicityError("zero gravity wave speed");
      e.m = 2;
      e.lambda = {u - c, u + c};
      e.r[0] = unit_signed({1.0, u - c});
      e.r[1] = unit_signed({1.0, u + c});
      return e;
    }
    case FluxKind::kEuler: {
      const double rho = q[0];
      const double u = q[1] / rho;
      const double p = euler_pressure(f, q);
      if (!(p > 0.0)) throw AdmissibilityError("non-positive pressure");
      const double c = std::sqrt(f.gamma * p / rho);
      if (!(c > 0.0)) throw HyperbolicityError("zero sound speed");
      const double enthalpy = (q[2] + p) / rho;
      e.m = 3;
      e.lambda = {u - c, u, u + c};
      e.r[0] = unit_signed({1.0, u - c, enthalpy - u * c});
      e.r[1] = unit_signed({1.0, u, 0.5 * u * u});
      e.r[2] = unit_signed({1.0, u + c, enthalpy + u * c});
      return e;
    }
  }
  throw ConfigError("unknown flux kind");
}

std::array<StateVec, 3> eval_left_eigen(const FluxModel& f, const StateVec& q) {
  const EigenPairs e = eval_eigen(f, q);
  const int m = e.m;
  // Invert the column matrix R = [r_1 ... r_m] by Gauss-Jordan with partial
  // pivoting; rows of R^{-1} are the left eigenvectors.
  double A[3][6] = {};
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) A[i][k] = e.r[k][i];
    A[i][m + i] = 1.0;
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    if (std::fabs(A[piv][col]) < 1e-14)
      throw HyperbolicityError("right eigenvector matrix is singular");
    if (piv != col)
      for (int k = 0; k < 2 * m; ++k) std::swap(A[piv][k], A[col][k]);
    const double inv = 1.0 / A[col][col];
    for (int k = 0; k < 2 * m; ++k) A[col][k] *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double factor = A[r][col];
      if (factor == 0.0) continue;
      for (int k = 0; k < 2 * m; ++k) A[r][k] -= factor * A[col][k];
    }
  }
  std::array<StateVec, 3> left;
  for (int k = 0; k < m; ++k) {
    left[k].resize(std::size_t(m));
    for (int i = 0; i < m; ++i) left[k][i] = A[k][m + i];
  }
  return left;
}

std::string flux_kind_name(FluxKind k) {
  switch (k) {
    case FluxKind::kBurgers: return "burgers";
    case FluxKind::kQuadratic: return "quadratic";
    case FluxKind::kPolynomial: return "polynomial";
    case FluxKind::kShallowWater: return "shallow-water";
    case FluxKind::kEuler: return "euler";
  }
  return "unknown";
}

}  // namespace shocktrack
