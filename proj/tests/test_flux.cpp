#include <cmath>
#include <random>

#include "doctest.h"
#include "shocktrack/errors.hpp"
#include "shocktrack/flux.hpp"
#include "shocktrack/jet.hpp"

using namespace shocktrack;

TEST_CASE("scalar flux values and slopes") {
  const FluxModel burgers = FluxModel::burgers();
  CHECK(scalar_flux(burgers, 2.0) == 2.0);
  CHECK(scalar_flux_prime(burgers, 2.0) == 2.0);
  CHECK(scalar_flux_second(burgers, 2.0) == 1.0);

  const FluxModel quad = FluxModel::quadratic();  // 4u(2-u)
  CHECK(scalar_flux(quad, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(scalar_flux(quad, 1.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(scalar_flux_prime(quad, 1.0) == doctest::Approx(0.0).epsilon(1e-15));

  const FluxModel cubic = FluxModel::polynomial({0.0, 0.0, 0.0, 1.0});  // u^3
  CHECK(scalar_flux(cubic, 2.0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(scalar_flux_prime(cubic, 2.0) == doctest::Approx(12.0).epsilon(1e-15));
}

TEST_CASE("quadratic flux critical point found between the states") {
  const FluxModel quad = FluxModel::quadratic();
  const auto crit = scalar_flux_critical_points(quad, 0.0, 2.0);
  REQUIRE(crit.size() == 1);
  CHECK(crit[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scalar_flux_critical_points(quad, 1.5, 2.0).empty());
}

TEST_CASE("shallow water eigenstructure") {
  const FluxModel sw = FluxModel::shallow_water(1.0);
  StateVec q{4.0, 8.0};  // h = 4, u = 2, c = 2
  const EigenPairs eig = eval_eigen(sw, q);
  REQUIRE(eig.m == 2);
  CHECK(eig.lambda[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eig.lambda[1] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(eig.lambda[0] < eig.lambda[1]);
}

namespace {

// Exact Jacobian column k via a jet seeded along direction k.
void check_right_eigenvectors(const FluxModel& f, const StateVec& q) {
  const EigenPairs eig = eval_eigen(f, q);
  const int m = eig.m;
  SmallVec<Jet<double, 3>, 3> in(q.size());
  double scale = 1.0;
  for (int j = 0; j < m; ++j) {
    in[std::size_t(j)] = jet_input<3>(q[std::size_t(j)], j);
    scale = std::max(scale, std::abs(eig.lambda[std::size_t(j)]));
  }
  const auto F = flux_eval(f, in);
  for (int k = 0; k < m; ++k) {
    const StateVec& r = eig.r[std::size_t(k)];
    for (int row = 0; row < m; ++row) {
      double Ar = 0;
      for (int col = 0; col < m; ++col)
        Ar += F[std::size_t(row)].d[std::size_t(col)] * r[std::size_t(col)];
      CHECK(Ar == doctest::Approx(eig.lambda[std::size_t(k)] * r[std::size_t(row)])
                      .epsilon(1e-10)
                      .scale(scale));
    }
  }
}

}  // namespace

TEST_CASE("A r = lambda r for shallow water and Euler states") {
  const FluxModel sw = FluxModel::shallow_water(1.0);
  const FluxModel eu = FluxModel::euler(1.4);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.5, 8.0), vel(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double h = pos(rng), u = vel(rng);
    check_right_eigenvectors(sw, StateVec{h, h * u});

    const double rho = 0.1 * pos(rng), v = vel(rng), p = pos(rng);
    const double E = p / 0.4 + 0.5 * rho * v * v;
    check_right_eigenvectors(eu, StateVec{rho, rho * v, E});
  }
}

TEST_CASE("left and right eigenvectors are biorthogonal") {
  const FluxModel eu = FluxModel::euler(1.4);
  StateVec q{1.2, 0.6, 3.1};
  const EigenPairs eig = eval_eigen(eu, q);
  const auto left = eval_left_eigen(eu, q);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      double dot = 0;
      for (int c = 0; c < 3; ++c)
        dot += left[std::size_t(i)][std::size_t(c)] * eig.r[std::size_t(k)][std::size_t(c)];
      CHECK(dot == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("inadmissible states are rejected") {
  const FluxModel sw = FluxModel::shallow_water(1.0);
  CHECK_THROWS_AS(eval_eigen(sw, StateVec{-1.0, 0.0}), AdmissibilityError);
  const FluxModel eu = FluxModel::euler(1.4);
  CHECK_THROWS_AS(eval_eigen(eu, StateVec{-0.5, 0.0, 1.0}), AdmissibilityError);
  // negative pressure: E below kinetic energy
  CHECK_THROWS_AS(eval_eigen(eu, StateVec{1.0, 2.0, 1.0}), AdmissibilityError);
}

TEST_CASE("flux kind names round-trip the factories") {
  CHECK(flux_kind_name(FluxModel::burgers().kind) == "burgers");
  CHECK(flux_kind_name(FluxModel::quadratic().kind) == "quadratic");
  CHECK(flux_kind_name(FluxModel::polynomial({1.0}).kind) == "polynomial");
  CHECK(flux_kind_name(FluxModel::shallow_water(9.81).kind) == "shallow-water");
  CHECK(flux_kind_name(FluxModel::euler(1.4).kind) == "euler");
  CHECK(FluxModel::burgers().scalar());
  CHECK_FALSE(FluxModel::euler(1.4).scalar());
  CHECK(FluxModel::shallow_water(2.5).gravity == 2.5);
}
