#include <cmath>
#include <functional>

#include "doctest.h"
#include "shocktrack/geometry.hpp"
#include "shocktrack/loss.hpp"
#include "shocktrack/problem.hpp"
#include "shocktrack/sampling.hpp"

using namespace shocktrack;

namespace {

ProblemSpec two_shock_problem() {
  ProblemSpec p;
  p.flux = FluxModel::burgers();
  p.domain = {-1.0, 2.0};
  p.final_time = 0.5;
  p.initial.breakpoints = {0.0, 1.0};
  p.initial.profiles = {Profile::constant(StateVec{1.0}), Profile::constant(StateVec{0.5}),
                        Profile::constant(StateVec{-2.0})};
  p.initial.left_state = StateVec{1.0};
  p.initial.right_state = StateVec{-2.0};
  return p;
}

FieldHandle<double> const_field(double c) {
  auto zero = [](double, double) { return StateVec{0.0}; };
  return analytic_field([c](double, double) { return StateVec{c}; }, zero, zero);
}

LineHandle<double> straight_line(double x0, double speed) {
  return analytic_line([x0, speed](double t) { return x0 + speed * t; },
                       [speed](double) { return speed; });
}

AnalyticModel exact_two_shock_model() {
  AnalyticModel m;
  m.fields = {const_field(1.0), const_field(0.5), const_field(-2.0)};
  m.lines = {straight_line(-1.0, 0.0), straight_line(0.0, 0.75), straight_line(1.0, -0.75),
             straight_line(2.0, 0.0)};
  return m;
}

}  // namespace

TEST_CASE("the exact two-shock solution zeroes every loss term") {
  const SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 1);
  const SampleSet samples = draw_samples(SampleCounts{}, layout.duration, 5);
  const LossBreakdown b =
      global_loss_analytic(layout, exact_two_shock_model(), samples, LossWeights{});
  CHECK(b.residual <= 1e-10);
  CHECK(b.rh <= 1e-10);
  CHECK(b.ic <= 1e-10);
  CHECK(b.interface_match == 0.0);
  CHECK(b.total <= 1e-10);
}

TEST_CASE("a smooth exact solution has zero interior residual") {
  // u = x / (1 + t) solves u_t + u u_x = 0
  ProblemSpec p;
  p.flux = FluxModel::burgers();
  p.domain = {0.5, 1.5};
  p.final_time = 1.0;
  p.initial.profiles = {Profile::affine(StateVec{1.0}, StateVec{0.0})};
  p.initial.left_state = StateVec{0.5};
  p.initial.right_state = StateVec{1.5};
  const SubdomainLayout layout = make_layout(p, LayoutArchitectures{}, 1);
  REQUIRE(layout.subs.size() == 1);

  AnalyticModel m;
  m.fields = {analytic_field([](double x, double t) { return StateVec{x / (1 + t)}; },
                             [](double, double t) { return StateVec{1 / (1 + t)}; },
                             [](double x, double t) { return StateVec{-x / ((1 + t) * (1 + t))}; })};
  m.lines = {straight_line(0.5, 0.0), straight_line(1.5, 0.0)};
  const SampleSet samples = draw_samples(SampleCounts{}, p.final_time, 2);
  const LossBreakdown b = global_loss_analytic(layout, m, samples, LossWeights{});
  CHECK(b.residual <= 1e-20);
}

TEST_CASE("interior residual of u = x equals the sampled mean of x^2") {
  ProblemSpec p;
  p.flux = FluxModel::burgers();
  p.domain = {0.0, 1.0};
  p.final_time = 1.0;
  p.initial.profiles = {Profile::affine(StateVec{1.0}, StateVec{0.0})};
  p.initial.left_state = StateVec{0.0};
  p.initial.right_state = StateVec{1.0};
  const SubdomainLayout layout = make_layout(p, LayoutArchitectures{}, 1);

  AnalyticModel m;
  m.fields = {analytic_field([](double x, double) { return StateVec{x}; },
                             [](double, double) { return StateVec{1.0}; },
                             [](double, double) { return StateVec{0.0}; })};
  m.lines = {straight_line(0.0, 0.0), straight_line(1.0, 0.0)};
  const SampleSet samples = draw_samples(SampleCounts{}, p.final_time, 3);

  // residual (u_t + u u_x)^2 = x^2; on this domain the reference abscissa is x
  double expect = 0;
  for (const SamplePoint& q : samples.rect) expect += q.x * q.x;
  expect /= double(samples.rect.size());

  const LossBreakdown b = global_loss_analytic(layout, m, samples, LossWeights{});
  CHECK(b.residual == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("jump-condition penalty measures the speed defect exactly") {
  const SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 1);
  AnalyticModel m = exact_two_shock_model();
  m.lines[1] = straight_line(0.0, 0.5);  // wrong: exact speed is 0.75
  const SampleSet samples = draw_samples(SampleCounts{}, layout.duration, 4);
  const LossBreakdown b = global_loss_analytic(layout, m, samples, LossWeights{});
  // residual of line 1: s [u] - [f] = 0.5 * 0.5 - 0.375 = -0.125, squared
  CHECK(b.rh == doctest::Approx(0.125 * 0.125).epsilon(1e-12));
}

TEST_CASE("initial-condition penalty measures data mismatch") {
  const SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 1);
  AnalyticModel m = exact_two_shock_model();
  m.fields[1] = const_field(0.7);  // initial data says 0.5
  const SampleSet samples = draw_samples(SampleCounts{}, layout.duration, 4);
  const LossBreakdown b = global_loss_analytic(layout, m, samples, LossWeights{});
  CHECK(b.ic == doctest::Approx(0.2 * 0.2).epsilon(1e-12));
  CHECK(b.residual <= 1e-20);
}

TEST_CASE("loss weights scale the total linearly") {
  const SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 2);
  const SampleSet samples = draw_samples(SampleCounts{}, layout.duration, 6);
  LossWeights w1;
  LossWeights w2;
  w2.residual = 2 * w1.residual;
  w2.rh = 2 * w1.rh;
  w2.ic = 2 * w1.ic;
  w2.interface_match = 2 * w1.interface_match;
  const LossBreakdown a = global_loss(layout, samples, w1);
  const LossBreakdown b = global_loss(layout, samples, w2);
  CHECK(a.total > 0.0);
  CHECK(b.total == doctest::Approx(2 * a.total).epsilon(1e-13));
  CHECK(b.residual == doctest::Approx(a.residual).epsilon(1e-13));  // raw terms unweighted
}

TEST_CASE("boundary rows pick only incoming characteristics") {
  // Burgers, left state 1 (enters), right state -2 (enters): one row each
  CHECK(incoming_rows(FluxModel::burgers(), StateVec{1.0}, true).size() == 1);
  CHECK(incoming_rows(FluxModel::burgers(), StateVec{-2.0}, false).size() == 1);
  // outgoing sides contribute nothing
  CHECK(incoming_rows(FluxModel::burgers(), StateVec{-1.0}, true).empty());
  CHECK(incoming_rows(FluxModel::burgers(), StateVec{2.0}, false).empty());
  // shallow water both eigenvalues u +- c: subcritical inflow has one incoming field
  const FluxModel sw = FluxModel::shallow_water(1.0);
  CHECK(incoming_rows(sw, StateVec{1.0, 0.5}, true).size() == 1);
  CHECK(incoming_rows(sw, StateVec{1.0, 0.5}, false).size() == 1);
}
