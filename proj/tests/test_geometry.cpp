#include <cmath>

#include "doctest.h"
#include "shocktrack/errors.hpp"
#include "shocktrack/geometry.hpp"
#include "shocktrack/problem.hpp"

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

// Force a line's time-network to a constant slope c, so position(t) = anchor + c t.
void pin_line_speed(DiscontinuityLine& line, double c) {
  for (double& v : line.net.flat) v = 0.0;
  line.net.bias(line.net.arch.layers(), 0) = c;
}

}  // namespace

TEST_CASE("reference transforms and their inverses") {
  const double l = -0.5, r = 1.25;
  for (double xref : {0.0, 0.3, 0.77, 1.0}) {
    const double X = l * (1 - xref) + r * xref;
    CHECK(rect_left_weight(xref) == doctest::Approx(1 - xref).epsilon(1e-15));
    CHECK(invert_rect(l, r, X) == doctest::Approx(xref).epsilon(1e-12));
  }
  // cone: physical position interpolates along a wedge that opens from x=0
  const double t = 0.8;
  for (double x : {-0.7, 0.0, 0.5}) {
    const double w = cone_left_weight(x, t);
    CHECK(w == doctest::Approx((t - x) / (2 * t)).epsilon(1e-13));
  }
  // l = -1, r = 1 at t = 0.8: X = 0.25 means w = 0.375, hence xref = 0.2
  CHECK(invert_cone(-1.0, 1.0, 0.25, 0.8) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("collapsed intervals are rejected on inversion") {
  CHECK_THROWS_AS(invert_rect(1.0, 1.0 + 1e-12, 1.0), CollapseError);
}

TEST_CASE("layout of a two-jump scalar problem") {
  const SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 3);
  REQUIRE(layout.lines.size() == 4);  // wall, jump, jump, wall
  REQUIRE(layout.subs.size() == 3);
  CHECK(layout.lines[0].role == LineRole::kBoundary);
  CHECK(layout.lines[3].role == LineRole::kBoundary);
  CHECK(layout.lines[1].role == LineRole::kInterior);
  CHECK(layout.lines[1].anchor == 0.0);
  CHECK(layout.lines[2].anchor == 1.0);
  CHECK(layout.interior_line_count() == 2);
  CHECK(layout.duration == 0.5);
  for (const Subdomain& s : layout.subs) {
    CHECK(s.ref == RefDomain::kRect);
    CHECK(s.has_ic);
  }
  // gamma(t) = anchor + t * g(t): exact at t = 0 whatever the net says
  CHECK(line_position(layout.lines[1], 0.0) == 0.0);
  CHECK(line_position(layout.lines[2], 0.0) == 1.0);
}

TEST_CASE("artificial lines are merged into the chain in sorted order") {
  ProblemSpec p = two_shock_problem();
  p.artificial = {0.5, 1.5};
  const SubdomainLayout layout = make_layout(p, LayoutArchitectures{}, 3);
  REQUIRE(layout.lines.size() == 6);
  CHECK(layout.lines[1].anchor == 0.0);
  CHECK(layout.lines[2].anchor == 0.5);
  CHECK(layout.lines[2].role == LineRole::kArtificial);
  CHECK(layout.lines[3].anchor == 1.0);
  CHECK(layout.lines[4].anchor == 1.5);
  CHECK(layout.lines[4].role == LineRole::kArtificial);
  CHECK(layout.subs.size() == 5);
}

TEST_CASE("a multi-wave jump opens into cone subdomains without initial data") {
  ProblemSpec p;
  p.flux = FluxModel::shallow_water(1.0);
  p.domain = {-0.1, 0.1};
  p.final_time = 0.0025;
  p.initial.breakpoints = {0.0};
  p.initial.profiles = {Profile::constant(StateVec{3.0, 5.0}),
                        Profile::constant(StateVec{3.0, -5.0})};
  p.initial.left_state = StateVec{3.0, 5.0};
  p.initial.right_state = StateVec{3.0, -5.0};
  p.wave_counts = {2};
  const SubdomainLayout layout = make_layout(p, LayoutArchitectures{}, 1);
  REQUIRE(layout.lines.size() == 4);
  REQUIRE(layout.subs.size() == 3);
  CHECK(layout.subs[1].ref == RefDomain::kCone);
  CHECK_FALSE(layout.subs[1].has_ic);
  CHECK(layout.subs[0].has_ic);
  CHECK(layout.subs[2].has_ic);
  CHECK(layout.lines[1].family == 1);
  CHECK(layout.lines[2].family == 2);
}

TEST_CASE("locate maps points to subdomains, with ties going right") {
  SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 3);
  pin_line_speed(layout.lines[1], 0.75);
  pin_line_speed(layout.lines[2], -0.75);
  CHECK(locate(layout, -0.5, 0.1) == 0);
  CHECK(locate(layout, 0.5, 0.1) == 1);
  CHECK(locate(layout, 1.5, 0.1) == 2);
  // at t = 0.25 line 1 sits at exactly 3/16 (both factors are dyadic);
  // a point right on it belongs to the right subdomain
  CHECK(locate(layout, 0.1875, 0.25) == 1);
  CHECK_THROWS_AS(locate(layout, 2.5, 0.1), DomainError);
  CHECK_THROWS_AS(locate(layout, -1.5, 0.1), DomainError);
}

TEST_CASE("crossed lines are reported, naming the pair") {
  SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 3);
  pin_line_speed(layout.lines[1], 4.0);   // crosses the second line quickly
  pin_line_speed(layout.lines[2], -4.0);
  CHECK_THROWS_AS(locate(layout, 0.5, 0.45), OrderingError);
}

TEST_CASE("initial data evaluation picks the left interval on a breakpoint") {
  const ProblemSpec p = two_shock_problem();
  CHECK(eval_initial(p, -0.5)[0] == 1.0);
  CHECK(eval_initial(p, 0.0)[0] == 1.0);  // on the breakpoint: left side
  CHECK(eval_initial(p, 0.5)[0] == 0.5);
  CHECK(eval_initial(p, 1.7)[0] == -2.0);
  CHECK(initial_total_variation(p) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("line evaluation combines anchor and slope net") {
  SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 3);
  pin_line_speed(layout.lines[1], 0.75);
  CHECK(line_position(layout.lines[1], 0.4) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(line_speed(layout.lines[1], 0.4) == doctest::Approx(0.75).epsilon(1e-10));
  const auto pos = line_positions(layout, 0.4);
  REQUIRE(pos.size() == 4);
  CHECK(pos.front() == -1.0);
  CHECK(pos.back() == 2.0);
  CHECK(pos[1] == doctest::Approx(0.3).epsilon(1e-13));
}
