#pragma once

#include <string>
#include <vector>

#include "shocktrack/jet.hpp"
#include "shocktrack/mlp.hpp"
#include "shocktrack/problem.hpp"

namespace shocktrack {

// A discontinuity line gamma(t) bounding space-time subdomains.
//
// Interior and artificial lines are trainable: gamma(t) = anchor + t * g(t)
// with g a small time-network, so the anchor position at t=0 is pinned
// exactly and the initial speed is g(0). Boundary lines are the frozen
// constants x = a and x = b. Artificial lines are seeded where a shock is
// expected to form from smooth data; until it forms they carry no jump.
enum class LineRole { kBoundary, kInterior, kArtificial };

struct DiscontinuityLine {
  LineRole role = LineRole::kInterior;
  double anchor = 0.0;
  int family = 1;  // wave family (1..m) for system problems
  MlpParams net;   // unused when role == kBoundary

  bool frozen() const { return role == LineRole::kBoundary; }
};

// Line position (and slope, through the jet) on plain doubles.
template <int K>
Jet<double, K> line_eval(const DiscontinuityLine& line, const Jet<double, K>& t) {
  if (line.frozen()) return jet_const<K>(line.anchor);
  const std::array<Jet<double, K>, 1> in{t};
  const Jet<double, K> g = net_eval(view(line.net), in)[0];
  return t * g + line.anchor;
}

inline double line_position(const DiscontinuityLine& line, double t) {
  return line_eval(line, jet_const<0>(t)).v;
}

inline double line_speed(const DiscontinuityLine& line, double t) {
  return line_eval(line, jet_input<1>(t, 0)).d[0];
}

// Reference domain of a subdomain: the unit rectangle (0,1)x(0,T), or the
// cone |x| <= t <= T used for the fan of waves a system Riemann problem
// opens from a single point.
enum class RefDomain { kRect, kCone };

// One space-time subdomain between two consecutive lines of the chain. The
// field network takes physical (x, t); the reference domain only describes
// where training samples come from.
struct Subdomain {
  int left_line = 0;
  int right_line = 0;
  RefDomain ref = RefDomain::kRect;
  bool has_ic = true;  // first-wave subdomains carry the initial condition
  MlpParams net;
};

// Ordered chain of lines (boundary line a, interior groups, boundary line b)
// and the subdomains between consecutive chain entries. Times are local to
// the layout: tau in [0, duration], physical t = t0 + tau, so re-decomposed
// stages reuse the same machinery on [0, T - t*].
struct SubdomainLayout {
  ProblemSpec problem;
  double t0 = 0.0;
  double duration = 0.0;
  std::vector<DiscontinuityLine> lines;
  std::vector<Subdomain> subs;

  int interior_line_count() const {
    int n = 0;
    for (const auto& l : lines)
      if (!l.frozen()) ++n;
    return n;
  }
};

struct LayoutArchitectures {
  std::vector<int> field_hidden{10};
  std::vector<int> line_hidden{5};
};

// Build the t=0 layout for a problem: one line group per breakpoint (each
// group has wave_counts[i] lines anchored there), a rect subdomain ahead of
// each group's first wave and cone subdomains between waves of a group.
SubdomainLayout make_layout(const ProblemSpec& spec, const LayoutArchitectures& archs,
                            std::uint64_t seed);

// --- reference-domain transforms ---------------------------------------
//
// Transforms map reference samples to physical positions between the two
// bounding lines; they are affine blends X = w*left + (1-w)*right whose
// weight depends only on the reference sample, so they stay cheap inside
// recorded loss graphs.

inline double rect_left_weight(double xref) { return 1.0 - xref; }

// Cone reference point (xref, t) with |xref| <= t: weight of the left line.
inline double cone_left_weight(double xref, double t) { return (t - xref) / (2.0 * t); }

template <class S>
S blend_lines(const S& left, const S& right, double w_left) {
  return left * w_left + right * (1.0 - w_left);
}

inline double transform_rect(double left, double right, double xref) {
  return blend_lines(left, right, rect_left_weight(xref));
}

inline double transform_cone(double left, double right, double xref, double t) {
  return blend_lines(left, right, cone_left_weight(xref, t));
}

// Width guard shared by the inverse transforms.
inline constexpr double kCollapseWidth = 1e-10;

// Reference coordinate of physical X between line values; CollapseError when
// the subdomain width degenerates (discontinuity lines touching).
double invert_rect(double left, double right, double X);
double invert_cone(double left, double right, double X, double t);

// Index of the subdomain containing (X, tau); a point exactly on a line
// belongs to the subdomain on its right. Checks chain ordering at tau and
// throws OrderingError naming the offending pair, DomainError outside [a,b].
int locate(const SubdomainLayout& layout, double X, double tau);

// Piecewise model evaluation at physical (X, tau in local time).
StateVec reconstruct(const SubdomainLayout& layout, double X, double tau);

// All line positions at local time tau, chain order.
std::vector<double> line_positions(const SubdomainLayout& layout, double tau);

// Trajectories of the interior lines on a uniform 401-point local time grid,
// written as CSV with physical times: t, n_1(t), n_2(t), ...
void export_line_csv(const SubdomainLayout& layout, const std::string& path);

}  // namespace shocktrack
