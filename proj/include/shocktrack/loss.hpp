#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "shocktrack/flux.hpp"
#include "shocktrack/geometry.hpp"
#include "shocktrack/sampling.hpp"

namespace shocktrack {

// Loss = residual_w * (interior PDE residual, sampled through the subdomain
// transforms) + rh_w * (jump conditions on every trainable line) + ic_w *
// (initial data plus incoming-characteristic boundary mismatch) +
// interface_w * (Schwarz line-pair matching; zero outside domain
// decomposition runs). Every term is a mean over its fixed sample set.
struct LossWeights {
  double residual = 0.5;
  double rh = 0.5;
  double ic = 0.5;
  double interface_match = 0.5;
};

struct LossBreakdown {
  double total = 0.0;
  double residual = 0.0;
  double rh = 0.0;
  double ic = 0.0;
  double interface_match = 0.0;
};

// Type-erased evaluation hooks for one space-time field. The scalar S is
// double for plain evaluation and ad::Var while recording a training graph.
// jets: value with (d/dx, d/dt) seeds at physical (x, t); value: plain value
// at a position that is itself an S expression; value_at: plain value at a
// constant position.
template <class S>
struct FieldHandle {
  std::function<SmallVec<Jet<S, 2>, 3>(const S& x, double t)> jets;
  std::function<SmallVec<S, 3>(const S& x, double t)> value;
  std::function<SmallVec<S, 3>(double x, double t)> value_at;
};

// Hooks for one discontinuity line: position, and position with slope.
template <class S>
struct LineHandle {
  bool frozen = false;
  double anchor = 0.0;
  std::function<S(double t)> value;
  std::function<Jet<S, 1>(double t)> jet;
};

// --- handle constructors -------------------------------------------------

FieldHandle<double> field_handle(const MlpParams& net);
LineHandle<double> line_handle(const DiscontinuityLine& line);

FieldHandle<ad::Var> field_handle(ad::Tape& tape, const TapedNet& net);
// Taped line handle; net may be null for frozen walls.
LineHandle<ad::Var> line_handle(ad::Tape& tape, const TapedNet* net,
                                const DiscontinuityLine& line);

// --- layout topology ------------------------------------------------------

struct SubTopo {
  int left_line = 0;
  int right_line = 0;
  bool cone = false;
  bool has_ic = true;
  double ic_left = 0.0;   // t=0 anchors bounding the initial interval
  double ic_right = 0.0;
};

// Everything the loss assembler needs to know about a layout, independent of
// how fields and lines are evaluated.
struct LayoutTopology {
  const ProblemSpec* spec = nullptr;
  double T = 0.0;
  std::vector<SubTopo> subs;
  std::vector<int> rh_lines;                      // chain indices with RH terms
  std::vector<std::pair<int, int>> rh_neighbors;  // (left sub, right sub) per rh line
  // Incoming-characteristic projections at the walls (empty: no term).
  std::vector<StateVec> left_rows, right_rows;
  StateVec left_state, right_state;
};

LayoutTopology topology_of(const SubdomainLayout& layout);

// Characteristic projections for the wall at `x = at_left ? a : b`:
// left eigenvector rows of the boundary state whose eigenvalue points into
// the domain.
std::vector<StateVec> incoming_rows(const FluxModel& flux, const StateVec& state, bool at_left);

// --- term emission ---------------------------------------------------------
//
// Templates shared by the training path (S = ad::Var, recording onto a tape)
// and the oracle/diagnostic path (S = double). konst lifts a double constant
// into S.

template <class S>
struct LossParts {
  S residual, rh, ic, interface_match, total;
};

template <class S>
S emit_residual(const FluxModel& flux, const FieldHandle<S>& field, const LineHandle<S>& left,
                const LineHandle<S>& right, const std::vector<SamplePoint>& pts, bool cone,
                const std::function<S(double)>& konst) {
  S acc = konst(0.0);
  for (const SamplePoint& p : pts) {
    const double wl = cone ? cone_left_weight(p.x, p.t) : rect_left_weight(p.x);
    const S X = blend_lines(left.value(p.t), right.value(p.t), wl);
    const auto N = field.jets(X, p.t);
    const auto F = flux_eval(flux, N);
    for (std::size_t c = 0; c < N.size(); ++c) acc = acc + sqr(N[c].d[1] + F[c].d[0]);
  }
  return acc * (1.0 / double(pts.size()));
}

// Jump condition n'(t) [u] = [f(u)] between the fields on either side of a
// line, sampled in time.
template <class S>
S emit_rh(const FluxModel& flux, const LineHandle<S>& line, const FieldHandle<S>& left_field,
          const FieldHandle<S>& right_field, const std::vector<double>& times,
          const std::function<S(double)>& konst) {
  S acc = konst(0.0);
  for (double t : times) {
    const Jet<S, 1> n = line.jet(t);
    const auto ul = left_field.value(n.v, t);
    const auto ur = right_field.value(n.v, t);
    const auto fl = flux_eval(flux, ul);
    const auto fr = flux_eval(flux, ur);
    for (std::size_t c = 0; c < ul.size(); ++c)
      acc = acc + sqr(n.d[0] * (ur[c] - ul[c]) - (fr[c] - fl[c]));
  }
  return acc * (1.0 / double(times.size()));
}

// Same jump condition, but one side is a frozen constant state (Schwarz
// boundary neighbors).
template <class S>
S emit_rh_const_side(const FluxModel& flux, const LineHandle<S>& line, const StateVec& fixed,
                     bool fixed_is_left, const FieldHandle<S>& other,
                     const std::vector<double>& times, const std::function<S(double)>& konst) {
  S acc = konst(0.0);
  StateVec ffixed_d(fixed.size());
  {
    const auto f = flux_eval(flux, fixed);
    for (std::size_t c = 0; c < fixed.size(); ++c) ffixed_d[c] = f[c];
  }
  for (double t : times) {
    const Jet<S, 1> n = line.jet(t);
    const auto u = other.value(n.v, t);
    const auto fu = flux_eval(flux, u);
    for (std::size_t c = 0; c < u.size(); ++c) {
      const S ju = fixed_is_left ? u[c] - fixed[c] : konst(fixed[c]) - u[c];
      const S jf = fixed_is_left ? fu[c] - ffixed_d[c] : konst(ffixed_d[c]) - fu[c];
      acc = acc + sqr(n.d[0] * ju - jf);
    }
  }
  return acc * (1.0 / double(times.size()));
}

// Initial-condition mismatch over one subdomain's t=0 interval.
template <class S>
S emit_ic(const FieldHandle<S>& field, const ProblemSpec& spec, double xl, double xr,
          const std::vector<double>& unit, const std::function<S(double)>& konst) {
  S acc = konst(0.0);
  for (double xi : unit) {
    const double X = xl + (xr - xl) * xi;
    const StateVec u0 = eval_initial(spec, X);
    const auto N = field.value_at(X, 0.0);
    for (std::size_t c = 0; c < N.size(); ++c) acc = acc + sqr(N[c] - u0[c]);
  }
  return acc * (1.0 / double(unit.size()));
}

// Mismatch against a constant boundary state, projected on the incoming
// characteristic fields.
template <class S>
S emit_boundary(const FieldHandle<S>& field, double wall_x, const StateVec& state,
                const std::vector<StateVec>& rows, const std::vector<double>& times,
                const std::function<S(double)>& konst) {
  S acc = konst(0.0);
  for (double t : times) {
    const auto N = field.value_at(wall_x, t);
    for (const StateVec& row : rows) {
      S dot = konst(0.0);
      for (std::size_t c = 0; c < N.size(); ++c) dot = dot + row[c] * (N[c] - state[c]);
      acc = acc + sqr(dot);
    }
  }
  return acc * (1.0 / double(times.size()));
}

// Schwarz interface matching between two line networks.
template <class S>
S emit_interface(const LineHandle<S>& a, const LineHandle<S>& b, const std::vector<double>& times,
                 const std::function<S(double)>& konst) {
  S acc = konst(0.0);
  for (double t : times) acc = acc + sqr(a.value(t) - b.value(t));
  return acc * (1.0 / double(times.size()));
}

// Full loss for one global layout.
template <class S>
LossParts<S> emit_global_loss(const FluxModel& flux, const LayoutTopology& topo,
                              const std::vector<FieldHandle<S>>& fields,
                              const std::vector<LineHandle<S>>& lines, const SampleSet& samples,
                              const LossWeights& w, const std::function<S(double)>& konst) {
  LossParts<S> parts{konst(0.0), konst(0.0), konst(0.0), konst(0.0), konst(0.0)};
  for (std::size_t s = 0; s < topo.subs.size(); ++s) {
    const SubTopo& st = topo.subs[s];
    parts.residual =
        parts.residual + emit_residual(flux, fields[s], lines[std::size_t(st.left_line)],
                                       lines[std::size_t(st.right_line)],
                                       st.cone ? samples.cone : samples.rect, st.cone, konst);
    if (st.has_ic)
      parts.ic = parts.ic +
                 emit_ic(fields[s], *topo.spec, st.ic_left, st.ic_right, samples.unit, konst);
  }
  for (std::size_t k = 0; k < topo.rh_lines.size(); ++k) {
    const auto [sl, sr] = topo.rh_neighbors[k];
    parts.rh = parts.rh + emit_rh(flux, lines[std::size_t(topo.rh_lines[k])],
                                  fields[std::size_t(sl)], fields[std::size_t(sr)],
                                  samples.times, konst);
  }
  if (!topo.left_rows.empty())
    parts.ic = parts.ic + emit_boundary(fields.front(), topo.spec->domain.a, topo.left_state,
                                        topo.left_rows, samples.times, konst);
  if (!topo.right_rows.empty())
    parts.ic = parts.ic + emit_boundary(fields.back(), topo.spec->domain.b, topo.right_state,
                                        topo.right_rows, samples.times, konst);
  parts.total = parts.residual * w.residual + parts.rh * w.rh + parts.ic * w.ic +
                parts.interface_match * w.interface_match;
  return parts;
}

// Loss for a single-network PINN baseline on the full space-time domain (no
// lines, no jump terms): residual + initial data + inflow boundaries.
template <class S>
LossParts<S> emit_direct_loss(const FluxModel& flux, const ProblemSpec& spec,
                              const FieldHandle<S>& field, const SampleSet& samples,
                              const LossWeights& w, const std::function<S(double)>& konst) {
  LossParts<S> parts{konst(0.0), konst(0.0), konst(0.0), konst(0.0), konst(0.0)};
  const double a = spec.domain.a;
  const double b = spec.domain.b;
  {
    S acc = konst(0.0);
    for (const SamplePoint& p : samples.rect) {
      const double X = a + (b - a) * p.x;
      const auto N = field.jets(konst(X), p.t);
      const auto F = flux_eval(flux, N);
      for (std::size_t c = 0; c < N.size(); ++c) acc = acc + sqr(N[c].d[1] + F[c].d[0]);
    }
    parts.residual = acc * (1.0 / double(samples.rect.size()));
  }
  parts.ic = emit_ic(field, spec, a, b, samples.unit, konst);
  const auto lrows = incoming_rows(spec.flux, spec.initial.left_state, true);
  const auto rrows = incoming_rows(spec.flux, spec.initial.right_state, false);
  if (!lrows.empty())
    parts.ic = parts.ic +
               emit_boundary(field, a, spec.initial.left_state, lrows, samples.times, konst);
  if (!rrows.empty())
    parts.ic = parts.ic +
               emit_boundary(field, b, spec.initial.right_state, rrows, samples.times, konst);
  parts.total = parts.residual * w.residual + parts.rh * w.rh + parts.ic * w.ic +
                parts.interface_match * w.interface_match;
  return parts;
}

// --- double-path conveniences ----------------------------------------------

inline std::function<double(double)> double_konst() {
  return [](double c) { return c; };
}

// Analytic stand-ins used by oracle tests: fields and lines given as
// closures instead of networks.
struct AnalyticModel {
  std::vector<FieldHandle<double>> fields;
  std::vector<LineHandle<double>> lines;
};

// Exact-solution field handle from value/dx/dt closures.
FieldHandle<double> analytic_field(std::function<StateVec(double, double)> value,
                                   std::function<StateVec(double, double)> dx,
                                   std::function<StateVec(double, double)> dt);

// Line handle from position and slope closures.
LineHandle<double> analytic_line(std::function<double(double)> pos,
                                 std::function<double(double)> slope);

// Loss of the network-backed layout, evaluated on doubles.
LossBreakdown global_loss(const SubdomainLayout& layout, const SampleSet& samples,
                          const LossWeights& w);

// Loss of an analytic model over the same topology.
LossBreakdown global_loss_analytic(const SubdomainLayout& layout, const AnalyticModel& model,
                                   const SampleSet& samples, const LossWeights& w);

inline LossBreakdown to_breakdown(const LossParts<double>& p) {
  return {p.total, p.residual, p.rh, p.ic, p.interface_match};
}

}  // namespace shocktrack
