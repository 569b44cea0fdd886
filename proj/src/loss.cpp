#include "shocktrack/loss.hpp"

#include <cstddef>

namespace shocktrack {

FieldHandle<double> field_handle(const MlpParams& net) {
  const MlpParams* n = &net;
  FieldHandle<double> h;
  h.jets = [n](const double& x, double t) {
    const std::array<Jet<double, 2>, 2> in = {jet_input<2>(x, 0), jet_input<2>(t, 1)};
    return net_eval<2>(view(*n), in);
  };
  h.value = [n](const double& x, double t) {
    const std::array<Jet<double, 0>, 2> in = {jet_const<0>(x), jet_const<0>(t)};
    const auto jets = net_eval<0>(view(*n), in);
    SmallVec<double, 3> out(jets.size());
    for (std::size_t c = 0; c < jets.size(); ++c) out[c] = jets[c].v;
    return out;
  };
  h.value_at = [h](double x, double t) { return h.value(x, t); };
  return h;
}

LineHandle<double> line_handle(const DiscontinuityLine& line) {
  const DiscontinuityLine* l = &line;
  LineHandle<double> h;
  h.frozen = line.frozen();
  h.anchor = line.anchor;
  h.value = [l](double t) { return line_position(*l, t); };
  h.jet = [l](double t) { return line_eval<1>(*l, Jet<double, 1>{t, {1.0}}); };
  return h;
}

FieldHandle<ad::Var> field_handle(ad::Tape& tape, const TapedNet& net) {
  ad::Tape* tp = &tape;
  const TapedNet* n = &net;
  FieldHandle<ad::Var> h;
  h.jets = [tp, n](const ad::Var& x, double t) {
    const ad::Var one = tp->constant(1.0);
    const ad::Var zero = tp->constant(0.0);
    const std::array<Jet<ad::Var, 2>, 2> in = {Jet<ad::Var, 2>{x, {one, zero}},
                                               Jet<ad::Var, 2>{tp->constant(t), {zero, one}}};
    return net_eval<2>(n->view(), in);
  };
  h.value = [tp, n](const ad::Var& x, double t) {
    const std::array<Jet<ad::Var, 0>, 2> in = {jet_const<0>(x), jet_const<0>(tp->constant(t))};
    const auto jets = net_eval<0>(n->view(), in);
    SmallVec<ad::Var, 3> out(jets.size());
    for (std::size_t c = 0; c < jets.size(); ++c) out[c] = jets[c].v;
    return out;
  };
  h.value_at = [tp, h](double x, double t) { return h.value(tp->constant(x), t); };
  return h;
}

LineHandle<ad::Var> line_handle(ad::Tape& tape, const TapedNet* net,
                                const DiscontinuityLine& line) {
  ad::Tape* tp = &tape;
  LineHandle<ad::Var> h;
  h.frozen = line.frozen() || net == nullptr;
  h.anchor = line.anchor;
  if (h.frozen) {
    const double a = line.anchor;
    h.value = [tp, a](double) { return tp->constant(a); };
    h.jet = [tp, a](double) {
      return Jet<ad::Var, 1>{tp->constant(a), {tp->constant(0.0)}};
    };
    return h;
  }
  const double a = line.anchor;
  h.value = [tp, net, a](double t) {
    const std::array<Jet<ad::Var, 0>, 1> in = {jet_const<0>(tp->constant(t))};
    return net_eval<0>(net->view(), in)[0].v * t + a;
  };
  h.jet = [tp, net, a](double t) {
    const std::array<Jet<ad::Var, 1>, 1> in = {
        Jet<ad::Var, 1>{tp->constant(t), {tp->constant(1.0)}}};
    const Jet<ad::Var, 1> g = net_eval<1>(net->view(), in)[0];
    // n(t) = anchor + t g(t), n'(t) = g + t g'
    return Jet<ad::Var, 1>{g.v * t + a, {g.v + g.d[0] * t}};
  };
  return h;
}

std::vector<StateVec> incoming_rows(const FluxModel& flux, const StateVec& state, bool at_left) {
  std::vector<StateVec> rows;
  if (flux.scalar()) {
    const double lam = scalar_flux_prime(flux, state[0]);
    if ((at_left && lam > 0.0) || (!at_left && lam < 0.0)) rows.push_back(StateVec{1.0});
    return rows;
  }
  const EigenPairs eig = eval_eigen(flux, state);
  const auto left = eval_left_eigen(flux, state);
  for (int k = 0; k < eig.m; ++k) {
    const double lam = eig.lambda[std::size_t(k)];
    if ((at_left && lam > 0.0) || (!at_left && lam < 0.0)) rows.push_back(left[std::size_t(k)]);
  }
  return rows;
}

LayoutTopology topology_of(const SubdomainLayout& layout) {
  LayoutTopology topo;
  topo.spec = &layout.problem;
  topo.T = layout.duration;
  topo.subs.reserve(layout.subs.size());
  for (const Subdomain& sub : layout.subs) {
    SubTopo st;
    st.left_line = sub.left_line;
    st.right_line = sub.right_line;
    st.cone = sub.ref == RefDomain::kCone;
    st.has_ic = sub.has_ic;
    st.ic_left = layout.lines[std::size_t(sub.left_line)].anchor;
    st.ic_right = layout.lines[std::size_t(sub.right_line)].anchor;
    topo.subs.push_back(st);
  }
  for (std::size_t li = 0; li < layout.lines.size(); ++li) {
    if (layout.lines[li].frozen()) continue;
    topo.rh_lines.push_back(int(li));
    topo.rh_neighbors.emplace_back(int(li) - 1, int(li));
  }
  topo.left_state = layout.problem.initial.left_state;
  topo.right_state = layout.problem.initial.right_state;
  topo.left_rows = incoming_rows(layout.problem.flux, topo.left_state, true);
  topo.right_rows = incoming_rows(layout.problem.flux, topo.right_state, false);
  return topo;
}

FieldHandle<double> analytic_field(std::function<StateVec(double, double)> value,
                                   std::function<StateVec(double, double)> dx,
                                   std::function<StateVec(double, double)> dt) {
  FieldHandle<double> h;
  h.jets = [value, dx, dt](const double& x, double t) {
    const StateVec v = value(x, t);
    const StateVec gx = dx(x, t);
    const StateVec gt = dt(x, t);
    SmallVec<Jet<double, 2>, 3> out(v.size());
    for (std::size_t c = 0; c < v.size(); ++c) out[c] = Jet<double, 2>{v[c], {gx[c], gt[c]}};
    return out;
  };
  h.value = [value](const double& x, double t) { return value(x, t); };
  h.value_at = [value](double x, double t) { return value(x, t); };
  return h;
}

LineHandle<double> analytic_line(std::function<double(double)> pos,
                                 std::function<double(double)> slope) {
  LineHandle<double> h;
  h.value = pos;
  h.jet = [pos, slope](double t) { return Jet<double, 1>{pos(t), {slope(t)}}; };
  return h;
}

LossBreakdown global_loss(const SubdomainLayout& layout, const SampleSet& samples,
                          const LossWeights& w) {
  const LayoutTopology topo = topology_of(layout);
  std::vector<FieldHandle<double>> fields;
  fields.reserve(layout.subs.size());
  for (const Subdomain& sub : layout.subs) fields.push_back(field_handle(sub.net));
  std::vector<LineHandle<double>> lines;
  lines.reserve(layout.lines.size());
  for (const DiscontinuityLine& l : layout.lines) lines.push_back(line_handle(l));
  return to_breakdown(
      emit_global_loss(layout.problem.flux, topo, fields, lines, samples, w, double_konst()));
}

LossBreakdown global_loss_analytic(const SubdomainLayout& layout, const AnalyticModel& model,
                                   const SampleSet& samples, const LossWeights& w) {
  const LayoutTopology topo = topology_of(layout);
  return to_breakdown(emit_global_loss(layout.problem.flux, topo, model.fields, model.lines,
                                       samples, w, double_konst()));
}

}  // namespace shocktrack
