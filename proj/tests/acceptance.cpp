// Acceptance checks: each one trains or solves a small benchmark and
// verifies a pinned quantitative outcome against an oracle computed here.
// Prints one pass/fail line per criterion; the exit code is the number of
// failures. Optional argv: criterion ids to run (default: all).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shocktrack/events.hpp"
#include "shocktrack/geometry.hpp"
#include "shocktrack/godunov.hpp"
#include "shocktrack/loss.hpp"
#include "shocktrack/riemann.hpp"
#include "shocktrack/run_config.hpp"
#include "shocktrack/train.hpp"

using namespace shocktrack;

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

ProblemSpec scalar_problem(FluxModel flux, double a, double b, double T,
                           std::vector<double> bps, std::vector<Profile> profs) {
  ProblemSpec p;
  p.flux = std::move(flux);
  p.domain = {a, b};
  p.final_time = T;
  p.initial.breakpoints = std::move(bps);
  p.initial.profiles = std::move(profs);
  p.initial.left_state = p.initial.profiles.front().eval(p.domain.a);
  p.initial.right_state = p.initial.profiles.back().eval(p.domain.b);
  p.validate();
  return p;
}

double max_line_err(const DiscontinuityLine& line, double T,
                    const std::function<double(double)>& exact) {
  double e = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = T * i / 400.0;
    e = std::max(e, std::abs(line_position(line, t) - exact(t)));
  }
  return e;
}

double norm2(const StateVec& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double reldist(const StateVec& a, const StateVec& b) {
  StateVec d = a;
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
  return norm2(d) / norm2(b);
}

// criterion 1's trained model, reused by the diffusion-contrast check
std::unique_ptr<SubdomainLayout> g_two_shock_trained;

SubdomainLayout train_two_shock_reported() {
  const RunConfig cfg = bundled_config("two-shock");
  SubdomainLayout layout = make_layout(cfg.problem, cfg.archs, 1);
  const SampleSet samples = draw_samples(cfg.samples, cfg.problem.final_time, 1);
  train_layout(layout, samples, cfg.weights, cfg.train);
  return layout;
}

// --- 1: two shocks from three constant states, reported network sizes ------

Outcome c1_two_shock_tracking() {
  g_two_shock_trained =
      std::make_unique<SubdomainLayout>(train_two_shock_reported());
  const SubdomainLayout& layout = *g_two_shock_trained;
  const double e1 =
      max_line_err(layout.lines[1], 0.5, [](double t) { return 0.75 * t; });
  const double e2 =
      max_line_err(layout.lines[2], 0.5, [](double t) { return 1.0 - 0.75 * t; });
  return {e1 <= 0.02 && e2 <= 0.02,
          fmt("max line errors %.2e / %.2e (tol 0.02)", e1, e2)};
}

// --- 2: concave flux, stationary shock then fan-driven bend ----------------

Outcome c2_concave_shock_ode() {
  // stationary shock: states (1/2, 3/2) share the flux value 3
  LayoutArchitectures archs;
  archs.field_hidden = {10};
  SampleCounts counts;
  TrainConfig tc;
  tc.max_epochs = 20000;
  tc.lr = 8e-3;
  tc.adapt_lr = true;
  tc.history_every = 1000;
  LossWeights w;

  const ProblemSpec pa =
      scalar_problem(FluxModel::quadratic(), -1.0, 1.0, 0.5, {0.0},
                     {Profile::constant(StateVec{0.5}), Profile::constant(StateVec{1.5})});
  SubdomainLayout la = make_layout(pa, archs, 1);
  train_layout(la, draw_samples(counts, pa.final_time, 1), w, tc);
  const double ea = max_line_err(la.lines[1], 0.5, [](double) { return 0.0; });

  // after a left fan reaches the shock it bends; restart on the post-impact
  // data: fan trace 1/2 - x/4 on (-2, 0), constant 3/2 ahead, horizon 1/4.
  // the spreading fan carries a -4x speed sensitivity to field bias, so this
  // stage needs the deeper net and the longer run
  const ProblemSpec pb = scalar_problem(
      FluxModel::quadratic(), -2.0, 1.0, 0.25, {0.0},
      {Profile::affine(StateVec{-0.25}, StateVec{0.5}), Profile::constant(StateVec{1.5})});
  LayoutArchitectures archs_b = archs;
  archs_b.field_hidden = {12, 12};
  SubdomainLayout lb = make_layout(pb, archs_b, 1);
  TrainConfig tcb = tc;
  tcb.max_epochs = 40000;
  tcb.lr = 1e-2;
  train_layout(lb, draw_samples(counts, pb.final_time, 1), w, tcb);

  // jump-condition ODE for the bending shock, integrated by classical RK4:
  // the fan keeps spreading, so its trace at the line depends on the shifted
  // time tau + 1/2
  auto rhs = [](double tau, double g) {
    const double u = 1.0 - (g + 2.0) / (8.0 * (tau + 0.5));
    return 8.0 - 4.0 * (u + 1.5);
  };
  double g = 0.0, t = 0.0;
  const int steps = 4000;
  const double h = 0.25 / steps;
  for (int i = 0; i < steps; ++i) {
    const double k1 = rhs(t, g);
    const double k2 = rhs(t + h / 2, g + h / 2 * k1);
    const double k3 = rhs(t + h / 2, g + h / 2 * k2);
    const double k4 = rhs(t + h, g + h * k3);
    g += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  const double closed = -5.0 + 2.0 * std::sqrt(6.0);
  if (std::abs(g - closed) > 1e-9)
    return {false, fmt("ODE integrator drifted from the closed form: %.3e", g - closed)};
  const double eb = std::abs(line_position(lb.lines[1], 0.25) - g);
  return {ea <= 0.02 && eb <= 0.03,
          fmt("stationary |n| %.2e (tol 0.02), bent-shock endpoint err %.2e (tol 0.03)", ea, eb)};
}

// --- 3: recorded gradients against central finite differences --------------

struct GradProbe {
  long checked = 0;
  double worst = 0.0;
};

// |grad - fd| <= 1e-6 |fd| with an absolute floor at the FD noise level
bool grad_close(double g, double fd, GradProbe& probe) {
  const double err = std::abs(g - fd);
  const double rel = err / std::max(std::abs(fd), 1e-8);
  probe.worst = std::max(probe.worst, rel);
  ++probe.checked;
  return err <= std::max(1e-6 * std::abs(fd), 1e-8);
}

Outcome c3_gradients_vs_fd() {
  const ProblemSpec p = bundled_config("two-shock").problem;
  LayoutArchitectures archs;
  archs.field_hidden = {6};
  archs.line_hidden = {4};
  const SubdomainLayout layout = make_layout(p, archs, 3);
  SampleCounts counts;
  counts.interior = 80;
  counts.initial = 40;
  counts.times = 40;
  counts.cone = 40;
  const SampleSet samples = draw_samples(counts, p.final_time, 3);
  auto prog = build_global_program(layout, samples, LossWeights{});

  std::vector<std::size_t> slots;
  for (std::size_t k = 0; k < prog->nets.size(); ++k)
    if (prog->trainable[k])
      for (std::size_t i = 0; i < prog->nets[k].params.size(); ++i)
        slots.push_back(prog->nets[k].slot_base + i);
  for (std::size_t s : prog->free_leaves) slots.push_back(s);

  std::mt19937_64 rng(7);
  GradProbe probe;
  bool ok = true;
  const double h = 1e-5;
  auto check_term = [&](ad::Var root, int draws) {
    prog->tape.forward();
    prog->tape.backward(root);
    std::vector<std::pair<std::size_t, double>> picked;
    for (int d = 0; d < draws; ++d) {
      const std::size_t s = slots[rng() % slots.size()];
      picked.emplace_back(s, prog->tape.leaf_adjoint(s));
    }
    for (auto [s, grad] : picked) {
      const double v0 = prog->tape.leaf_value(s);
      prog->tape.set_leaf(s, v0 + h);
      prog->tape.forward();
      const double fp = prog->tape.value(root);
      prog->tape.set_leaf(s, v0 - h);
      prog->tape.forward();
      const double fm = prog->tape.value(root);
      prog->tape.set_leaf(s, v0);
      ok = grad_close(grad, (fp - fm) / (2 * h), probe) && ok;
    }
  };
  check_term(prog->roots.residual, 25);
  check_term(prog->roots.rh, 25);
  check_term(prog->roots.ic, 25);

  // the interface penalty only appears in decomposed programs; record it
  // directly on a fresh tape over two line networks
  {
    ad::Tape tape;
    TapedNet na = bind(tape, layout.lines[1].net);
    TapedNet nb = bind(tape, layout.lines[2].net);
    LineHandle<ad::Var> ha = line_handle(tape, &na, layout.lines[1]);
    LineHandle<ad::Var> hb = line_handle(tape, &nb, layout.lines[2]);
    auto konst = [&tape](double c) { return tape.constant(c); };
    const ad::Var root = emit_interface<ad::Var>(ha, hb, samples.times, konst);
    std::vector<std::size_t> ls;
    for (std::size_t i = 0; i < na.params.size(); ++i) ls.push_back(na.slot_base + i);
    for (std::size_t i = 0; i < nb.params.size(); ++i) ls.push_back(nb.slot_base + i);
    tape.forward();
    tape.backward(root);
    std::vector<std::pair<std::size_t, double>> picked;
    for (int d = 0; d < 25; ++d) {
      const std::size_t s = ls[rng() % ls.size()];
      picked.emplace_back(s, tape.leaf_adjoint(s));
    }
    for (auto [s, grad] : picked) {
      const double v0 = tape.leaf_value(s);
      tape.set_leaf(s, v0 + h);
      tape.forward();
      const double fp = tape.value(root);
      tape.set_leaf(s, v0 - h);
      tape.forward();
      const double fm = tape.value(root);
      tape.set_leaf(s, v0);
      ok = grad_close(grad, (fp - fm) / (2 * h), probe) && ok;
    }
  }
  return {ok, fmt("%ld draws across residual/jump/initial/interface, worst rel %.2e",
                  probe.checked, probe.worst)};
}

// --- 4: exact solution adapters zero the loss -------------------------------

Outcome c4_exact_solution_loss() {
  const ProblemSpec p = bundled_config("two-shock").problem;
  const SubdomainLayout layout = make_layout(p, LayoutArchitectures{}, 1);
  auto zero = [](double, double) { return StateVec{0.0}; };
  auto cf = [&](double c) {
    return analytic_field([c](double, double) { return StateVec{c}; }, zero, zero);
  };
  auto sl = [](double x0, double v) {
    return analytic_line([x0, v](double t) { return x0 + v * t; },
                         [v](double) { return v; });
  };
  AnalyticModel m;
  m.fields = {cf(1.0), cf(0.5), cf(-2.0)};
  m.lines = {sl(-1.0, 0.0), sl(0.0, 0.75), sl(1.0, -0.75), sl(2.0, 0.0)};
  const SampleSet samples = draw_samples(SampleCounts{}, p.final_time, 5);
  const LossBreakdown b = global_loss_analytic(layout, m, samples, LossWeights{});
  return {b.total <= 1e-10,
          fmt("total %.2e (tol 1e-10): residual %.1e jump %.1e initial %.1e", b.total,
              b.residual, b.rh, b.ic)};
}

// --- 5: shock collision is detected and the run restarts past it -----------

Outcome c5_interaction_restart() {
  const RunConfig cfg = bundled_config("shock-interaction");
  SubdomainLayout layout = make_layout(cfg.problem, cfg.archs, 1);
  const SampleSet samples = draw_samples(cfg.samples, cfg.problem.final_time, 1);
  train_layout(layout, samples, cfg.weights, cfg.train);

  const std::optional<EventReport> det = detect_interaction(layout, 2);
  if (!det) return {false, "no crossing found on the trained lines"};
  const bool hit =
      std::abs(det->t - 0.45) <= 0.02 && std::abs(det->x - 0.55) <= 0.02;

  SubdomainLayout stage2 = redecompose(layout, *det, cfg.archs, 2);
  const bool two_subs = stage2.subs.size() == 2 && stage2.interior_line_count() == 1;
  TrainConfig tc2 = cfg.train;
  tc2.max_epochs = 8000;
  const SampleSet s2 = draw_samples(cfg.samples, stage2.duration, 2);
  train_layout(stage2, s2, cfg.weights, tc2);
  bool entropic = true;
  for (int i = 1; i <= 25; ++i) {
    const double tau = stage2.duration * i / 26.0;
    entropic = entropic && check_lax(stage2, 1, tau) == LaxClass::kEntropic;
  }
  return {hit && two_subs && entropic,
          fmt("crossing t=%.4f x=%.4f (want 0.45/0.55 +-0.02), %zu subdomains, merged "
              "line %s",
              det->t, det->x, stage2.subs.size(),
              entropic ? "admissible throughout" : "NOT admissible")};
}

// --- 6: shock forming from smooth data on a movable line -------------------

Outcome c6_shock_generation() {
  // steepest descent of 3/4 - tanh(4x) sits at x = 0; characteristics first
  // cross at t = 1/4
  ProblemSpec p = scalar_problem(FluxModel::burgers(), -2.0, 2.0, 0.5, {},
                                 {Profile::tanh_ramp(StateVec{0.75}, StateVec{-1.0}, 4.0, 0.0)});
  p.artificial = {0.0};
  p.validate();
  LayoutArchitectures archs;
  archs.field_hidden = {30};
  SampleCounts counts;
  counts.interior = 900;
  counts.initial = 300;
  counts.times = 300;
  TrainConfig tc;
  tc.max_epochs = 20000;
  tc.lr = 4e-3;
  tc.adapt_lr = true;
  tc.history_every = 1000;
  SubdomainLayout layout = make_layout(p, archs, 1);
  train_layout(layout, draw_samples(counts, p.final_time, 1), LossWeights{}, tc);

  const double tol = generation_tolerance(p);
  const std::optional<EventReport> det = detect_generation(layout, 1, tol);
  if (!det) return {false, fmt("jump never exceeded %.3f", tol)};
  const bool hit = std::abs(det->t - 0.25) <= 0.025;

  auto fj = [&](double tau) { return std::abs(flux_jump(layout, 1, tau)[0]); };
  double before = 0.0;
  for (int i = 0; i <= 20; ++i) before = std::max(before, fj(0.9 * det->t * i / 20.0));
  const double f1 = fj(det->t + 0.35 * (0.5 - det->t));
  const double f2 = fj(det->t + 0.70 * (0.5 - det->t));
  const double f3 = fj(0.499);
  const bool grows = before <= tol && f1 > before && f3 > f2 && f2 > f1 && f3 > 2 * tol;
  return {hit && grows,
          fmt("t*=%.4f (want 0.25 +-0.025), flux jump %.3f before vs %.3f/%.3f/%.3f after "
              "(tol %.3f)",
              det->t, before, f1, f2, f3, tol)};
}

// --- 7: colliding streams, star state from intersecting wave curves --------

Outcome c7_wave_curve_intersection() {
  const FluxModel sw = FluxModel::shallow_water(1.0);
  const StateVec ul{3.0, 5.0}, ur{3.0, -5.0};

  WaveCurve c1 = make_curve(sw, ul, 1, WaveKind::kShock, 7.0, {5, 5}, 3);
  WaveCurve c2 = make_curve(sw, ur, 2, WaveKind::kShock, 7.0, {5, 5}, 4);
  CurveFitConfig fc;
  fc.epochs = 15000;
  fc.lr = 2e-2;
  fc.points = 150;
  fc.seed = 1;
  fit_curve(sw, c1, fc);
  fc.seed = 2;
  fit_curve(sw, c2, fc);
  const Intersection ix = intersect_two(c1, c2, 5e-2, true);
  const double h = ix.state[0];
  const double exact = 6.36571637990463662;  // jump-relation star depth, Newton to 1e-12
  const bool a = std::abs(h - 6.428) / 6.428 <= 0.10;
  const bool b = std::abs(h - exact) / exact <= 0.02;

  // mixed data: 1-shock / 2-rarefaction, independent curve parameters
  DecomposeConfig dc;
  dc.fit.epochs = 40000;
  dc.fit.lr = 2e-2;
  dc.fit.points = 150;
  dc.shared_xi = false;
  const Decomposition mixed = decompose_two(sw, StateVec{5.0, 3.0}, StateVec{8.0, 2.5},
                                            {WaveKind::kShock, WaveKind::kRarefaction}, dc);
  const double hm = mixed.stars[0][0];
  const bool c = std::abs(hm - 6.3298) / 6.3298 <= 0.10;
  return {a && b && c,
          fmt("h*=%.4f: %.1f%% of 6.428 (tol 10%%) %s, %.1f%% of %.5f (tol 2%%) %s; mixed "
              "h*=%.4f: %.1f%% of 6.3298 (tol 10%%) %s",
              h, 100 * std::abs(h - 6.428) / 6.428, a ? "ok" : "FAIL",
              100 * std::abs(h - exact) / exact, exact, b ? "ok" : "FAIL", hm,
              100 * std::abs(hm - 6.3298) / 6.3298, c ? "ok" : "FAIL")};
}

// --- 8: alternating Schwarz sweeps close the interface gap -----------------

Outcome c8_ddm_convergence() {
  const RunConfig cfg = bundled_config("ddm-three-subdomains");
  SubdomainLayout layout = make_layout(cfg.problem, cfg.archs, 1);
  DdmDecomposition dec = split_layout(layout);
  const SampleSet samples = draw_samples(cfg.samples, cfg.problem.final_time, 1);
  const DdmReport rep = ddm_train(dec, samples, cfg.weights, cfg.ddm);

  bool monotone = true;
  double worst_rise = 0.0;
  for (std::size_t k = 1; k < rep.sweeps.size(); ++k)
    for (std::size_t i = 0; i < rep.sweeps[k].local_total.size(); ++i) {
      const double prev = rep.sweeps[k - 1].local_total[i];
      const double cur = rep.sweeps[k].local_total[i];
      worst_rise = std::max(worst_rise, cur / prev - 1.0);
      monotone = monotone && cur <= 1.05 * prev;
    }
  const bool ok = rep.converged && rep.final_mismatch < 1e-3 && rep.sweeps_run <= 50;
  return {ok && monotone,
          fmt("mismatch %.2e after %ld sweeps (tol 1e-3 in 50), worst local-loss rise "
              "%.1f%% (tol 5%%)",
              rep.final_mismatch, rep.sweeps_run, 100 * worst_rise)};
}

// --- 9: first-order reference converges at order one and smears ------------

Outcome c9_fv_convergence_contrast() {
  const RunConfig cfg = bundled_config("two-shock");
  // exact profile at t = 1/2: jumps at 3/8 and 5/8
  auto exact_pt = [](double x) { return x < 0.375 ? 1.0 : (x < 0.625 ? 0.5 : -2.0); };
  auto exact_avg = [](double xl, double xr) {
    auto seg = [&](double a, double b, double u) {
      return u * std::max(0.0, std::min(b, xr) - std::max(a, xl));
    };
    return (seg(-9.0, 0.375, 1.0) + seg(0.375, 0.625, 0.5) + seg(0.625, 9.0, -2.0)) /
           (xr - xl);
  };
  auto l1_vs_avg = [&](const FvGrid& g) {
    double e = 0.0;
    for (std::size_t i = 0; i < g.centers.size(); ++i)
      e += std::abs(g.data.back()[i] -
                    exact_avg(g.centers[i] - g.dx / 2, g.centers[i] + g.dx / 2)) *
           g.dx;
    return e;
  };
  FvConfig f2 = cfg.fv;
  f2.cells = 200;
  FvConfig f4 = cfg.fv;
  f4.cells = 400;
  const FvGrid g2 = godunov_solve(cfg.problem, f2);
  const FvGrid g4 = godunov_solve(cfg.problem, f4);
  const double e2 = l1_vs_avg(g2), e4 = l1_vs_avg(g4);
  const double ratio = e2 / e4;
  const bool order_one = ratio >= 1.8 && ratio <= 2.2;

  // diffusion contrast against the trained sharp model near the slow shock
  if (!g_two_shock_trained)
    g_two_shock_trained = std::make_unique<SubdomainLayout>(train_two_shock_reported());
  const SubdomainLayout& nn = *g_two_shock_trained;
  int fv_mid = 0, nn_mid = 0;
  double e_fv = 0.0, e_nn = 0.0;
  for (std::size_t i = 0; i < g2.centers.size(); ++i) {
    const double x = g2.centers[i];
    const double v_fv = g2.data.back()[i];
    const double v_nn = reconstruct(nn, x, 0.5)[0];
    if (x > 0.15 && x < 0.6) {
      if (v_fv > 0.6 && v_fv < 0.9) ++fv_mid;
      if (v_nn > 0.6 && v_nn < 0.9) ++nn_mid;
    }
    // pointwise error away from the jump cells themselves
    if (std::abs(x - 0.375) > 1.5 * g2.dx && std::abs(x - 0.625) > 1.5 * g2.dx) {
      e_fv += std::abs(v_fv - exact_pt(x)) * g2.dx;
      e_nn += std::abs(v_nn - exact_pt(x)) * g2.dx;
    }
  }
  const bool contrast = fv_mid >= 2 && nn_mid == 0 && e_fv > 3.0 * e_nn;
  return {order_one && contrast,
          fmt("L1 ratio 200/400 = %.2f (want 1.8-2.2); smeared cells %d vs %d, off-jump L1 "
              "%.3f vs %.4f",
              ratio, fv_mid, nn_mid, e_fv, e_nn)};
}

// --- 10: line accuracy improves with network width -------------------------

Outcome c10_width_sweep() {
  const RunConfig cfg = bundled_config("shock-fan-shock");
  FvConfig fine;
  fine.cells = 15000;
  fine.cfl = 0.99;
  fine.snapshots = 101;
  const FvGrid ref = godunov_solve(cfg.problem, fine);
  const ShockPath left = extract_shock_path(ref, 0, 0.1);
  const ShockPath right = extract_shock_path(ref, 1, 0.1);

  // closed forms of the two trajectories gate the tracked reference
  auto g1 = [](double t) { return ((1 + 4 * t) - std::sqrt(1 + 4 * t)) / 2; };
  auto g2 = [](double t) { return 2 * std::sqrt(1 + 4 * t) - (1 + 4 * t); };
  const double r1 = l1_dl_error(left.times, [&] {
        std::vector<double> v;
        for (double t : left.times) v.push_back(g1(t));
        return v;
      }(), left);
  const double r2 = l1_dl_error(right.times, [&] {
        std::vector<double> v;
        for (double t : right.times) v.push_back(g2(t));
        return v;
      }(), right);
  if (r1 > 5e-3 || r2 > 5e-3)
    return {false, fmt("tracked reference off the closed forms: %.2e / %.2e", r1, r2)};

  std::vector<double> errs;
  for (int neurons : {2, 4, 8, 16}) {
    LayoutArchitectures archs = cfg.archs;
    archs.field_hidden = {neurons};
    SubdomainLayout layout = make_layout(cfg.problem, archs, 1);
    const SampleSet samples = draw_samples(cfg.samples, cfg.problem.final_time, 1);
    train_layout(layout, samples, cfg.weights, cfg.train);
    std::vector<double> p1, p2;
    for (double t : left.times) p1.push_back(line_position(layout.lines[1], t));
    for (double t : right.times) p2.push_back(line_position(layout.lines[2], t));
    errs.push_back(l1_dl_error(left.times, p1, left) +
                   l1_dl_error(right.times, p2, right));
  }
  const bool mono = errs[0] > errs[1] && errs[1] > errs[2] && errs[2] > errs[3];
  return {mono, fmt("summed line errors %.2e > %.2e > %.2e > %.2e across widths 2/4/8/16: %s",
                    errs[0], errs[1], errs[2], errs[3], mono ? "monotone" : "NOT monotone")};
}

// --- property: weak gas-dynamics fans split onto three fitted curves -------

Outcome cp_euler_three_wave() {
  const FluxModel gas = FluxModel::euler(1.4);
  auto prim = [](double r, double u, double p) {
    return StateVec{r, r * u, p / 0.4 + 0.5 * r * u * u};
  };
  const std::vector<std::pair<StateVec, StateVec>> pairs = {
      {prim(1.0, 0.0, 1.0), prim(0.9, 0.05, 0.85)},
      {prim(1.05, -0.05, 1.1), prim(1.0, 0.0, 1.0)},
  };
  bool ok = true;
  std::string detail;
  int idx = 0;
  for (const auto& [l, r] : pairs) {
    ++idx;
    const Decomposition ex = exact_riemann(gas, l, r);
    const std::array<WaveKind, 3> kinds = {ex.waves[0].kind, ex.waves[1].kind,
                                           ex.waves[2].kind};
    DecomposeConfig dc;
    dc.fit.epochs = 20000;
    dc.fit.lr = 1e-2;
    dc.fit.points = 150;
    dc.epochs = 12000;
    const Decomposition nn = decompose_three(gas, l, r, kinds, dc);
    const double d0 = reldist(nn.stars[0], ex.stars[0]);
    const double d1 = reldist(nn.stars[1], ex.stars[1]);
    bool lax_ok = true;
    for (int k = 0; k < 3; ++k) {
      const StateVec& before = k == 0 ? nn.left : nn.stars[k - 1];
      const StateVec& after = k == 2 ? nn.right : nn.stars[k];
      const LaxClass cls =
          check_lax_states(gas, before, after, nn.waves[k].speed, nn.waves[k].family);
      if (nn.waves[k].kind == WaveKind::kShock) lax_ok = lax_ok && cls == LaxClass::kEntropic;
      if (nn.waves[k].kind == WaveKind::kContact) lax_ok = lax_ok && cls == LaxClass::kContact;
      if (nn.waves[k].kind == WaveKind::kRarefaction)
        lax_ok = lax_ok && cls != LaxClass::kEntropic;
    }
    ok = ok && d0 <= 0.02 && d1 <= 0.02 && lax_ok;
    if (!detail.empty()) detail += "; ";
    detail += fmt("pair %d stars off %.2e/%.2e (tol 0.02)%s", idx, d0, d1,
                  lax_ok ? "" : ", inconsistent wave classes");
  }
  return {ok, detail};
}

struct Entry {
  const char* id;
  const char* name;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Entry> entries = {
      {"1", "two-shock tracking at reported sizes", c1_two_shock_tracking},
      {"2", "stationary shock and fan-driven bend", c2_concave_shock_ode},
      {"3", "recorded gradients match finite differences", c3_gradients_vs_fd},
      {"4", "exact solution zeroes the loss", c4_exact_solution_loss},
      {"5", "collision detection and restart", c5_interaction_restart},
      {"6", "shock generation on a movable line", c6_shock_generation},
      {"7", "wave-curve intersection star state", c7_wave_curve_intersection},
      {"8", "Schwarz sweeps close the interface gap", c8_ddm_convergence},
      {"9", "reference scheme converges at order one and smears", c9_fv_convergence_contrast},
      {"10", "line accuracy improves with width", c10_width_sweep},
      {"euler", "weak gas fans split onto three curves", cp_euler_three_wave},
  };
  std::vector<std::string> want(argv + 1, argv + argc);
  auto selected = [&](const char* id) {
    if (want.empty()) return true;
    return std::find(want.begin(), want.end(), id) != want.end();
  };

  int failures = 0, ran = 0;
  for (const Entry& e : entries) {
    if (!selected(e.id)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.fn();
    } catch (const std::exception& ex) {
      out = {false, fmt("exception: %s", ex.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %s: %s (%.1fs) %s\n", out.pass ? "PASS" : "FAIL", e.id,
                e.name, secs, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures;
}
