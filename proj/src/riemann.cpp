#include "shocktrack/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shocktrack/flux.hpp"

namespace shocktrack {

namespace {

double norm2(const StateVec& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

double lambda_of(const FluxModel& f, const StateVec& q, int family) {
  return eval_eigen(f, q).lambda[std::size_t(family - 1)];
}

std::vector<double> draw_xi(double lo, double hi, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (auto& x : xs) x = lo + (hi - lo) * uniform01(rng());
  return xs;
}

}  // namespace

StateVec curve_eval(const WaveCurve& c, double xi) {
  const double s = (xi - c.xi0) / c.xi_scale;
  const std::array<Jet<double, 0>, 1> in{jet_const<0>(s)};
  const auto out = net_eval(view(c.net), in);
  StateVec v(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) v[i] = c.anchor[i] + (xi - c.xi0) * out[i].v;
  return v;
}

StateVec curve_deriv(const WaveCurve& c, double xi) {
  const double s = (xi - c.xi0) / c.xi_scale;
  const std::array<Jet<double, 1>, 1> in{Jet<double, 1>{s, {1.0 / c.xi_scale}}};
  const auto out = net_eval(view(c.net), in);
  StateVec v(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) v[i] = out[i].v + (xi - c.xi0) * out[i].d[0];
  return v;
}

WaveCurve make_curve(const FluxModel& flux, const StateVec& anchor, int family, WaveKind kind,
                     double span, const std::vector<int>& hidden, std::uint64_t seed) {
  if (int(anchor.size()) != flux.components())
    throw ConfigError("curve anchor has wrong number of components");
  if (family < 1 || family > flux.components()) throw ConfigError("curve family out of range");
  if (!(span > 0)) throw ConfigError("curve parameter span must be positive");
  check_admissible(flux, anchor);

  WaveCurve c;
  c.family = family;
  c.kind = kind;
  c.direction = kind == WaveKind::kRarefaction ? -1 : +1;
  c.anchor = anchor;
  c.xi0 = kind == WaveKind::kRarefaction ? lambda_of(flux, anchor, family) : 0.0;
  c.xi_lo = c.xi0;
  c.xi_hi = c.xi0 + span;
  c.xi_scale = span;
  Architecture arch;
  arch.sizes.push_back(1);
  for (int h : hidden) arch.sizes.push_back(h);
  arch.sizes.push_back(flux.components());
  c.net = MlpParams::init(arch, seed);
  return c;
}

double default_curve_span(const StateVec& ul, const StateVec& ur) {
  StateVec d(ul.size());
  for (std::size_t i = 0; i < ul.size(); ++i) d[i] = ul[i] - ur[i];
  const double n = norm2(d);
  return n > 1e-12 ? 2.0 * n : 1.0;
}

CurveFitReport fit_curve(const FluxModel& flux, WaveCurve& curve, const CurveFitConfig& cfg) {
  curve.net.arch.validate();
  CurveFitReport report;
  double span = curve.xi_hi - curve.xi_lo;
  if (span < 1e-15) {
    report.xi_hi_used = curve.xi_hi;
    return report;
  }
  const MlpParams initial = curve.net;

  for (int attempt = 0; attempt <= cfg.max_curtails; ++attempt) {
    const auto xs = draw_xi(curve.xi_lo, curve.xi_lo + span, cfg.points, cfg.seed);

    Program prog;
    ad::Tape& tape = prog.tape;
    prog.nets.push_back(bind(tape, initial));
    prog.trainable.push_back(1);
    const NetView<ad::Var> nv = prog.nets[0].view();

    const ad::Var one_over_scale = tape.constant(1.0 / span);
    ad::Var defect = tape.constant(0.0);
    for (double xi : xs) {
      const double off = xi - curve.xi0;
      const std::array<Jet<ad::Var, 1>, 1> in{
          Jet<ad::Var, 1>{tape.constant(off / span), {one_over_scale}}};
      const auto out = net_eval(nv, in);
      SmallVec<ad::Var, 3> nu(out.size());
      for (std::size_t c = 0; c < out.size(); ++c) nu[c] = out[c].v * off + curve.anchor[c];
      const auto r = eig_vector(flux, nu, curve.family);
      for (std::size_t c = 0; c < out.size(); ++c) {
        const ad::Var nud = out[c].v + out[c].d[0] * off;
        defect = defect + sqr(nud - r[c] * double(curve.direction));
      }
    }
    defect = defect * (1.0 / double(xs.size()));
    prog.roots.residual = defect;
    prog.roots.rh = tape.constant(0.0);
    prog.roots.ic = tape.constant(0.0);
    prog.roots.interface_match = tape.constant(0.0);
    prog.roots.total = defect;

    TrainConfig tc;
    tc.max_epochs = cfg.epochs;
    tc.lr = cfg.lr;
    tc.history_every = 25;
    try {
      TrainReport rep = gd_core(prog, tc, {}, 1.0);
      prog.read_net(0, curve.net);
      curve.xi_hi = curve.xi_lo + span;
      curve.xi_scale = span;
      report.history = std::move(rep.history);
      report.final_defect = rep.final_total;
      report.xi_hi_used = curve.xi_hi;
      return report;
    } catch (const DivergenceError&) {
      // the state typically left the admissible set near the far end;
      // shrink the interval and refit from scratch
      span *= 0.8;
      ++report.curtails;
    }
  }
  throw DivergenceError("wave curve fit diverged after " +
                            std::to_string(report.curtails) + " interval curtailments",
                        0, "residual");
}

namespace {

double curve_gap(const WaveCurve& c1, const WaveCurve& c2, double x1, double x2) {
  const StateVec a = curve_eval(c1, x1);
  const StateVec b = curve_eval(c2, x2);
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Golden-section minimization of g on [lo, hi].
template <class G>
double golden_min(const G& g, double lo, double hi, int iters) {
  constexpr double kInv = 0.6180339887498949;
  double x1 = hi - kInv * (hi - lo);
  double x2 = lo + kInv * (hi - lo);
  double g1 = g(x1), g2 = g(x2);
  for (int i = 0; i < iters; ++i) {
    if (g1 < g2) {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - kInv * (hi - lo);
      g1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + kInv * (hi - lo);
      g2 = g(x2);
    }
  }
  return 0.5 * (lo + hi);
}

Intersection finish_intersection(const WaveCurve& c1, const WaveCurve& c2, double x1, double x2,
                                 double gap_tol) {
  Intersection res;
  res.xi1 = x1;
  res.xi2 = x2;
  const StateVec a = curve_eval(c1, x1);
  const StateVec b = curve_eval(c2, x2);
  res.state.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) res.state[i] = 0.5 * (a[i] + b[i]);
  res.gap = curve_gap(c1, c2, x1, x2);
  if (res.gap > gap_tol)
    throw DecompositionError("wave curves do not intersect (closest gap " +
                             std::to_string(res.gap) + ")");
  return res;
}

}  // namespace

Intersection intersect_two(const WaveCurve& c1, const WaveCurve& c2, double gap_tol,
                           bool shared_xi) {
  if (shared_xi) {
    const double lo = std::max(c1.xi_lo, c2.xi_lo);
    const double hi = std::min(c1.xi_hi, c2.xi_hi);
    if (!(hi > lo))
      throw DecompositionError(
          "curve parameter intervals do not overlap; use the independent-parameter variant");
    const int n = 2000;
    int best = 0;
    double best_gap = curve_gap(c1, c2, lo, lo);
    for (int i = 1; i <= n; ++i) {
      const double x = lo + (hi - lo) * double(i) / n;
      const double g = curve_gap(c1, c2, x, x);
      if (g < best_gap) {
        best_gap = g;
        best = i;
      }
    }
    const double blo = lo + (hi - lo) * double(std::max(0, best - 1)) / n;
    const double bhi = lo + (hi - lo) * double(std::min(n, best + 1)) / n;
    const double x = golden_min([&](double xi) { return curve_gap(c1, c2, xi, xi); }, blo, bhi,
                                200);
    return finish_intersection(c1, c2, x, x, gap_tol);
  }

  const int n = 240;
  double x1 = c1.xi_lo, x2 = c2.xi_lo;
  double best_gap = curve_gap(c1, c2, x1, x2);
  for (int i = 0; i <= n; ++i) {
    const double a = c1.xi_lo + (c1.xi_hi - c1.xi_lo) * double(i) / n;
    for (int j = 0; j <= n; ++j) {
      const double b = c2.xi_lo + (c2.xi_hi - c2.xi_lo) * double(j) / n;
      const double g = curve_gap(c1, c2, a, b);
      if (g < best_gap) {
        best_gap = g;
        x1 = a;
        x2 = b;
      }
    }
  }
  for (int round = 0; round < 30; ++round) {
    x1 = golden_min([&](double a) { return curve_gap(c1, c2, a, x2); }, c1.xi_lo, c1.xi_hi, 120);
    x2 = golden_min([&](double b) { return curve_gap(c1, c2, x1, b); }, c2.xi_lo, c2.xi_hi, 120);
  }
  return finish_intersection(c1, c2, x1, x2, gap_tol);
}

Wave classify_wave(const FluxModel& flux, const StateVec& before, const StateVec& after,
                   int family) {
  const double lb = lambda_of(flux, before, family);
  const double la = lambda_of(flux, after, family);
  const double tol = 1e-6 * std::max({1.0, std::abs(lb), std::abs(la)});

  StateVec du(before.size());
  double den = 0, num = 0;
  const StateVec fb = flux_eval(flux, before);
  const StateVec fa = flux_eval(flux, after);
  for (std::size_t i = 0; i < before.size(); ++i) {
    du[i] = after[i] - before[i];
    den += du[i] * du[i];
    num += du[i] * (fa[i] - fb[i]);
  }
  // least-squares jump speed; equals the exact jump speed on a Hugoniot locus
  const double chord = den > 1e-24 ? num / den : 0.5 * (lb + la);

  Wave w;
  w.family = family;
  if (std::abs(lb - la) <= tol) {
    w.kind = WaveKind::kContact;
    w.speed = w.tail_speed = den > 1e-24 ? chord : 0.5 * (lb + la);
  } else if (lb > la) {
    w.kind = WaveKind::kShock;
    w.speed = w.tail_speed = chord;
  } else {
    w.kind = WaveKind::kRarefaction;
    w.speed = lb;
    w.tail_speed = la;
  }
  return w;
}

Decomposition decompose_two(const FluxModel& flux, const StateVec& ul, const StateVec& ur,
                            const std::array<WaveKind, 2>& kinds, const DecomposeConfig& cfg) {
  if (flux.components() != 2)
    throw ConfigError("two-wave decomposition needs a two-component system");
  const double span = default_curve_span(ul, ur);
  WaveCurve c1 = make_curve(flux, ul, 1, kinds[0], span, cfg.hidden, cfg.seed);
  WaveCurve c2 = make_curve(flux, ur, 2, kinds[1], span, cfg.hidden, cfg.seed + 1);
  CurveFitConfig f1 = cfg.fit, f2 = cfg.fit;
  f2.seed = cfg.fit.seed + 1;
  fit_curve(flux, c1, f1);
  fit_curve(flux, c2, f2);
  const Intersection inter = intersect_two(c1, c2, cfg.gap_tol, cfg.shared_xi);
  check_admissible(flux, inter.state);

  Decomposition d;
  d.left = ul;
  d.right = ur;
  d.stars.push_back(inter.state);
  d.waves.push_back(classify_wave(flux, ul, inter.state, 1));
  d.waves.push_back(classify_wave(flux, inter.state, ur, 2));
  d.curves = {c1, c2};
  return d;
}

Decomposition decompose_three(const FluxModel& flux, const StateVec& ul, const StateVec& ur,
                              const std::array<WaveKind, 3>& kinds, const DecomposeConfig& cfg) {
  if (flux.components() != 3)
    throw ConfigError("three-wave decomposition needs a three-component system");
  const double span = default_curve_span(ul, ur);
  WaveCurve c1 = make_curve(flux, ul, 1, kinds[0], span, cfg.hidden, cfg.seed);
  WaveCurve c3 = make_curve(flux, ur, 3, kinds[2], span, cfg.hidden, cfg.seed + 1);
  CurveFitConfig f1 = cfg.fit, f3 = cfg.fit;
  f3.seed = cfg.fit.seed + 1;
  fit_curve(flux, c1, f1);
  fit_curve(flux, c3, f3);

  // free middle curve v2(xi) = N2(xi / L2), warm-started at the state mean
  Architecture arch;
  arch.sizes.push_back(1);
  for (int h : cfg.hidden) arch.sizes.push_back(h);
  arch.sizes.push_back(3);
  MlpParams middle = MlpParams::init(arch, cfg.seed + 2);
  for (int c = 0; c < 3; ++c)
    middle.bias(arch.layers(), c) = 0.5 * (ul[std::size_t(c)] + ur[std::size_t(c)]);
  const double mid_len = span;

  Program prog;
  ad::Tape& tape = prog.tape;
  prog.nets.push_back(bind(tape, c1.net));
  prog.trainable.push_back(0);
  prog.nets.push_back(bind(tape, c3.net));
  prog.trainable.push_back(0);
  prog.nets.push_back(bind(tape, middle));
  prog.trainable.push_back(1);

  const std::size_t slot_xi1 = tape.leaf_count();
  const ad::Var xi1 = tape.leaf(c1.xi0 + 0.25 * span);
  const std::size_t slot_xi2 = tape.leaf_count();
  const ad::Var xi2 = tape.leaf(0.25 * mid_len);
  const std::size_t slot_xi3 = tape.leaf_count();
  const ad::Var xi3 = tape.leaf(c3.xi0 + 0.25 * span);
  prog.free_leaves = {slot_xi1, slot_xi2, slot_xi3};

  const NetView<ad::Var> n1 = prog.nets[0].view();
  const NetView<ad::Var> n3 = prog.nets[1].view();
  const NetView<ad::Var> n2 = prog.nets[2].view();

  // middle-curve defect on fixed samples of [0, L2]
  const auto xs = draw_xi(0.0, mid_len, cfg.fit.points, cfg.seed + 3);
  const ad::Var inv_len = tape.constant(1.0 / mid_len);
  ad::Var defect = tape.constant(0.0);
  for (double xi : xs) {
    const std::array<Jet<ad::Var, 1>, 1> in{
        Jet<ad::Var, 1>{tape.constant(xi / mid_len), {inv_len}}};
    const auto out = net_eval(n2, in);
    SmallVec<ad::Var, 3> nu(3);
    for (std::size_t c = 0; c < 3; ++c) nu[c] = out[c].v;
    const auto r = eig_vector(flux, nu, 2);
    for (std::size_t c = 0; c < 3; ++c) defect = defect + sqr(out[c].d[0] - r[c]);
  }
  defect = defect * (1.0 / double(xs.size()));

  // endpoint matching: v2(0) against c1(xi1), v2(xi2) against c3(xi3)
  const auto eval_outer = [&](const NetView<ad::Var>& nv, const WaveCurve& c, ad::Var xi) {
    const ad::Var off = xi - c.xi0;
    const std::array<Jet<ad::Var, 0>, 1> in{Jet<ad::Var, 0>{off * (1.0 / c.xi_scale), {}}};
    const auto out = net_eval(nv, in);
    SmallVec<ad::Var, 3> v(out.size());
    for (std::size_t c2 = 0; c2 < out.size(); ++c2) v[c2] = out[c2].v * off + c.anchor[c2];
    return v;
  };
  const auto eval_middle = [&](ad::Var xi) {
    const std::array<Jet<ad::Var, 0>, 1> in{Jet<ad::Var, 0>{xi * (1.0 / mid_len), {}}};
    const auto out = net_eval(n2, in);
    SmallVec<ad::Var, 3> v(3);
    for (std::size_t c = 0; c < 3; ++c) v[c] = out[c].v;
    return v;
  };

  const auto left_end = eval_middle(tape.constant(0.0));
  const auto left_tgt = eval_outer(n1, c1, xi1);
  ad::Var left_match = tape.constant(0.0);
  for (std::size_t c = 0; c < 3; ++c) left_match = left_match + sqr(left_end[c] - left_tgt[c]);

  const auto right_end = eval_middle(xi2);
  const auto right_tgt = eval_outer(n3, c3, xi3);
  ad::Var right_match = tape.constant(0.0);
  for (std::size_t c = 0; c < 3; ++c)
    right_match = right_match + sqr(right_end[c] - right_tgt[c]);

  prog.roots.residual = defect;
  prog.roots.rh = left_match;
  prog.roots.ic = right_match;
  prog.roots.interface_match = tape.constant(0.0);
  prog.roots.total = defect * cfg.g1 + left_match * cfg.g2 + right_match * cfg.g3;

  TrainConfig tc;
  tc.max_epochs = cfg.epochs;
  tc.lr = cfg.lr;
  tc.history_every = 25;
  gd_core(prog, tc, {}, 1.0);

  prog.read_net(2, middle);
  const double xi1s = tape.leaf_value(slot_xi1);
  const double xi2s = tape.leaf_value(slot_xi2);
  const double xi3s = tape.leaf_value(slot_xi3);

  const auto mid_at = [&](double xi) {
    const std::array<Jet<double, 0>, 1> in{jet_const<0>(xi / mid_len)};
    const auto out = net_eval(view(middle), in);
    StateVec v(3);
    for (std::size_t c = 0; c < 3; ++c) v[c] = out[c].v;
    return v;
  };

  const StateVec star1 = mid_at(0.0);
  const StateVec star2 = mid_at(xi2s);
  StateVec end1 = curve_eval(c1, xi1s);
  StateVec end3 = curve_eval(c3, xi3s);
  double gap_l = 0, gap_r = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    gap_l += (star1[c] - end1[c]) * (star1[c] - end1[c]);
    gap_r += (star2[c] - end3[c]) * (star2[c] - end3[c]);
  }
  gap_l = std::sqrt(gap_l);
  gap_r = std::sqrt(gap_r);
  const double scale = std::max({1.0, norm2(ul), norm2(ur)});
  if (gap_l > cfg.match_tol * scale || gap_r > cfg.match_tol * scale)
    throw DecompositionError("wave fan endpoints do not match (gaps " + std::to_string(gap_l) +
                             ", " + std::to_string(gap_r) + ")");
  check_admissible(flux, star1);
  check_admissible(flux, star2);

  Decomposition d;
  d.left = ul;
  d.right = ur;
  d.stars = {star1, star2};
  d.waves.push_back(classify_wave(flux, ul, star1, 1));
  d.waves.push_back(classify_wave(flux, star1, star2, 2));
  d.waves.push_back(classify_wave(flux, star2, ur, 3));
  // the middle curve is determined by its endpoints (the stars), so only the
  // outer fitted curves are kept for export
  d.curves = {c1, c3};
  return d;
}

// --- exact solvers -----------------------------------------------------

namespace {

Decomposition exact_scalar(const FluxModel& f, const StateVec& ul, const StateVec& ur) {
  Decomposition d;
  d.left = ul;
  d.right = ur;
  const double a = ul[0], b = ur[0];
  if (a == b) return d;

  // single-wave solution requires a flux without inflection between the states
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double s0 = scalar_flux_second(f, lo);
  for (int i = 1; i <= 64; ++i) {
    const double s = scalar_flux_second(f, lo + (hi - lo) * i / 64.0);
    if (s * s0 < 0)
      throw ConfigError("exact scalar solution requires a convex or concave flux here");
  }

  const double la = scalar_flux_prime(f, a);
  const double lb = scalar_flux_prime(f, b);
  const double chord = (scalar_flux(f, b) - scalar_flux(f, a)) / (b - a);
  const double tol = 1e-12 * std::max({1.0, std::abs(la), std::abs(lb)});

  Wave w;
  w.family = 1;
  if (std::abs(la - lb) <= tol) {
    w.kind = WaveKind::kContact;
    w.speed = w.tail_speed = chord;
  } else if (la > lb) {
    w.kind = WaveKind::kShock;
    w.speed = w.tail_speed = chord;
  } else {
    w.kind = WaveKind::kRarefaction;
    w.speed = la;
    w.tail_speed = lb;
  }
  d.waves.push_back(w);
  return d;
}

Decomposition exact_shallow_water(const FluxModel& f, const StateVec& ql, const StateVec& qr) {
  const double g = f.gravity;
  const double hl = ql[0], hr = qr[0];
  const double vl = ql[1] / hl, vr = qr[1] / hr;
  const double cl = std::sqrt(g * hl), cr = std::sqrt(g * hr);
  if (vr - vl >= 2.0 * (cl + cr))
    throw VacuumError("data produce a dry region between the rarefactions");

  const auto branch = [g](double h, double hk, double ck) {
    if (h > hk) return (h - hk) * std::sqrt(0.5 * g * (h + hk) / (h * hk));
    return 2.0 * (std::sqrt(g * h) - ck);
  };
  const auto branch_prime = [g](double h, double hk) {
    if (h > hk) {
      const double A = std::sqrt(0.5 * g * (h + hk) / (h * hk));
      return A - (h - hk) * g / (4.0 * A * h * h);
    }
    return std::sqrt(g / h);
  };

  // two-rarefaction estimate; Newton on the depth function
  double h = sqr(0.5 * (cl + cr) + 0.25 * (vl - vr)) / g;
  h = std::max(h, 1e-10 * std::max(hl, hr));
  bool done = false;
  for (int it = 0; it < 200; ++it) {
    const double phi = branch(h, hl, cl) + branch(h, hr, cr) + (vr - vl);
    const double dphi = branch_prime(h, hl) + branch_prime(h, hr);
    const double step = phi / dphi;
    double next = h - step;
    if (next <= 0) next = 0.5 * h;
    h = next;
    if (std::abs(step) <= 1e-15 * std::max(1.0, h) &&
        std::abs(branch(h, hl, cl) + branch(h, hr, cr) + (vr - vl)) <= 1e-12) {
      done = true;
      break;
    }
  }
  if (!done) throw DivergenceError("star depth iteration failed to converge", 0, "riemann");

  const double ustar = 0.5 * (vl + vr) + 0.5 * (branch(h, hr, cr) - branch(h, hl, cl));
  const double cstar = std::sqrt(g * h);

  Decomposition d;
  d.left = ql;
  d.right = qr;
  StateVec star(2);
  star[0] = h;
  star[1] = h * ustar;
  d.stars.push_back(star);

  Wave w1;
  w1.family = 1;
  if (h > hl) {
    w1.kind = WaveKind::kShock;
    w1.speed = w1.tail_speed = (h * ustar - hl * vl) / (h - hl);
  } else {
    w1.kind = WaveKind::kRarefaction;
    w1.speed = vl - cl;
    w1.tail_speed = ustar - cstar;
  }
  Wave w2;
  w2.family = 2;
  if (h > hr) {
    w2.kind = WaveKind::kShock;
    w2.speed = w2.tail_speed = (hr * vr - h * ustar) / (hr - h);
  } else {
    w2.kind = WaveKind::kRarefaction;
    w2.speed = ustar + cstar;
    w2.tail_speed = vr + cr;
  }
  d.waves = {w1, w2};
  return d;
}

Decomposition exact_euler(const FluxModel& f, const StateVec& ql, const StateVec& qr) {
  const double gam = f.gamma;
  const double rl = ql[0], rr = qr[0];
  const double vl = ql[1] / rl, vr = qr[1] / rr;
  const double pl = euler_pressure(f, ql), pr = euler_pressure(f, qr);
  const double cl = std::sqrt(gam * pl / rl), cr = std::sqrt(gam * pr / rr);
  if (2.0 * (cl + cr) / (gam - 1.0) <= vr - vl)
    throw VacuumError("data produce a vacuum between the rarefactions");

  const auto branch = [gam](double p, double pk, double rk, double ck) {
    if (p > pk) {
      const double A = 2.0 / ((gam + 1.0) * rk);
      const double B = (gam - 1.0) / (gam + 1.0) * pk;
      return (p - pk) * std::sqrt(A / (p + B));
    }
    return 2.0 * ck / (gam - 1.0) * (std::pow(p / pk, (gam - 1.0) / (2.0 * gam)) - 1.0);
  };
  const auto branch_prime = [gam](double p, double pk, double rk, double ck) {
    if (p > pk) {
      const double A = 2.0 / ((gam + 1.0) * rk);
      const double B = (gam - 1.0) / (gam + 1.0) * pk;
      return std::sqrt(A / (p + B)) * (1.0 - 0.5 * (p - pk) / (B + p));
    }
    return std::pow(p / pk, -(gam + 1.0) / (2.0 * gam)) / (rk * ck);
  };

  double p = 0.5 * (pl + pr) - 0.125 * (vr - vl) * (rl + rr) * (cl + cr);
  p = std::max(p, 1e-10 * std::min(pl, pr));
  bool done = false;
  for (int it = 0; it < 200; ++it) {
    const double phi = branch(p, pl, rl, cl) + branch(p, pr, rr, cr) + (vr - vl);
    const double dphi = branch_prime(p, pl, rl, cl) + branch_prime(p, pr, rr, cr);
    const double step = phi / dphi;
    double next = p - step;
    if (next <= 0) next = 0.5 * p;
    p = next;
    if (std::abs(step) <= 1e-15 * std::max(1.0, p) &&
        std::abs(branch(p, pl, rl, cl) + branch(p, pr, rr, cr) + (vr - vl)) <= 1e-12) {
      done = true;
      break;
    }
  }
  if (!done) throw DivergenceError("star pressure iteration failed to converge", 0, "riemann");

  const double ustar = 0.5 * (vl + vr) + 0.5 * (branch(p, pr, rr, cr) - branch(p, pl, rl, cl));
  const double beta = (gam - 1.0) / (gam + 1.0);
  const double rsl = p > pl ? rl * (p / pl + beta) / (beta * p / pl + 1.0)
                            : rl * std::pow(p / pl, 1.0 / gam);
  const double rsr = p > pr ? rr * (p / pr + beta) / (beta * p / pr + 1.0)
                            : rr * std::pow(p / pr, 1.0 / gam);
  const double csl = std::sqrt(gam * p / rsl), csr = std::sqrt(gam * p / rsr);

  const auto conserved = [gam](double rho, double u, double pres) {
    StateVec q(3);
    q[0] = rho;
    q[1] = rho * u;
    q[2] = pres / (gam - 1.0) + 0.5 * rho * u * u;
    return q;
  };

  Decomposition d;
  d.left = ql;
  d.right = qr;
  d.stars = {conserved(rsl, ustar, p), conserved(rsr, ustar, p)};

  Wave w1;
  w1.family = 1;
  if (p > pl) {
    w1.kind = WaveKind::kShock;
    w1.speed = w1.tail_speed =
        vl - cl * std::sqrt((gam + 1.0) / (2.0 * gam) * (p / pl) + (gam - 1.0) / (2.0 * gam));
  } else {
    w1.kind = WaveKind::kRarefaction;
    w1.speed = vl - cl;
    w1.tail_speed = ustar - csl;
  }
  Wave w2;
  w2.family = 2;
  w2.kind = WaveKind::kContact;
  w2.speed = w2.tail_speed = ustar;
  Wave w3;
  w3.family = 3;
  if (p > pr) {
    w3.kind = WaveKind::kShock;
    w3.speed = w3.tail_speed =
        vr + cr * std::sqrt((gam + 1.0) / (2.0 * gam) * (p / pr) + (gam - 1.0) / (2.0 * gam));
  } else {
    w3.kind = WaveKind::kRarefaction;
    w3.speed = ustar + csr;
    w3.tail_speed = vr + cr;
  }
  d.waves = {w1, w2, w3};
  return d;
}

}  // namespace

Decomposition exact_riemann(const FluxModel& flux, const StateVec& ul, const StateVec& ur) {
  if (int(ul.size()) != flux.components() || int(ur.size()) != flux.components())
    throw ConfigError("state size does not match the flux");
  check_admissible(flux, ul);
  check_admissible(flux, ur);
  switch (flux.kind) {
    case FluxKind::kShallowWater: return exact_shallow_water(flux, ul, ur);
    case FluxKind::kEuler: return exact_euler(flux, ul, ur);
    default: return exact_scalar(flux, ul, ur);
  }
}

SubdomainLayout handoff(const Decomposition& dec, const ProblemSpec& spec,
                        const LayoutArchitectures& archs, std::uint64_t seed) {
  if (spec.initial.breakpoints.size() != 1)
    throw ConfigError("handoff expects a single-breakpoint problem");
  const std::size_t mu = dec.waves.size();
  if (mu < 1) throw ConfigError("decomposition carries no waves");
  if (dec.stars.size() + 1 != mu)
    throw ConfigError("decomposition needs one intermediate state per wave pair");

  ProblemSpec fan = spec;
  fan.wave_counts = {int(mu)};
  SubdomainLayout layout = make_layout(fan, archs, seed);

  // initial line speeds from the wave speeds (fan center for rarefactions)
  for (std::size_t j = 0; j < mu; ++j) {
    DiscontinuityLine& line = layout.lines[1 + j];
    const Wave& w = dec.waves[j];
    line.net.bias(line.net.arch.layers(), 0) = 0.5 * (w.speed + w.tail_speed);
  }
  // field warm starts: wedges toward the star states, outer subdomains
  // toward the data
  const auto nudge = [](MlpParams& net, const StateVec& target) {
    const int last = net.arch.layers();
    for (int c = 0; c < net.arch.outputs(); ++c) net.bias(last, c) = target[std::size_t(c)];
  };
  nudge(layout.subs.front().net, dec.left);
  nudge(layout.subs.back().net, dec.right);
  for (std::size_t j = 1; j < layout.subs.size() - 1; ++j)
    nudge(layout.subs[j].net, dec.stars[j - 1]);
  return layout;
}

}  // namespace shocktrack
