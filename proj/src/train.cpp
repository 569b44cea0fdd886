#include "shocktrack/train.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "shocktrack/errors.hpp"

namespace shocktrack {

void Program::read_net(std::size_t k, MlpParams& dst) const {
  const TapedNet& n = nets[k];
  dst.arch = n.arch;
  dst.flat.resize(n.params.size());
  for (std::size_t i = 0; i < n.params.size(); ++i)
    dst.flat[i] = tape.leaf_value(n.slot_base + i);
}

void Program::write_net(std::size_t k, const MlpParams& src) {
  const TapedNet& n = nets[k];
  if (src.flat.size() != n.params.size()) throw ConfigError("parameter count mismatch");
  for (std::size_t i = 0; i < n.params.size(); ++i) tape.set_leaf(n.slot_base + i, src.flat[i]);
}

double Program::forward_total() {
  tape.forward();
  return tape.value(roots.total);
}

namespace {

std::vector<double> read_trainable(const Program& p) {
  std::vector<double> out;
  for (std::size_t k = 0; k < p.nets.size(); ++k) {
    if (!p.trainable[k]) continue;
    const TapedNet& n = p.nets[k];
    for (std::size_t i = 0; i < n.params.size(); ++i)
      out.push_back(p.tape.leaf_value(n.slot_base + i));
  }
  for (std::size_t slot : p.free_leaves) out.push_back(p.tape.leaf_value(slot));
  return out;
}

void write_trainable(Program& p, const std::vector<double>& v) {
  std::size_t j = 0;
  for (std::size_t k = 0; k < p.nets.size(); ++k) {
    if (!p.trainable[k]) continue;
    const TapedNet& n = p.nets[k];
    for (std::size_t i = 0; i < n.params.size(); ++i) p.tape.set_leaf(n.slot_base + i, v[j++]);
  }
  for (std::size_t slot : p.free_leaves) p.tape.set_leaf(slot, v[j++]);
}

void sgd_step(Program& p, double lr) {
  for (std::size_t k = 0; k < p.nets.size(); ++k) {
    if (!p.trainable[k]) continue;
    const TapedNet& n = p.nets[k];
    for (std::size_t i = 0; i < n.params.size(); ++i) {
      const std::size_t slot = n.slot_base + i;
      p.tape.set_leaf(slot, p.tape.leaf_value(slot) - lr * p.tape.leaf_adjoint(slot));
    }
  }
  for (std::size_t slot : p.free_leaves)
    p.tape.set_leaf(slot, p.tape.leaf_value(slot) - lr * p.tape.leaf_adjoint(slot));
}

std::string worst_term(const Program& p) {
  const auto bad = [&](ad::Var v) { return !std::isfinite(p.tape.value(v)); };
  if (bad(p.roots.residual)) return "residual";
  if (bad(p.roots.rh)) return "rh";
  if (bad(p.roots.ic)) return "ic";
  if (bad(p.roots.interface_match)) return "interface";
  return "total";
}

EpochRecord record_of(const Program& p, long epoch) {
  EpochRecord r;
  r.epoch = epoch;
  r.total = p.tape.value(p.roots.total);
  r.residual = p.tape.value(p.roots.residual);
  r.rh = p.tape.value(p.roots.rh);
  r.ic = p.tape.value(p.roots.ic);
  r.interface_match = p.tape.value(p.roots.interface_match);
  return r;
}

// Summed L2(0,duration) distance between consecutive line-position probes.
double movement_norm(const std::vector<std::vector<double>>& a,
                     const std::vector<std::vector<double>>& b, double duration) {
  double sum = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    double mean = 0.0;
    for (std::size_t i = 0; i < a[l].size(); ++i) {
      const double d = b[l][i] - a[l][i];
      mean += d * d;
    }
    if (!a[l].empty()) mean /= double(a[l].size());
    sum += std::sqrt(duration * mean);
  }
  return sum;
}

}  // namespace

TrainReport gd_core(Program& prog, const TrainConfig& cfg,
                    const std::function<std::vector<std::vector<double>>()>& line_probe,
                    double duration, const TrainHooks& hooks) {
  TrainReport rep;
  double lr = cfg.lr;
  std::vector<std::vector<double>> prev_lines;
  bool have_prev = false;
  std::vector<double> last_good;
  const bool movement_on = bool(line_probe) && cfg.movement_tol > 0.0;
  long e = 0;
  while (e < cfg.max_epochs) {
    prog.tape.forward();
    const double total = prog.tape.value(prog.roots.total);
    if (!std::isfinite(total)) {
      if (cfg.adapt_lr && rep.halvings < cfg.max_halvings && !last_good.empty()) {
        write_trainable(prog, last_good);
        lr *= 0.5;
        ++rep.halvings;
        continue;
      }
      throw DivergenceError("non-finite loss at epoch " + std::to_string(e), e,
                            worst_term(prog));
    }
    last_good = read_trainable(prog);
    if (cfg.history_every > 0 && e % cfg.history_every == 0)
      rep.history.push_back(record_of(prog, e));
    if (movement_on && e % cfg.movement_every == 0) {
      auto cur = line_probe();
      rep.line_snapshots.emplace_back(e, cur);
      if (have_prev && movement_norm(prev_lines, cur, duration) < cfg.movement_tol) {
        rep.stopped_on_movement = true;
        break;
      }
      prev_lines = std::move(cur);
      have_prev = true;
    }
    if (hooks.checkpoint && cfg.checkpoint_every > 0 && e > 0 && e % cfg.checkpoint_every == 0)
      hooks.checkpoint(e, prog);
    prog.tape.backward(prog.roots.total);
    sgd_step(prog, lr);
    ++e;
  }
  rep.epochs = e;
  rep.final_lr = lr;
  prog.tape.forward();
  rep.final_total = prog.tape.value(prog.roots.total);
  if (rep.history.empty() || rep.history.back().epoch != e)
    rep.history.push_back(record_of(prog, e));
  return rep;
}

std::unique_ptr<Program> build_global_program(const SubdomainLayout& layout,
                                              const SampleSet& samples, const LossWeights& w) {
  auto prog = std::make_unique<Program>();
  ad::Tape& tape = prog->tape;
  prog->field_net.assign(layout.subs.size(), -1);
  prog->line_net.assign(layout.lines.size(), -1);
  for (std::size_t s = 0; s < layout.subs.size(); ++s) {
    prog->nets.push_back(bind(tape, layout.subs[s].net));
    prog->trainable.push_back(1);
    prog->field_net[s] = int(prog->nets.size()) - 1;
  }
  for (std::size_t li = 0; li < layout.lines.size(); ++li) {
    if (layout.lines[li].frozen()) continue;
    prog->nets.push_back(bind(tape, layout.lines[li].net));
    prog->trainable.push_back(1);
    prog->line_net[li] = int(prog->nets.size()) - 1;
  }
  std::vector<FieldHandle<ad::Var>> fields;
  fields.reserve(layout.subs.size());
  for (std::size_t s = 0; s < layout.subs.size(); ++s)
    fields.push_back(field_handle(tape, prog->nets[std::size_t(prog->field_net[s])]));
  std::vector<LineHandle<ad::Var>> lines;
  lines.reserve(layout.lines.size());
  for (std::size_t li = 0; li < layout.lines.size(); ++li) {
    const int k = prog->line_net[li];
    lines.push_back(line_handle(tape, k >= 0 ? &prog->nets[std::size_t(k)] : nullptr,
                                layout.lines[li]));
  }
  const LayoutTopology topo = topology_of(layout);
  const std::function<ad::Var(double)> konst = [&tape](double c) { return tape.constant(c); };
  prog->roots = emit_global_loss(layout.problem.flux, topo, fields, lines, samples, w, konst);
  return prog;
}

std::unique_ptr<Program> build_direct_program(const ProblemSpec& spec, double duration,
                                              const MlpParams& field, const SampleSet& samples,
                                              const LossWeights& w) {
  (void)duration;
  auto prog = std::make_unique<Program>();
  ad::Tape& tape = prog->tape;
  prog->nets.push_back(bind(tape, field));
  prog->trainable.push_back(1);
  prog->field_net.assign(1, 0);
  const FieldHandle<ad::Var> h = field_handle(tape, prog->nets[0]);
  const std::function<ad::Var(double)> konst = [&tape](double c) { return tape.constant(c); };
  prog->roots = emit_direct_loss(spec.flux, spec, h, samples, w, konst);
  return prog;
}

TrainReport train_layout(SubdomainLayout& layout, const SampleSet& samples, const LossWeights& w,
                         const TrainConfig& cfg, const TrainHooks& hooks) {
  auto prog = build_global_program(layout, samples, w);
  Program* p = prog.get();
  const SubdomainLayout* lay = &layout;
  const std::vector<double> times = samples.times;

  std::function<std::vector<std::vector<double>>()> probe;
  if (layout.interior_line_count() > 0) {
    probe = [p, lay, times]() {
      std::vector<std::vector<double>> out;
      for (std::size_t li = 0; li < lay->lines.size(); ++li) {
        const int k = p->line_net[li];
        if (k < 0) continue;
        DiscontinuityLine scratch = lay->lines[li];
        p->read_net(std::size_t(k), scratch.net);
        std::vector<double> pos(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) pos[i] = line_position(scratch, times[i]);
        out.push_back(std::move(pos));
      }
      return out;
    };
  }

  TrainReport rep = gd_core(*prog, cfg, probe, layout.duration, hooks);

  for (std::size_t s = 0; s < layout.subs.size(); ++s)
    prog->read_net(std::size_t(prog->field_net[s]), layout.subs[s].net);
  for (std::size_t li = 0; li < layout.lines.size(); ++li)
    if (prog->line_net[li] >= 0)
      prog->read_net(std::size_t(prog->line_net[li]), layout.lines[li].net);

  constexpr int kOrderGrid = 100;
  for (int i = 0; i <= kOrderGrid && !rep.ordering_warning; ++i) {
    const double tau = layout.duration * double(i) / kOrderGrid;
    const std::vector<double> pos = line_positions(layout, tau);
    for (std::size_t k = 0; k + 1 < pos.size(); ++k)
      if (pos[k] > pos[k + 1] + 1e-12) rep.ordering_warning = true;
  }
  return rep;
}

TrainReport train_direct(const ProblemSpec& spec, double duration, MlpParams& field,
                         const SampleSet& samples, const LossWeights& w, const TrainConfig& cfg,
                         const TrainHooks& hooks) {
  auto prog = build_direct_program(spec, duration, field, samples, w);
  TrainReport rep = gd_core(*prog, cfg, {}, duration, hooks);
  prog->read_net(0, field);
  return rep;
}

// --- domain decomposition ---------------------------------------------------

DdmDecomposition split_layout(const SubdomainLayout& layout) {
  DdmDecomposition dec;
  dec.problem = layout.problem;
  dec.t0 = layout.t0;
  dec.duration = layout.duration;
  dec.pieces.reserve(layout.subs.size());
  for (const Subdomain& sub : layout.subs) {
    if (sub.ref != RefDomain::kRect)
      throw ConfigError("domain decomposition supports rectangular subdomains only");
    DdmPiece pc;
    pc.field = sub.net;
    pc.left = layout.lines[std::size_t(sub.left_line)];
    pc.right = layout.lines[std::size_t(sub.right_line)];
    dec.pieces.push_back(std::move(pc));
  }
  return dec;
}

double ddm_interface_mismatch(const DdmDecomposition& dec, int grid_pts) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < dec.pieces.size(); ++i) {
    const DiscontinuityLine& a = dec.pieces[i].right;
    const DiscontinuityLine& b = dec.pieces[i + 1].left;
    double mean = 0.0;
    for (int g = 0; g < grid_pts; ++g) {
      const double tau = dec.duration * double(g) / double(grid_pts - 1);
      const double d = line_position(a, tau) - line_position(b, tau);
      mean += d * d;
    }
    mean /= double(grid_pts);
    sum += std::sqrt(dec.duration * mean);
  }
  return sum;
}

StateVec ddm_reconstruct(const DdmDecomposition& dec, double x, double tau) {
  const std::size_t P = dec.pieces.size();
  std::vector<double> pos(P + 1);
  pos[0] = line_position(dec.pieces[0].left, tau);
  for (std::size_t i = 0; i + 1 < P; ++i)
    pos[i + 1] = 0.5 * (line_position(dec.pieces[i].right, tau) +
                        line_position(dec.pieces[i + 1].left, tau));
  pos[P] = line_position(dec.pieces[P - 1].right, tau);
  if (x < pos.front() || x > pos.back()) throw DomainError("point outside the domain");
  std::size_t s = P - 1;
  for (std::size_t i = 0; i + 1 < pos.size(); ++i)
    if (x < pos[i + 1]) {
      s = i;
      break;
    }
  return eval_field(dec.pieces[s].field, x, tau).value;
}

LineConsensus consensus_line(const DiscontinuityLine& left_copy,
                             const DiscontinuityLine& right_copy, double duration, double tol,
                             int grid_pts) {
  LineConsensus c;
  c.times.resize(std::size_t(grid_pts));
  c.left_pos.resize(std::size_t(grid_pts));
  c.right_pos.resize(std::size_t(grid_pts));
  double mean = 0.0;
  for (int g = 0; g < grid_pts; ++g) {
    const double tau = duration * double(g) / double(grid_pts - 1);
    c.times[std::size_t(g)] = tau;
    c.left_pos[std::size_t(g)] = line_position(left_copy, tau);
    c.right_pos[std::size_t(g)] = line_position(right_copy, tau);
    const double d = c.left_pos[std::size_t(g)] - c.right_pos[std::size_t(g)];
    mean += d * d;
  }
  mean /= double(grid_pts);
  c.mismatch = std::sqrt(duration * mean);
  c.merged = c.mismatch <= tol;
  if (c.merged) {
    c.mean_pos.resize(std::size_t(grid_pts));
    for (int g = 0; g < grid_pts; ++g)
      c.mean_pos[std::size_t(g)] =
          0.5 * (c.left_pos[std::size_t(g)] + c.right_pos[std::size_t(g)]);
  }
  return c;
}

namespace {

struct LocalProg {
  std::unique_ptr<Program> prog;
  int own_field = -1, own_left = -1, own_right = -1;
  int nb_left_field = -1, nb_right_field = -1;
  int nb_left_line = -1, nb_right_line = -1;
};

LocalProg build_local_program(const DdmDecomposition& dec, std::size_t i,
                              const SampleSet& samples, const LossWeights& w) {
  const DdmPiece& pc = dec.pieces[i];
  const ProblemSpec& spec = dec.problem;
  LocalProg lp;
  lp.prog = std::make_unique<Program>();
  Program& P = *lp.prog;
  ad::Tape& tape = P.tape;
  const auto add_net = [&P, &tape](const MlpParams& m, bool train) {
    P.nets.push_back(bind(tape, m));
    P.trainable.push_back(train ? 1 : 0);
    return int(P.nets.size()) - 1;
  };
  lp.own_field = add_net(pc.field, true);
  if (!pc.left.frozen()) lp.own_left = add_net(pc.left.net, true);
  if (!pc.right.frozen()) lp.own_right = add_net(pc.right.net, true);
  if (i > 0) {
    lp.nb_left_field = add_net(dec.pieces[i - 1].field, false);
    if (!dec.pieces[i - 1].right.frozen())
      lp.nb_left_line = add_net(dec.pieces[i - 1].right.net, false);
  }
  if (i + 1 < dec.pieces.size()) {
    lp.nb_right_field = add_net(dec.pieces[i + 1].field, false);
    if (!dec.pieces[i + 1].left.frozen())
      lp.nb_right_line = add_net(dec.pieces[i + 1].left.net, false);
  }

  const std::function<ad::Var(double)> konst = [&tape](double c) { return tape.constant(c); };
  const auto net_at = [&P](int k) -> const TapedNet* {
    return k >= 0 ? &P.nets[std::size_t(k)] : nullptr;
  };
  const FieldHandle<ad::Var> own = field_handle(tape, P.nets[std::size_t(lp.own_field)]);
  const LineHandle<ad::Var> lh_l = line_handle(tape, net_at(lp.own_left), pc.left);
  const LineHandle<ad::Var> lh_r = line_handle(tape, net_at(lp.own_right), pc.right);

  LossParts<ad::Var> parts{konst(0.0), konst(0.0), konst(0.0), konst(0.0), konst(0.0)};
  parts.residual = emit_residual(spec.flux, own, lh_l, lh_r, samples.rect, false, konst);
  if (lp.own_left >= 0) {
    if (lp.nb_left_field >= 0) {
      const FieldHandle<ad::Var> nb =
          field_handle(tape, P.nets[std::size_t(lp.nb_left_field)]);
      parts.rh = parts.rh + emit_rh(spec.flux, lh_l, nb, own, samples.times, konst);
    } else {
      parts.rh = parts.rh + emit_rh_const_side(spec.flux, lh_l, spec.initial.left_state, true,
                                               own, samples.times, konst);
    }
  }
  if (lp.own_right >= 0) {
    if (lp.nb_right_field >= 0) {
      const FieldHandle<ad::Var> nb =
          field_handle(tape, P.nets[std::size_t(lp.nb_right_field)]);
      parts.rh = parts.rh + emit_rh(spec.flux, lh_r, own, nb, samples.times, konst);
    } else {
      parts.rh = parts.rh + emit_rh_const_side(spec.flux, lh_r, spec.initial.right_state, false,
                                               own, samples.times, konst);
    }
  }
  parts.ic = parts.ic + emit_ic(own, spec, pc.left.anchor, pc.right.anchor, samples.unit, konst);
  if (i == 0) {
    const auto rows = incoming_rows(spec.flux, spec.initial.left_state, true);
    if (!rows.empty())
      parts.ic = parts.ic + emit_boundary(own, spec.domain.a, spec.initial.left_state, rows,
                                          samples.times, konst);
  }
  if (i + 1 == dec.pieces.size()) {
    const auto rows = incoming_rows(spec.flux, spec.initial.right_state, false);
    if (!rows.empty())
      parts.ic = parts.ic + emit_boundary(own, spec.domain.b, spec.initial.right_state, rows,
                                          samples.times, konst);
  }
  if (lp.own_left >= 0 && lp.nb_left_line >= 0) {
    const LineHandle<ad::Var> nb =
        line_handle(tape, net_at(lp.nb_left_line), dec.pieces[i - 1].right);
    parts.interface_match = parts.interface_match + emit_interface(lh_l, nb, samples.times, konst);
  }
  if (lp.own_right >= 0 && lp.nb_right_line >= 0) {
    const LineHandle<ad::Var> nb =
        line_handle(tape, net_at(lp.nb_right_line), dec.pieces[i + 1].left);
    parts.interface_match = parts.interface_match + emit_interface(lh_r, nb, samples.times, konst);
  }
  parts.total = parts.residual * w.residual + parts.rh * w.rh + parts.ic * w.ic +
                parts.interface_match * w.interface_match;
  P.roots = parts;
  return lp;
}

}  // namespace

DdmReport ddm_train(DdmDecomposition& dec, const SampleSet& samples, const LossWeights& w,
                    const DdmConfig& cfg) {
  const std::size_t P = dec.pieces.size();
  if (P == 0) throw ConfigError("domain decomposition needs at least one subdomain");
  std::vector<LocalProg> lp;
  lp.reserve(P);
  for (std::size_t i = 0; i < P; ++i) lp.push_back(build_local_program(dec, i, samples, w));

  DdmReport rep;
  rep.last_inner.resize(P);
  const bool has_interfaces = P > 1;

  const auto pull_own = [&](std::size_t i) {
    lp[i].prog->read_net(std::size_t(lp[i].own_field), dec.pieces[i].field);
    if (lp[i].own_left >= 0) lp[i].prog->read_net(std::size_t(lp[i].own_left), dec.pieces[i].left.net);
    if (lp[i].own_right >= 0)
      lp[i].prog->read_net(std::size_t(lp[i].own_right), dec.pieces[i].right.net);
  };

  for (long sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    if (has_interfaces) {
      const double mm = ddm_interface_mismatch(dec, cfg.mismatch_grid);
      if (mm < cfg.tol) {
        rep.converged = true;
        rep.final_mismatch = mm;
        return rep;
      }
    }
    // Additive (Jacobi) sweeps read neighbor data frozen at sweep start; the
    // sequential flag switches to in-sweep (Gauss-Seidel) freshness.
    std::vector<DdmPiece> snap;
    if (!cfg.sequential) snap = dec.pieces;
    const std::vector<DdmPiece>& nb = cfg.sequential ? dec.pieces : snap;

    SweepRecord rec;
    rec.sweep = sweep;
    for (std::size_t i = 0; i < P; ++i) {
      if (lp[i].nb_left_field >= 0)
        lp[i].prog->write_net(std::size_t(lp[i].nb_left_field), nb[i - 1].field);
      if (lp[i].nb_left_line >= 0)
        lp[i].prog->write_net(std::size_t(lp[i].nb_left_line), nb[i - 1].right.net);
      if (lp[i].nb_right_field >= 0)
        lp[i].prog->write_net(std::size_t(lp[i].nb_right_field), nb[i + 1].field);
      if (lp[i].nb_right_line >= 0)
        lp[i].prog->write_net(std::size_t(lp[i].nb_right_line), nb[i + 1].left.net);
      try {
        TrainReport r = gd_core(*lp[i].prog, cfg.inner, {}, dec.duration, {});
        rec.local_total.push_back(r.final_total);
        rep.last_inner[i] = std::move(r);
      } catch (const DivergenceError& e) {
        throw DivergenceError(std::string(e.what()) + " in subdomain " + std::to_string(i),
                              e.epoch, e.term);
      }
      pull_own(i);
    }
    rec.mismatch = has_interfaces ? ddm_interface_mismatch(dec, cfg.mismatch_grid) : 0.0;
    rep.sweeps.push_back(std::move(rec));
    rep.sweeps_run = sweep;
    if (!has_interfaces) {
      rep.converged = true;
      rep.final_mismatch = 0.0;
      return rep;
    }
  }
  rep.final_mismatch = ddm_interface_mismatch(dec, cfg.mismatch_grid);
  rep.converged = rep.final_mismatch < cfg.tol;
  return rep;
}

}  // namespace shocktrack
