#include <cmath>

#include "doctest.h"
#include "shocktrack/geometry.hpp"
#include "shocktrack/loss.hpp"
#include "shocktrack/sampling.hpp"
#include "shocktrack/train.hpp"

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

ProblemSpec fan_problem() {
  // increasing affine data: stays smooth, one subdomain
  ProblemSpec p;
  p.flux = FluxModel::burgers();
  p.domain = {0.0, 1.0};
  p.final_time = 0.4;
  p.initial.profiles = {Profile::affine(StateVec{1.0}, StateVec{0.0})};
  p.initial.left_state = StateVec{0.0};
  p.initial.right_state = StateVec{1.0};
  return p;
}

SampleCounts small_counts() {
  SampleCounts c;
  c.interior = 120;
  c.initial = 60;
  c.times = 60;
  c.cone = 40;
  return c;
}

}  // namespace

TEST_CASE("the recorded graph reproduces the double-path loss") {
  const SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 9);
  const SampleSet samples = draw_samples(small_counts(), layout.duration, 9);
  const LossWeights w;
  auto prog = build_global_program(layout, samples, w);
  const double taped = prog->forward_total();
  const LossBreakdown oracle = global_loss(layout, samples, w);
  CHECK(taped == doctest::Approx(oracle.total).epsilon(1e-12));
}

TEST_CASE("loss gradients match finite differences through every term") {
  const SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 21);
  const SampleSet samples = draw_samples(small_counts(), layout.duration, 21);
  const LossWeights w;
  auto prog = build_global_program(layout, samples, w);
  prog->tape.forward();
  prog->tape.backward(prog->roots.total);

  // probe a few leaves spread across the parameter vector
  const std::size_t n = prog->tape.leaf_count();
  const double h = 1e-5;
  for (std::size_t slot = 0; slot < n; slot += n / 17 + 1) {
    const double saved = prog->tape.leaf_value(slot);
    const double g = prog->tape.leaf_adjoint(slot);
    prog->tape.set_leaf(slot, saved + h);
    const double up = prog->forward_total();
    prog->tape.set_leaf(slot, saved - h);
    const double dn = prog->forward_total();
    prog->tape.set_leaf(slot, saved);
    const double fd = (up - dn) / (2 * h);
    CHECK(g == doctest::Approx(fd).epsilon(2e-6).scale(1.0));
  }
}

TEST_CASE("zero training epochs leave the layout untouched") {
  SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 4);
  const std::vector<double> before = layout.subs[0].net.flat;
  TrainConfig cfg;
  cfg.max_epochs = 0;
  const SampleSet samples = draw_samples(small_counts(), layout.duration, 4);
  const TrainReport rep = train_layout(layout, samples, LossWeights{}, cfg);
  CHECK(rep.epochs == 0);
  CHECK(layout.subs[0].net.flat == before);
  REQUIRE(!rep.history.empty());
  CHECK(rep.history.back().total > 0.0);
}

TEST_CASE("a short run drops the loss by orders of magnitude") {
  SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 11);
  TrainConfig cfg;
  cfg.max_epochs = 4000;
  cfg.lr = 8e-3;
  cfg.history_every = 1000;
  const SampleSet samples = draw_samples(small_counts(), layout.duration, 11);
  const TrainReport rep = train_layout(layout, samples, LossWeights{}, cfg);
  REQUIRE(rep.history.size() >= 2);
  const double first = rep.history.front().total;
  const double last = rep.history.back().total;
  CHECK(last < first / 100.0);
  CHECK(std::isfinite(last));
}

TEST_CASE("checkpoint hook fires on schedule") {
  SubdomainLayout layout = make_layout(two_shock_problem(), LayoutArchitectures{}, 4);
  TrainConfig cfg;
  cfg.max_epochs = 50;
  cfg.checkpoint_every = 20;
  int calls = 0;
  TrainHooks hooks;
  hooks.checkpoint = [&](long, const Program&) { ++calls; };
  const SampleSet samples = draw_samples(small_counts(), layout.duration, 4);
  train_layout(layout, samples, LossWeights{}, cfg, hooks);
  CHECK(calls == 2);  // epochs 20 and 40
}

TEST_CASE("single-network baseline training decreases its loss") {
  const ProblemSpec p = fan_problem();
  Architecture arch;
  arch.sizes = {2, 8, 1};
  MlpParams net = MlpParams::init(arch, 3);
  TrainConfig cfg;
  cfg.max_epochs = 4000;
  cfg.lr = 8e-3;
  cfg.adapt_lr = true;
  cfg.history_every = 100;
  const SampleSet samples = draw_samples(small_counts(), p.final_time, 3);
  const TrainReport rep = train_direct(p, p.final_time, net, samples, LossWeights{}, cfg);
  CHECK(rep.history.back().total < rep.history.front().total / 5.0);
}

TEST_CASE("a single-piece decomposition trains exactly like the global path") {
  const ProblemSpec p = fan_problem();
  const SampleSet samples = draw_samples(small_counts(), p.final_time, 8);
  TrainConfig inner;
  inner.max_epochs = 300;
  inner.lr = 5e-3;

  SubdomainLayout direct = make_layout(p, LayoutArchitectures{}, 8);
  const TrainReport ref = train_layout(direct, samples, LossWeights{}, inner);

  SubdomainLayout again = make_layout(p, LayoutArchitectures{}, 8);
  DdmDecomposition dec = split_layout(again);
  REQUIRE(dec.pieces.size() == 1);
  DdmConfig cfg;
  cfg.inner = inner;
  cfg.max_sweeps = 1;
  const DdmReport rep = ddm_train(dec, samples, LossWeights{}, cfg);
  REQUIRE(rep.sweeps.size() == 1);
  CHECK(rep.sweeps.back().local_total[0] == ref.final_total);  // bitwise identical
  CHECK(dec.pieces[0].field.flat == direct.subs[0].net.flat);
}

TEST_CASE("a decomposition that already matches skips training entirely") {
  const ProblemSpec p = two_shock_problem();
  SubdomainLayout layout = make_layout(p, LayoutArchitectures{}, 5);
  DdmDecomposition dec = split_layout(layout);
  REQUIRE(dec.pieces.size() == 3);
  DdmConfig cfg;
  cfg.inner.max_epochs = 10;
  cfg.max_sweeps = 50;
  cfg.tol = 1e9;  // any mismatch passes: the pre-sweep check fires at once
  const SampleSet samples = draw_samples(small_counts(), dec.duration, 5);
  const std::vector<double> before = dec.pieces[1].field.flat;
  const DdmReport rep = ddm_train(dec, samples, LossWeights{}, cfg);
  CHECK(rep.converged);
  CHECK(rep.sweeps_run == 0);
  CHECK(rep.sweeps.empty());
  CHECK(dec.pieces[1].field.flat == before);
}

TEST_CASE("doubled interface lines agree for identical copies") {
  const ProblemSpec p = two_shock_problem();
  SubdomainLayout layout = make_layout(p, LayoutArchitectures{}, 5);
  DdmDecomposition dec = split_layout(layout);
  const LineConsensus c =
      consensus_line(dec.pieces[0].right, dec.pieces[1].left, dec.duration, 1e-8);
  CHECK(c.merged);
  CHECK(c.mismatch <= 1e-12);
  REQUIRE(c.times.size() == c.mean_pos.size());
  CHECK(c.mean_pos.front() == doctest::Approx(0.0).epsilon(1e-12));
}
