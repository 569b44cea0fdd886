#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "shocktrack/loss.hpp"

namespace shocktrack {

// A recorded loss graph plus the networks bound onto its tape. Recording
// happens once; every training epoch replays the same graph with updated
// leaf values.
struct Program {
  ad::Tape tape;
  std::vector<TapedNet> nets;
  std::vector<std::uint8_t> trainable;  // aligned with nets
  std::vector<std::size_t> free_leaves;  // standalone trainable scalar slots
  LossParts<ad::Var> roots{};
  // bindings for layout-backed programs (net index per sub / chain line, -1 if none)
  std::vector<int> field_net;
  std::vector<int> line_net;

  void read_net(std::size_t k, MlpParams& dst) const;
  void write_net(std::size_t k, const MlpParams& src);
  double forward_total();

  Program() = default;
  Program(const Program&) = delete;
  Program& operator=(const Program&) = delete;
};

// Records the full loss of a layout: all subdomain fields and all interior
// line networks become trainable leaves.
std::unique_ptr<Program> build_global_program(const SubdomainLayout& layout,
                                              const SampleSet& samples, const LossWeights& w);

// Records the whole-domain single-network baseline loss.
std::unique_ptr<Program> build_direct_program(const ProblemSpec& spec, double duration,
                                              const MlpParams& field, const SampleSet& samples,
                                              const LossWeights& w);

struct TrainConfig {
  long max_epochs = 2000;
  double lr = 2e-3;
  // Line-movement stopping rule, checked every `movement_every` epochs on the
  // time sample set; <= 0 disables it.
  double movement_tol = 0.0;
  long movement_every = 100;
  // On a non-finite loss: halve the rate and retry from the last good
  // parameters instead of aborting.
  bool adapt_lr = false;
  int max_halvings = 12;
  long history_every = 1;
  long checkpoint_every = 0;  // 0 disables the checkpoint hook
};

struct EpochRecord {
  long epoch = 0;
  double total = 0, residual = 0, rh = 0, ic = 0, interface_match = 0;
};

struct TrainReport {
  std::vector<EpochRecord> history;
  // positions of every tracked line at each movement check (flattened per line)
  std::vector<std::pair<long, std::vector<std::vector<double>>>> line_snapshots;
  long epochs = 0;
  bool stopped_on_movement = false;
  bool ordering_warning = false;
  int halvings = 0;
  double final_lr = 0;
  double final_total = 0;
};

struct TrainHooks {
  std::function<void(long epoch, const Program&)> checkpoint;
};

// Plain gradient descent on a recorded program. `line_probe` (may be empty)
// returns current line positions sampled on the movement grid; the loop stops
// once the summed L2(0,duration) movement between consecutive probes drops
// below cfg.movement_tol.
TrainReport gd_core(Program& prog, const TrainConfig& cfg,
                    const std::function<std::vector<std::vector<double>>()>& line_probe,
                    double duration, const TrainHooks& hooks = {});

// Build, train, and write the result back into the layout.
TrainReport train_layout(SubdomainLayout& layout, const SampleSet& samples, const LossWeights& w,
                         const TrainConfig& cfg, const TrainHooks& hooks = {});

// Baseline: one network over the whole space-time domain.
TrainReport train_direct(const ProblemSpec& spec, double duration, MlpParams& field,
                         const SampleSet& samples, const LossWeights& w, const TrainConfig& cfg,
                         const TrainHooks& hooks = {});

// --- domain decomposition ---------------------------------------------------

// One Schwarz subdomain: its field plus private copies of both bounding
// lines (outermost copies stay frozen walls).
struct DdmPiece {
  MlpParams field;
  DiscontinuityLine left, right;
};

struct DdmDecomposition {
  ProblemSpec problem;
  double t0 = 0.0;
  double duration = 0.0;
  std::vector<DdmPiece> pieces;
};

// Doubles every interior line of a global layout into per-side copies.
DdmDecomposition split_layout(const SubdomainLayout& layout);

struct DdmConfig {
  TrainConfig inner;     // inner.max_epochs = gradient steps per subdomain per sweep
  long max_sweeps = 50;
  double tol = 1e-5;     // stop when the summed interface mismatch drops below
  bool sequential = false;  // false: neighbors frozen at sweep start
  int mismatch_grid = 201;
};

struct SweepRecord {
  long sweep = 0;
  double mismatch = 0;  // summed interface mismatch after this sweep
  std::vector<double> local_total;  // each piece's loss at the end of its inner run
};

struct DdmReport {
  std::vector<SweepRecord> sweeps;
  std::vector<TrainReport> last_inner;  // per piece, from the final sweep
  bool converged = false;
  long sweeps_run = 0;
  double final_mismatch = 0;
};

// Algorithm: outer sweeps of per-subdomain descent against frozen neighbor
// snapshots; stops when the summed L2(0,T) gap between paired line copies
// drops below cfg.tol. With a single piece this runs exactly one sweep and
// is step-for-step identical to train_layout on the undecomposed layout.
DdmReport ddm_train(DdmDecomposition& dec, const SampleSet& samples, const LossWeights& w,
                    const DdmConfig& cfg);

// Summed L2(0,duration) mismatch across all doubled interfaces.
double ddm_interface_mismatch(const DdmDecomposition& dec, int grid_pts);

// Evaluate a decomposed model: subdomain boundaries taken as the mean of the
// two line copies at each interface.
StateVec ddm_reconstruct(const DdmDecomposition& dec, double x, double tau);

// Post-processing of one doubled line pair into a single reported trajectory.
struct LineConsensus {
  bool merged = false;
  double mismatch = 0;  // L2(0,duration) gap
  std::vector<double> times;
  std::vector<double> mean_pos, left_pos, right_pos;
};

LineConsensus consensus_line(const DiscontinuityLine& left_copy,
                             const DiscontinuityLine& right_copy, double duration, double tol,
                             int grid_pts = 401);

}  // namespace shocktrack
