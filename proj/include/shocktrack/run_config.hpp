#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shocktrack/godunov.hpp"
#include "shocktrack/riemann.hpp"
#include "shocktrack/train.hpp"

namespace shocktrack {

// Batch run description, loadable from JSON. Schema (all sections optional
// except "problem"; struct initializers are the defaults):
//
//   {
//     "mode": "ndnn" | "ddm" | "direct-pinn" | "godunov"
//             | "riemann-decompose" | "compare",
//     "name": "exp2", "out_dir": "out/exp2", "seed": 0,
//     "problem": {
//       "flux": {"kind": "burgers"}            // also "quadratic",
//               // {"kind":"polynomial","coeffs":[...]} ascending powers,
//               // {"kind":"shallow-water","gravity":g},
//               // {"kind":"euler","gamma":g}
//       "domain": [a, b], "final_time": T,
//       "breakpoints": [x1, ...],
//       "profiles": [ {"const": v}, {"affine": {"a": v, "b": v}},
//                     {"tanh": {"amp": v, "slope": s, "shift": s,
//                               "base": v}} ],   // a*x+b; base+amp*tanh(slope*x-shift)
//       "left_state": v, "right_state": v,      // default: wall traces of u0
//       "wave_counts": [..], "artificial": [..]
//     },
//     "architectures": {"field_hidden": [10], "line_hidden": [5]},
//     "samples": {"interior":500,"initial":200,"times":200,"cone":300},
//     "weights": {"residual":0.5,"rh":0.5,"ic":0.5,"interface":0.5},
//     "train": {"epochs":2000,"lr":2e-3,"movement_tol":0,"movement_every":100,
//               "adapt_lr":false,"max_halvings":12,"history_every":1,
//               "checkpoint_every":0},
//     "ddm": {"max_sweeps":50,"tol":1e-5,"sequential":false,"mismatch_grid":201},
//     "fv": {"cells":200,"cfl":0.9,"dirichlet":false,"snapshots":50},
//     "riemann": {"kinds":["shock","rarefaction"],"epochs":6000,"lr":2e-3,
//                 "g1":1,"g2":10,"g3":10,"match_tol":5e-2,"gap_tol":5e-2,
//                 "shared_xi":true,"hidden":[5,5],
//                 "fit_epochs":4000,"fit_lr":2e-3,"fit_points":150,
//                 "max_curtails":4},
//     "events": {"watch_interaction":false,"watch_generation":false,
//                "generation_tol":0},
//     "export": {"points":201,"times":9},
//     "resume": "checkpoint.json"
//   }
//
// State-valued entries ("const", "a", "b", "amp", "base", states) accept a
// number (one component) or an array. Unknown keys anywhere are rejected;
// every schema error names the offending field by dotted path.

enum class RunMode { kNdnn, kDdm, kDirectPinn, kGodunov, kRiemannDecompose, kCompare };

std::string mode_name(RunMode m);
RunMode parse_mode(const std::string& s);

struct EventOptions {
  bool watch_interaction = false;  // after training: find line collisions, re-decompose, retrain
  bool watch_generation = false;   // after training: scan artificial lines for shock formation
  double generation_tol = 0.0;     // <= 0: 1% of the initial total variation
};

struct RiemannOptions {
  // Wave kind per family: "shock" | "rarefaction" | "contact". Required for
  // the neural decomposition of systems; ignored for scalar problems.
  std::vector<std::string> kinds;
  DecomposeConfig decompose;
};

struct RunConfig {
  RunMode mode = RunMode::kNdnn;
  std::string name = "run";
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  ProblemSpec problem;
  LayoutArchitectures archs;
  SampleCounts samples;
  LossWeights weights;
  TrainConfig train;
  DdmConfig ddm;  // ddm.inner is taken from `train`
  FvConfig fv;
  RiemannOptions riemann;
  EventOptions events;
  int export_pts = 201;   // spatial points of exported solution grids
  int export_times = 9;   // time slices of exported solution grids
  std::string resume;     // checkpoint to load before training (ndnn / direct-pinn)
};

WaveKind parse_wave_kind(const std::string& s);
std::string wave_kind_name(WaveKind k);

// JSON text -> config; rejects unknown keys, reports dotted field paths.
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical serialization: every field materialized, keys sorted. Configs
// containing callable profiles do not serialize.
std::string config_to_json(const RunConfig& cfg);

// FNV-1a (64-bit) of the canonical serialization, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

// --- checkpoints -----------------------------------------------------------

struct Checkpoint {
  long epoch = 0;
  std::vector<MlpParams> nets;
};

// Canonical net order of a layout: subdomain fields first, then the
// trainable lines in chain order. Matches the training program's binding
// order, so checkpoints written by the epoch hook load back verbatim.
std::vector<MlpParams*> layout_nets(SubdomainLayout& layout);

void save_checkpoint(const std::string& path, long epoch,
                     const std::vector<const MlpParams*>& nets);
Checkpoint load_checkpoint(const std::string& path);

// Loads checkpointed parameters into the layout's nets; architecture or
// count mismatch -> ConfigError.
long restore_layout(SubdomainLayout& layout, const std::string& path);

// --- exporters ---------------------------------------------------------------
//
// All CSV files carry a header row; floating-point values use %.12g.

void export_history_csv(const std::vector<EpochRecord>& hist, const std::string& path);

// Long-format model samples (t, x, u...) on a uniform grid; points where the
// model collapses (lines touching) are skipped.
void export_solution_csv(const SubdomainLayout& layout, int nx, int nt, const std::string& path);
void export_direct_csv(const ProblemSpec& spec, const MlpParams& net, int nx, int nt,
                       const std::string& path);
void export_ddm_csv(const DdmDecomposition& dec, int nx, int nt, const std::string& path);

void export_sweep_csv(const DdmReport& rep, const std::string& path);
void export_consensus_csv(const std::vector<LineConsensus>& lines, const std::string& path);
void export_curve_csv(const WaveCurve& curve, int pts, const std::string& path);

// Wave-fan report: states, waves with speeds and kinds, and (when the exact
// solver applies) a side-by-side comparison. JSON text.
std::string decomposition_report(const FluxModel& flux, const Decomposition& dec,
                                 const Decomposition* exact);

void write_text_file(const std::string& path, const std::string& text);

// Run manifest: config hash, seed, mode, name, sorted file list. Two runs of
// one config produce byte-identical manifests.
std::string manifest_text(const RunConfig& cfg, std::vector<std::string> files);

// --- bundled experiments -----------------------------------------------------

struct BundledExperiment {
  std::string name;
  std::string blurb;
  RunConfig cfg;
};

// Ready-to-run setups covering the standard benchmark suite: two-shock and
// interaction problems for Burgers-type fluxes, shock generation from smooth
// data, a direct-PINN baseline, a Schwarz decomposition run, shallow-water
// Riemann decompositions, and an Euler four-state problem.
const std::vector<BundledExperiment>& bundled_experiments();

// Lookup by name; ConfigError listing the known names when absent.
RunConfig bundled_config(const std::string& name);

}  // namespace shocktrack
