// Command-line front end: load or select a run configuration, execute the
// requested mode, and drop reproducible CSV/JSON outputs into --out-dir.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shocktrack/errors.hpp"
#include "shocktrack/events.hpp"
#include "shocktrack/geometry.hpp"
#include "shocktrack/godunov.hpp"
#include "shocktrack/riemann.hpp"
#include "shocktrack/run_config.hpp"
#include "shocktrack/train.hpp"

namespace st = shocktrack;
namespace fs = std::filesystem;

namespace {

struct OutDir {
  std::string dir;
  std::vector<std::string> files;  // manifest entries, relative names

  std::string path(const std::string& name) {
    files.push_back(name);
    return dir + "/" + name;
  }
};

double norm2(const st::StateVec& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed * 6364136223846793005ull + salt;
}

st::TrainHooks checkpoint_hooks(const st::RunConfig& cfg, st::SubdomainLayout& layout,
                                OutDir& out) {
  st::TrainHooks hooks;
  if (cfg.train.checkpoint_every <= 0) return hooks;
  const std::string path = out.path("checkpoint.json");
  hooks.checkpoint = [&layout, path](long epoch, const st::Program& prog) {
    for (std::size_t i = 0; i < layout.subs.size(); ++i)
      if (prog.field_net[i] >= 0) prog.read_net(prog.field_net[i], layout.subs[i].net);
    for (std::size_t l = 0; l < layout.lines.size(); ++l)
      if (prog.line_net[l] >= 0) prog.read_net(prog.line_net[l], layout.lines[l].net);
    std::vector<const st::MlpParams*> nets;
    for (st::MlpParams* n : st::layout_nets(layout)) nets.push_back(n);
    st::save_checkpoint(path, epoch, nets);
  };
  return hooks;
}

void write_train_summary(const st::TrainReport& rep, const std::string& path) {
  nlohmann::json j;
  j["epochs"] = rep.epochs;
  j["final_total"] = rep.final_total;
  j["final_lr"] = rep.final_lr;
  j["halvings"] = rep.halvings;
  j["stopped_on_movement"] = rep.stopped_on_movement;
  j["ordering_warning"] = rep.ordering_warning;
  st::write_text_file(path, j.dump(2) + "\n");
}

// Warm start through a wave-fan decomposition: a two-state problem whose
// single jump carries more than one wave. Scalar problems and multi-jump
// data go straight to the geometric layout.
bool wants_decomposition(const st::RunConfig& cfg) {
  const st::ProblemSpec& p = cfg.problem;
  return p.initial.breakpoints.size() == 1 && p.wave_counts.size() == 1 && p.wave_counts[0] > 1;
}

st::DecomposeConfig decompose_config(const st::RunConfig& cfg) {
  st::DecomposeConfig dc = cfg.riemann.decompose;
  dc.seed = derived_seed(cfg.seed, 17);
  return dc;
}

st::Decomposition run_decomposition(const st::RunConfig& cfg) {
  const st::ProblemSpec& p = cfg.problem;
  if (p.initial.breakpoints.size() != 1)
    throw st::ConfigError("wave-fan decomposition needs exactly one breakpoint");
  const double bp = p.initial.breakpoints[0];
  const st::StateVec ul = p.initial.profiles.front().eval(bp);
  const st::StateVec ur = p.initial.profiles.back().eval(bp);
  const int m = p.flux.components();
  if (m == 1) return st::exact_riemann(p.flux, ul, ur);
  if (int(cfg.riemann.kinds.size()) != m)
    throw st::ConfigError("riemann.kinds: need " + std::to_string(m) +
                          " entries for this flux, got " + std::to_string(cfg.riemann.kinds.size()));
  const st::DecomposeConfig dc = decompose_config(cfg);
  if (m == 2) {
    const std::array<st::WaveKind, 2> kinds{st::parse_wave_kind(cfg.riemann.kinds[0]),
                                            st::parse_wave_kind(cfg.riemann.kinds[1])};
    return st::decompose_two(p.flux, ul, ur, kinds, dc);
  }
  const std::array<st::WaveKind, 3> kinds{st::parse_wave_kind(cfg.riemann.kinds[0]),
                                          st::parse_wave_kind(cfg.riemann.kinds[1]),
                                          st::parse_wave_kind(cfg.riemann.kinds[2])};
  return st::decompose_three(p.flux, ul, ur, kinds, dc);
}

void export_decomposition(const st::RunConfig& cfg, const st::Decomposition& dec, OutDir& out) {
  const st::ProblemSpec& p = cfg.problem;
  std::optional<st::Decomposition> exact;
  try {
    const double bp = p.initial.breakpoints[0];
    exact = st::exact_riemann(p.flux, p.initial.profiles.front().eval(bp),
                              p.initial.profiles.back().eval(bp));
  } catch (const st::Error&) {
    // no classical solution to compare against (vacuum, unsupported flux)
  }
  st::write_text_file(out.path("decomposition.json"),
                      st::decomposition_report(p.flux, dec, exact ? &*exact : nullptr));
  for (std::size_t i = 0; i < dec.curves.size(); ++i)
    st::export_curve_csv(dec.curves[i], 200,
                         out.path("curve_" + std::to_string(i + 1) + ".csv"));
}

// Shared by the ndnn and compare modes: build (possibly through a wave-fan
// warm start), train, export the core outputs.
st::SubdomainLayout train_model(const st::RunConfig& cfg, OutDir& out, st::TrainReport& rep) {
  st::SubdomainLayout layout;
  if (wants_decomposition(cfg)) {
    const st::Decomposition dec = run_decomposition(cfg);
    export_decomposition(cfg, dec, out);
    layout = st::handoff(dec, cfg.problem, cfg.archs, cfg.seed);
  } else {
    layout = st::make_layout(cfg.problem, cfg.archs, cfg.seed);
  }
  if (!cfg.resume.empty()) {
    const long epoch = st::restore_layout(layout, cfg.resume);
    std::fprintf(stderr, "resumed from %s at epoch %ld\n", cfg.resume.c_str(), epoch);
  }
  const st::SampleSet samples = st::draw_samples(cfg.samples, layout.duration, cfg.seed);
  const st::TrainHooks hooks = checkpoint_hooks(cfg, layout, out);
  rep = st::train_layout(layout, samples, cfg.weights, cfg.train, hooks);
  st::export_history_csv(rep.history, out.path("history.csv"));
  st::export_line_csv(layout, out.path("lines.csv"));
  st::export_solution_csv(layout, cfg.export_pts, cfg.export_times, out.path("solution.csv"));
  write_train_summary(rep, out.path("train.json"));
  return layout;
}

void watch_events(const st::RunConfig& cfg, st::SubdomainLayout& layout, OutDir& out) {
  if (!cfg.events.watch_generation && !cfg.events.watch_interaction) return;
  nlohmann::json events = nlohmann::json::array();

  if (cfg.events.watch_generation) {
    const double tol = cfg.events.generation_tol > 0 ? cfg.events.generation_tol
                                                     : st::generation_tolerance(layout.problem);
    std::FILE* jf = std::fopen(out.path("jumps.csv").c_str(), "w");
    if (!jf) throw st::Error("cannot open jumps.csv");
    std::fprintf(jf, "line,t,jump,flux_jump\n");
    for (std::size_t l = 0; l < layout.lines.size(); ++l) {
      if (layout.lines[l].role != st::LineRole::kArtificial) continue;
      const int cl = int(l);
      for (int i = 0; i <= 200; ++i) {
        const double tau = layout.duration * i / 200.0;
        std::fprintf(jf, "%d,%.12g,%.12g,%.12g\n", cl, layout.t0 + tau,
                     norm2(st::solution_jump(layout, cl, tau)),
                     norm2(st::flux_jump(layout, cl, tau)));
      }
      if (auto ev = st::detect_generation(layout, cl, tol)) {
        nlohmann::json e;
        e["kind"] = "generation";
        e["line"] = cl;
        e["t"] = layout.t0 + ev->t;
        e["x"] = ev->x;
        e["jump_after"] = ev->confidence;
        e["tolerance"] = tol;
        events.push_back(e);
      }
    }
    std::fclose(jf);
  }

  if (cfg.events.watch_interaction) {
    std::optional<st::EventReport> first;
    for (std::size_t l = 1; l < layout.lines.size(); ++l) {
      if (layout.lines[l - 1].frozen() || layout.lines[l].frozen()) continue;
      if (auto ev = st::detect_interaction(layout, int(l)))
        if (!first || ev->t < first->t) first = ev;
    }
    if (first) {
      nlohmann::json e;
      e["kind"] = "interaction";
      e["t"] = layout.t0 + first->t;
      e["x"] = first->x;
      e["lines"] = {first->line_a, first->line_b};
      e["extra_crossings"] = first->extra_crossings;
      events.push_back(e);

      st::SubdomainLayout stage2 =
          st::redecompose(layout, *first, cfg.archs, derived_seed(cfg.seed, 29));
      const st::SampleSet samples2 =
          st::draw_samples(cfg.samples, stage2.duration, derived_seed(cfg.seed, 31));
      const st::TrainReport rep2 = st::train_layout(stage2, samples2, cfg.weights, cfg.train);
      st::export_history_csv(rep2.history, out.path("stage2_history.csv"));
      st::export_line_csv(stage2, out.path("stage2_lines.csv"));
      st::export_solution_csv(stage2, cfg.export_pts, cfg.export_times,
                              out.path("stage2_solution.csv"));
      write_train_summary(rep2, out.path("stage2_train.json"));

      nlohmann::json lax = nlohmann::json::array();
      for (std::size_t l = 0; l < stage2.lines.size(); ++l) {
        if (stage2.lines[l].frozen()) continue;
        const st::LaxClass c = st::check_lax(stage2, int(l), 0.5 * stage2.duration);
        lax.push_back(c == st::LaxClass::kEntropic ? "entropic"
                      : c == st::LaxClass::kContact ? "contact"
                                                    : "violated");
      }
      e["stage2_lax"] = lax;
      events.back() = e;
    }
  }

  st::write_text_file(out.path("events.json"), events.dump(2) + "\n");
}

int run_ndnn(const st::RunConfig& cfg, OutDir& out) {
  st::TrainReport rep;
  st::SubdomainLayout layout = train_model(cfg, out, rep);
  watch_events(cfg, layout, out);
  return 0;
}

int run_compare(const st::RunConfig& cfg, OutDir& out) {
  st::TrainReport rep;
  st::SubdomainLayout layout = train_model(cfg, out, rep);

  const st::FvGrid grid = st::godunov_solve(cfg.problem, cfg.fv);
  st::export_fv_csv(grid, out.path("fv.csv"));

  const int m = cfg.problem.flux.components();
  std::FILE* f = std::fopen(out.path("compare.csv").c_str(), "w");
  if (!f) throw st::Error("cannot open compare.csv");
  std::fprintf(f, "x");
  for (int c = 1; c <= m; ++c) std::fprintf(f, m == 1 ? ",u_fv" : ",u%d_fv", c);
  for (int c = 1; c <= m; ++c) std::fprintf(f, m == 1 ? ",u_model" : ",u%d_model", c);
  std::fprintf(f, "\n");
  const std::vector<double>& last = grid.data.back();
  for (std::size_t i = 0; i < grid.centers.size(); ++i) {
    std::fprintf(f, "%.12g", grid.centers[i]);
    for (int c = 0; c < m; ++c) std::fprintf(f, ",%.12g", last[i * m + c]);
    try {
      const st::StateVec u = st::reconstruct(layout, grid.centers[i], layout.duration);
      for (int c = 0; c < m; ++c) std::fprintf(f, ",%.12g", u[c]);
    } catch (const st::Error&) {
      for (int c = 0; c < m; ++c) std::fprintf(f, ",nan");
    }
    std::fprintf(f, "\n");
  }
  std::fclose(f);
  return 0;
}

int run_ddm(const st::RunConfig& cfg, OutDir& out) {
  st::SubdomainLayout layout = st::make_layout(cfg.problem, cfg.archs, cfg.seed);
  st::DdmDecomposition dec = st::split_layout(layout);
  st::DdmConfig dc = cfg.ddm;
  dc.inner = cfg.train;
  const st::SampleSet samples = st::draw_samples(cfg.samples, dec.duration, cfg.seed);
  const st::DdmReport rep = st::ddm_train(dec, samples, cfg.weights, dc);

  st::export_sweep_csv(rep, out.path("sweeps.csv"));
  std::vector<st::LineConsensus> cons;
  for (std::size_t k = 0; k + 1 < dec.pieces.size(); ++k)
    cons.push_back(st::consensus_line(dec.pieces[k].right, dec.pieces[k + 1].left, dec.duration,
                                      dc.tol));
  st::export_consensus_csv(cons, out.path("consensus.csv"));
  st::export_ddm_csv(dec, cfg.export_pts, cfg.export_times, out.path("solution.csv"));

  nlohmann::json j;
  j["converged"] = rep.converged;
  j["sweeps"] = rep.sweeps_run;
  j["final_mismatch"] = rep.final_mismatch;
  st::write_text_file(out.path("ddm.json"), j.dump(2) + "\n");
  return rep.converged ? 0 : 4;
}

int run_direct(const st::RunConfig& cfg, OutDir& out) {
  st::Architecture arch;
  arch.sizes.push_back(2);
  for (int h : cfg.archs.field_hidden) arch.sizes.push_back(h);
  arch.sizes.push_back(cfg.problem.flux.components());
  st::MlpParams net = st::MlpParams::init(arch, cfg.seed);
  if (!cfg.resume.empty()) {
    const st::Checkpoint ck = st::load_checkpoint(cfg.resume);
    if (ck.nets.size() != 1 || ck.nets[0].arch.sizes != arch.sizes)
      throw st::ConfigError("checkpoint does not match the single-network architecture");
    net.flat = ck.nets[0].flat;
  }
  const st::SampleSet samples = st::draw_samples(cfg.samples, cfg.problem.final_time, cfg.seed);
  const st::TrainReport rep = st::train_direct(cfg.problem, cfg.problem.final_time, net, samples,
                                               cfg.weights, cfg.train);
  st::export_history_csv(rep.history, out.path("history.csv"));
  st::export_direct_csv(cfg.problem, net, cfg.export_pts, cfg.export_times,
                        out.path("solution.csv"));
  write_train_summary(rep, out.path("train.json"));
  return 0;
}

int run_godunov(const st::RunConfig& cfg, OutDir& out) {
  const st::FvGrid grid = st::godunov_solve(cfg.problem, cfg.fv);
  st::export_fv_csv(grid, out.path("fv.csv"));
  return 0;
}

int run_riemann(const st::RunConfig& cfg, OutDir& out) {
  const st::Decomposition dec = run_decomposition(cfg);
  export_decomposition(cfg, dec, out);
  return 0;
}

int dispatch(const st::RunConfig& cfg) {
  OutDir out{cfg.out_dir, {}};
  fs::create_directories(cfg.out_dir);
  st::write_text_file(out.path("config.json"), st::config_to_json(cfg));

  int rc = 0;
  switch (cfg.mode) {
    case st::RunMode::kNdnn: rc = run_ndnn(cfg, out); break;
    case st::RunMode::kDdm: rc = run_ddm(cfg, out); break;
    case st::RunMode::kDirectPinn: rc = run_direct(cfg, out); break;
    case st::RunMode::kGodunov: rc = run_godunov(cfg, out); break;
    case st::RunMode::kRiemannDecompose: rc = run_riemann(cfg, out); break;
    case st::RunMode::kCompare: rc = run_compare(cfg, out); break;
  }
  st::write_text_file(out.dir + "/manifest.json", st::manifest_text(cfg, out.files));
  std::fprintf(stderr, "%s: wrote %zu files to %s\n", cfg.name.c_str(), out.files.size() + 1,
               out.dir.c_str());
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural tracking of discontinuities in conservation laws"};
  std::string config_path, experiment, out_dir, mode, resume, emit_dir;
  std::uint64_t seed = 0;
  bool list = false;

  app.add_option("-c,--config", config_path, "JSON run configuration");
  app.add_option("-e,--experiment", experiment, "bundled experiment name");
  app.add_flag("--list-experiments", list, "list bundled experiments and exit");
  app.add_option("--emit-configs", emit_dir, "write every bundled config to DIR and exit");
  app.add_option("-o,--out-dir", out_dir, "output directory (overrides config)");
  app.add_option("-s,--seed", seed, "random seed (overrides config)");
  app.add_option("-m,--mode", mode, "run mode (overrides config)");
  app.add_option("--resume", resume, "checkpoint file to restore before training");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list) {
      for (const st::BundledExperiment& b : st::bundled_experiments())
        std::printf("%-22s %s\n", b.name.c_str(), b.blurb.c_str());
      return 0;
    }
    if (!emit_dir.empty()) {
      fs::create_directories(emit_dir);
      for (const st::BundledExperiment& b : st::bundled_experiments())
        st::write_text_file(emit_dir + "/" + b.name + ".json", st::config_to_json(b.cfg));
      std::printf("wrote %zu configs to %s\n", st::bundled_experiments().size(), emit_dir.c_str());
      return 0;
    }
    if (config_path.empty() == experiment.empty())
      throw st::ConfigError("pass exactly one of --config or --experiment");

    st::RunConfig cfg =
        config_path.empty() ? st::bundled_config(experiment) : st::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (app.count("--seed")) cfg.seed = seed;
    if (!mode.empty()) cfg.mode = st::parse_mode(mode);
    if (!resume.empty()) cfg.resume = resume;
    cfg.ddm.inner = cfg.train;
    return dispatch(cfg);
  } catch (const st::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const st::DivergenceError& e) {
    std::fprintf(stderr, "training diverged: %s\n", e.what());
    return 3;
  } catch (const st::DecompositionError& e) {
    std::fprintf(stderr, "decomposition failed: %s\n", e.what());
    return 4;
  } catch (const st::TrackingError& e) {
    std::fprintf(stderr, "tracking failed: %s\n", e.what());
    return 4;
  } catch (const st::VacuumError& e) {
    std::fprintf(stderr, "vacuum state: %s\n", e.what());
    return 4;
  } catch (const st::CollapseError& e) {
    std::fprintf(stderr, "geometry collapsed: %s\n", e.what());
    return 4;
  } catch (const st::OrderingError& e) {
    std::fprintf(stderr, "lines crossed: %s\n", e.what());
    return 4;
  } catch (const st::DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 4;
  } catch (const st::AdmissibilityError& e) {
    std::fprintf(stderr, "inadmissible state: %s\n", e.what());
    return 4;
  } catch (const st::HyperbolicityError& e) {
    std::fprintf(stderr, "lost hyperbolicity: %s\n", e.what());
    return 4;
  } catch (const st::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
