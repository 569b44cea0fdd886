#include "shocktrack/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "shocktrack/errors.hpp"
#include "shocktrack/events.hpp"

namespace shocktrack {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) bad(path + "." + it.key(), "unknown key");
  }
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double get_num(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

long get_long(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<long>();
}

int get_int(const json& j, const std::string& path) {
  return int(get_long(j, path));
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) bad(path, "expected a boolean");
  return j.get<bool>();
}

std::string get_str(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

// State-valued entry: a bare number (one component) or an array of up to
// three numbers.
StateVec get_state(const json& j, const std::string& path) {
  StateVec v;
  if (j.is_number()) {
    v.push_back(j.get<double>());
    return v;
  }
  if (!j.is_array() || j.empty() || j.size() > 3)
    bad(path, "expected a number or an array of 1..3 numbers");
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(get_num(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

std::vector<double> get_doubles(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(get_num(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

std::vector<int> get_ints(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of integers");
  std::vector<int> v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(get_int(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

FluxModel parse_flux(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "coeffs", "gravity", "gamma"});
  const json* kind = find(j, "kind");
  if (!kind) bad(path + ".kind", "missing");
  const std::string k = get_str(*kind, path + ".kind");
  if (k == "burgers") return FluxModel::burgers();
  if (k == "quadratic") return FluxModel::quadratic();
  if (k == "polynomial") {
    const json* c = find(j, "coeffs");
    if (!c) bad(path + ".coeffs", "missing for a polynomial flux");
    return FluxModel::polynomial(get_doubles(*c, path + ".coeffs"));
  }
  if (k == "shallow-water") {
    double g = 1.0;
    if (const json* gv = find(j, "gravity")) g = get_num(*gv, path + ".gravity");
    if (!(g > 0.0)) bad(path + ".gravity", "must be positive");
    return FluxModel::shallow_water(g);
  }
  if (k == "euler") {
    double gamma = 1.4;
    if (const json* gv = find(j, "gamma")) gamma = get_num(*gv, path + ".gamma");
    if (!(gamma > 1.0)) bad(path + ".gamma", "must exceed 1");
    return FluxModel::euler(gamma);
  }
  bad(path + ".kind", "unknown flux kind '" + k + "'");
}

Profile parse_profile(const json& j, const std::string& path) {
  check_keys(j, path, {"const", "affine", "tanh"});
  if (j.size() != 1) bad(path, "expected exactly one of const | affine | tanh");
  if (const json* c = find(j, "const")) return Profile::constant(get_state(*c, path + ".const"));
  if (const json* a = find(j, "affine")) {
    check_keys(*a, path + ".affine", {"a", "b"});
    const json* pa = find(*a, "a");
    const json* pb = find(*a, "b");
    if (!pa || !pb) bad(path + ".affine", "needs both a and b");
    const StateVec slope = get_state(*pa, path + ".affine.a");
    const StateVec inter = get_state(*pb, path + ".affine.b");
    if (slope.size() != inter.size()) bad(path + ".affine", "a and b sizes differ");
    return Profile::affine(slope, inter);
  }
  if (const json* t = find(j, "tanh")) {
    check_keys(*t, path + ".tanh", {"amp", "slope", "shift", "base"});
    const json* pamp = find(*t, "amp");
    const json* pslope = find(*t, "slope");
    if (!pamp || !pslope) bad(path + ".tanh", "needs amp and slope");
    const StateVec amp = get_state(*pamp, path + ".tanh.amp");
    const double slope = get_num(*pslope, path + ".tanh.slope");
    if (slope == 0.0) bad(path + ".tanh.slope", "must be nonzero");
    double shift = 0.0;
    if (const json* ps = find(*t, "shift")) shift = get_num(*ps, path + ".tanh.shift");
    StateVec base(amp.size());
    if (const json* pb = find(*t, "base")) {
      base = get_state(*pb, path + ".tanh.base");
      if (base.size() != amp.size()) bad(path + ".tanh", "base and amp sizes differ");
    }
    return Profile::tanh_ramp(base, amp, slope, shift / slope);
  }
  bad(path, "expected one of const | affine | tanh");
}

ProblemSpec parse_problem(const json& j, const std::string& path) {
  check_keys(j, path,
             {"flux", "domain", "final_time", "breakpoints", "profiles", "left_state",
              "right_state", "wave_counts", "artificial"});
  ProblemSpec spec;
  const json* flux = find(j, "flux");
  if (!flux) bad(path + ".flux", "missing");
  spec.flux = parse_flux(*flux, path + ".flux");

  const json* dom = find(j, "domain");
  if (!dom) bad(path + ".domain", "missing");
  if (!dom->is_array() || dom->size() != 2) bad(path + ".domain", "expected [a, b]");
  spec.domain.a = get_num((*dom)[0], path + ".domain[0]");
  spec.domain.b = get_num((*dom)[1], path + ".domain[1]");

  const json* ft = find(j, "final_time");
  if (!ft) bad(path + ".final_time", "missing");
  spec.final_time = get_num(*ft, path + ".final_time");

  if (const json* bp = find(j, "breakpoints"))
    spec.initial.breakpoints = get_doubles(*bp, path + ".breakpoints");

  const json* profs = find(j, "profiles");
  if (!profs) bad(path + ".profiles", "missing");
  if (!profs->is_array()) bad(path + ".profiles", "expected an array");
  for (std::size_t i = 0; i < profs->size(); ++i)
    spec.initial.profiles.push_back(
        parse_profile((*profs)[i], path + ".profiles[" + std::to_string(i) + "]"));

  if (const json* wc = find(j, "wave_counts"))
    spec.wave_counts = get_ints(*wc, path + ".wave_counts");
  if (const json* art = find(j, "artificial"))
    spec.artificial = get_doubles(*art, path + ".artificial");

  if (spec.initial.profiles.empty()) bad(path + ".profiles", "needs at least one profile");
  if (const json* ls = find(j, "left_state"))
    spec.initial.left_state = get_state(*ls, path + ".left_state");
  else
    spec.initial.left_state = spec.initial.profiles.front().eval(spec.domain.a);
  if (const json* rs = find(j, "right_state"))
    spec.initial.right_state = get_state(*rs, path + ".right_state");
  else
    spec.initial.right_state = spec.initial.profiles.back().eval(spec.domain.b);

  spec.validate();
  return spec;
}

std::vector<int> parse_hidden(const json& j, const std::string& path) {
  const std::vector<int> h = get_ints(j, path);
  if (h.empty()) bad(path, "needs at least one hidden layer");
  for (int n : h)
    if (n < 1) bad(path, "layer sizes must be positive");
  return h;
}

json state_json(const StateVec& v) {
  json a = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json profile_json(const Profile& p) {
  switch (p.kind) {
    case Profile::Kind::kConst:
      return json{{"const", state_json(p.value)}};
    case Profile::Kind::kAffine:
      return json{{"affine", json{{"a", state_json(p.slope)}, {"b", state_json(p.intercept)}}}};
    case Profile::Kind::kTanh:
      return json{{"tanh", json{{"amp", state_json(p.amp)},
                                {"base", state_json(p.base)},
                                {"shift", p.sharpness * p.center},
                                {"slope", p.sharpness}}}};
    case Profile::Kind::kCallable:
      throw ConfigError("callable profiles do not serialize");
  }
  throw ConfigError("unknown profile kind");
}

json flux_json(const FluxModel& f) {
  json j;
  j["kind"] = flux_kind_name(f.kind);
  if (f.kind == FluxKind::kPolynomial) j["coeffs"] = f.coeffs;
  if (f.kind == FluxKind::kShallowWater) j["gravity"] = f.gravity;
  if (f.kind == FluxKind::kEuler) j["gamma"] = f.gamma;
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

std::FILE* open_out(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open " + path + " for writing");
  return f;
}

void print_state_row(std::FILE* f, const StateVec& u) {
  for (std::size_t c = 0; c < u.size(); ++c) std::fprintf(f, ",%.12g", u[c]);
  std::fprintf(f, "\n");
}

void print_state_header(std::FILE* f, int m) {
  if (m == 1)
    std::fprintf(f, ",u\n");
  else
    for (int c = 1; c <= m; ++c) std::fprintf(f, ",u%d%s", c, c == m ? "\n" : "");
}

}  // namespace

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::kNdnn: return "ndnn";
    case RunMode::kDdm: return "ddm";
    case RunMode::kDirectPinn: return "direct-pinn";
    case RunMode::kGodunov: return "godunov";
    case RunMode::kRiemannDecompose: return "riemann-decompose";
    case RunMode::kCompare: return "compare";
  }
  return "unknown";
}

RunMode parse_mode(const std::string& s) {
  if (s == "ndnn") return RunMode::kNdnn;
  if (s == "ddm") return RunMode::kDdm;
  if (s == "direct-pinn") return RunMode::kDirectPinn;
  if (s == "godunov") return RunMode::kGodunov;
  if (s == "riemann-decompose") return RunMode::kRiemannDecompose;
  if (s == "compare") return RunMode::kCompare;
  throw ConfigError("mode: unknown mode '" + s +
                    "' (ndnn | ddm | direct-pinn | godunov | riemann-decompose | compare)");
}

WaveKind parse_wave_kind(const std::string& s) {
  if (s == "shock") return WaveKind::kShock;
  if (s == "rarefaction") return WaveKind::kRarefaction;
  if (s == "contact") return WaveKind::kContact;
  throw ConfigError("unknown wave kind '" + s + "' (shock | rarefaction | contact)");
}

std::string wave_kind_name(WaveKind k) {
  switch (k) {
    case WaveKind::kShock: return "shock";
    case WaveKind::kRarefaction: return "rarefaction";
    case WaveKind::kContact: return "contact";
  }
  return "unknown";
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(j, "config",
             {"mode", "name", "out_dir", "seed", "problem", "architectures", "samples", "weights",
              "train", "ddm", "fv", "riemann", "events", "export", "resume"});

  RunConfig cfg;
  if (const json* m = find(j, "mode")) cfg.mode = parse_mode(get_str(*m, "mode"));
  if (const json* n = find(j, "name")) cfg.name = get_str(*n, "name");
  if (const json* o = find(j, "out_dir")) cfg.out_dir = get_str(*o, "out_dir");
  if (const json* s = find(j, "seed")) {
    if (!s->is_number_integer() && !s->is_number_unsigned()) bad("seed", "expected an integer");
    cfg.seed = s->get<std::uint64_t>();
  }
  const json* prob = find(j, "problem");
  if (!prob) bad("problem", "missing");
  cfg.problem = parse_problem(*prob, "problem");

  if (const json* a = find(j, "architectures")) {
    check_keys(*a, "architectures", {"field_hidden", "line_hidden"});
    if (const json* f = find(*a, "field_hidden"))
      cfg.archs.field_hidden = parse_hidden(*f, "architectures.field_hidden");
    if (const json* l = find(*a, "line_hidden"))
      cfg.archs.line_hidden = parse_hidden(*l, "architectures.line_hidden");
  }
  if (const json* s = find(j, "samples")) {
    check_keys(*s, "samples", {"interior", "initial", "times", "cone"});
    if (const json* v = find(*s, "interior")) cfg.samples.interior = get_int(*v, "samples.interior");
    if (const json* v = find(*s, "initial")) cfg.samples.initial = get_int(*v, "samples.initial");
    if (const json* v = find(*s, "times")) cfg.samples.times = get_int(*v, "samples.times");
    if (const json* v = find(*s, "cone")) cfg.samples.cone = get_int(*v, "samples.cone");
    if (cfg.samples.interior < 1 || cfg.samples.initial < 1 || cfg.samples.times < 1 ||
        cfg.samples.cone < 1)
      bad("samples", "sample counts must be positive");
  }
  if (const json* w = find(j, "weights")) {
    check_keys(*w, "weights", {"residual", "rh", "ic", "interface"});
    if (const json* v = find(*w, "residual")) cfg.weights.residual = get_num(*v, "weights.residual");
    if (const json* v = find(*w, "rh")) cfg.weights.rh = get_num(*v, "weights.rh");
    if (const json* v = find(*w, "ic")) cfg.weights.ic = get_num(*v, "weights.ic");
    if (const json* v = find(*w, "interface"))
      cfg.weights.interface_match = get_num(*v, "weights.interface");
  }
  if (const json* t = find(j, "train")) {
    check_keys(*t, "train",
               {"epochs", "lr", "movement_tol", "movement_every", "adapt_lr", "max_halvings",
                "history_every", "checkpoint_every"});
    if (const json* v = find(*t, "epochs")) cfg.train.max_epochs = get_long(*v, "train.epochs");
    if (const json* v = find(*t, "lr")) cfg.train.lr = get_num(*v, "train.lr");
    if (const json* v = find(*t, "movement_tol"))
      cfg.train.movement_tol = get_num(*v, "train.movement_tol");
    if (const json* v = find(*t, "movement_every"))
      cfg.train.movement_every = get_long(*v, "train.movement_every");
    if (const json* v = find(*t, "adapt_lr")) cfg.train.adapt_lr = get_bool(*v, "train.adapt_lr");
    if (const json* v = find(*t, "max_halvings"))
      cfg.train.max_halvings = get_int(*v, "train.max_halvings");
    if (const json* v = find(*t, "history_every"))
      cfg.train.history_every = get_long(*v, "train.history_every");
    if (const json* v = find(*t, "checkpoint_every"))
      cfg.train.checkpoint_every = get_long(*v, "train.checkpoint_every");
    if (cfg.train.max_epochs < 0) bad("train.epochs", "must be nonnegative");
    if (!(cfg.train.lr > 0.0)) bad("train.lr", "must be positive");
  }
  if (const json* d = find(j, "ddm")) {
    check_keys(*d, "ddm", {"max_sweeps", "tol", "sequential", "mismatch_grid"});
    if (const json* v = find(*d, "max_sweeps")) cfg.ddm.max_sweeps = get_long(*v, "ddm.max_sweeps");
    if (const json* v = find(*d, "tol")) cfg.ddm.tol = get_num(*v, "ddm.tol");
    if (const json* v = find(*d, "sequential")) cfg.ddm.sequential = get_bool(*v, "ddm.sequential");
    if (const json* v = find(*d, "mismatch_grid"))
      cfg.ddm.mismatch_grid = get_int(*v, "ddm.mismatch_grid");
    if (cfg.ddm.max_sweeps < 1) bad("ddm.max_sweeps", "must be positive");
    if (cfg.ddm.mismatch_grid < 2) bad("ddm.mismatch_grid", "needs at least two points");
  }
  if (const json* f = find(j, "fv")) {
    check_keys(*f, "fv", {"cells", "cfl", "dirichlet", "snapshots"});
    if (const json* v = find(*f, "cells")) cfg.fv.cells = get_int(*v, "fv.cells");
    if (const json* v = find(*f, "cfl")) cfg.fv.cfl = get_num(*v, "fv.cfl");
    if (const json* v = find(*f, "dirichlet")) cfg.fv.dirichlet = get_bool(*v, "fv.dirichlet");
    if (const json* v = find(*f, "snapshots")) cfg.fv.snapshots = get_int(*v, "fv.snapshots");
    if (cfg.fv.cells < 2) bad("fv.cells", "needs at least two cells");
    if (!(cfg.fv.cfl > 0.0) || cfg.fv.cfl > 1.0) bad("fv.cfl", "must lie in (0, 1]");
    if (cfg.fv.snapshots < 2) bad("fv.snapshots", "needs at least two snapshots");
  }
  if (const json* r = find(j, "riemann")) {
    check_keys(*r, "riemann",
               {"kinds", "epochs", "lr", "g1", "g2", "g3", "match_tol", "gap_tol", "shared_xi",
                "hidden", "fit_epochs", "fit_lr", "fit_points", "max_curtails"});
    if (const json* v = find(*r, "kinds")) {
      if (!v->is_array()) bad("riemann.kinds", "expected an array of wave kinds");
      for (std::size_t i = 0; i < v->size(); ++i) {
        const std::string s = get_str((*v)[i], "riemann.kinds[" + std::to_string(i) + "]");
        parse_wave_kind(s);  // validates
        cfg.riemann.kinds.push_back(s);
      }
    }
    DecomposeConfig& dc = cfg.riemann.decompose;
    if (const json* v = find(*r, "epochs")) dc.epochs = get_long(*v, "riemann.epochs");
    if (const json* v = find(*r, "lr")) dc.lr = get_num(*v, "riemann.lr");
    if (const json* v = find(*r, "g1")) dc.g1 = get_num(*v, "riemann.g1");
    if (const json* v = find(*r, "g2")) dc.g2 = get_num(*v, "riemann.g2");
    if (const json* v = find(*r, "g3")) dc.g3 = get_num(*v, "riemann.g3");
    if (const json* v = find(*r, "match_tol")) dc.match_tol = get_num(*v, "riemann.match_tol");
    if (const json* v = find(*r, "gap_tol")) dc.gap_tol = get_num(*v, "riemann.gap_tol");
    if (const json* v = find(*r, "shared_xi")) dc.shared_xi = get_bool(*v, "riemann.shared_xi");
    if (const json* v = find(*r, "hidden")) dc.hidden = parse_hidden(*v, "riemann.hidden");
    if (const json* v = find(*r, "fit_epochs")) dc.fit.epochs = get_long(*v, "riemann.fit_epochs");
    if (const json* v = find(*r, "fit_lr")) dc.fit.lr = get_num(*v, "riemann.fit_lr");
    if (const json* v = find(*r, "fit_points")) dc.fit.points = get_int(*v, "riemann.fit_points");
    if (const json* v = find(*r, "max_curtails"))
      dc.fit.max_curtails = get_int(*v, "riemann.max_curtails");
    if (dc.fit.points < 2) bad("riemann.fit_points", "needs at least two points");
  }
  if (const json* e = find(j, "events")) {
    check_keys(*e, "events", {"watch_interaction", "watch_generation", "generation_tol"});
    if (const json* v = find(*e, "watch_interaction"))
      cfg.events.watch_interaction = get_bool(*v, "events.watch_interaction");
    if (const json* v = find(*e, "watch_generation"))
      cfg.events.watch_generation = get_bool(*v, "events.watch_generation");
    if (const json* v = find(*e, "generation_tol"))
      cfg.events.generation_tol = get_num(*v, "events.generation_tol");
  }
  if (const json* e = find(j, "export")) {
    check_keys(*e, "export", {"points", "times"});
    if (const json* v = find(*e, "points")) cfg.export_pts = get_int(*v, "export.points");
    if (const json* v = find(*e, "times")) cfg.export_times = get_int(*v, "export.times");
    if (cfg.export_pts < 2 || cfg.export_times < 2)
      bad("export", "needs at least two points and two times");
  }
  if (const json* r = find(j, "resume")) cfg.resume = get_str(*r, "resume");

  cfg.ddm.inner = cfg.train;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["mode"] = mode_name(cfg.mode);
  j["name"] = cfg.name;
  j["out_dir"] = cfg.out_dir;
  j["seed"] = cfg.seed;

  json p;
  p["flux"] = flux_json(cfg.problem.flux);
  p["domain"] = {cfg.problem.domain.a, cfg.problem.domain.b};
  p["final_time"] = cfg.problem.final_time;
  p["breakpoints"] = cfg.problem.initial.breakpoints;
  json profs = json::array();
  for (const Profile& pr : cfg.problem.initial.profiles) profs.push_back(profile_json(pr));
  p["profiles"] = profs;
  p["left_state"] = state_json(cfg.problem.initial.left_state);
  p["right_state"] = state_json(cfg.problem.initial.right_state);
  p["wave_counts"] = cfg.problem.wave_counts;
  p["artificial"] = cfg.problem.artificial;
  j["problem"] = p;

  j["architectures"] =
      json{{"field_hidden", cfg.archs.field_hidden}, {"line_hidden", cfg.archs.line_hidden}};
  j["samples"] = json{{"interior", cfg.samples.interior},
                      {"initial", cfg.samples.initial},
                      {"times", cfg.samples.times},
                      {"cone", cfg.samples.cone}};
  j["weights"] = json{{"residual", cfg.weights.residual},
                      {"rh", cfg.weights.rh},
                      {"ic", cfg.weights.ic},
                      {"interface", cfg.weights.interface_match}};
  j["train"] = json{{"epochs", cfg.train.max_epochs},
                    {"lr", cfg.train.lr},
                    {"movement_tol", cfg.train.movement_tol},
                    {"movement_every", cfg.train.movement_every},
                    {"adapt_lr", cfg.train.adapt_lr},
                    {"max_halvings", cfg.train.max_halvings},
                    {"history_every", cfg.train.history_every},
                    {"checkpoint_every", cfg.train.checkpoint_every}};
  j["ddm"] = json{{"max_sweeps", cfg.ddm.max_sweeps},
                  {"tol", cfg.ddm.tol},
                  {"sequential", cfg.ddm.sequential},
                  {"mismatch_grid", cfg.ddm.mismatch_grid}};
  j["fv"] = json{{"cells", cfg.fv.cells},
                 {"cfl", cfg.fv.cfl},
                 {"dirichlet", cfg.fv.dirichlet},
                 {"snapshots", cfg.fv.snapshots}};
  const DecomposeConfig& dc = cfg.riemann.decompose;
  j["riemann"] = json{{"kinds", cfg.riemann.kinds},
                      {"epochs", dc.epochs},
                      {"lr", dc.lr},
                      {"g1", dc.g1},
                      {"g2", dc.g2},
                      {"g3", dc.g3},
                      {"match_tol", dc.match_tol},
                      {"gap_tol", dc.gap_tol},
                      {"shared_xi", dc.shared_xi},
                      {"hidden", dc.hidden},
                      {"fit_epochs", dc.fit.epochs},
                      {"fit_lr", dc.fit.lr},
                      {"fit_points", dc.fit.points},
                      {"max_curtails", dc.fit.max_curtails}};
  j["events"] = json{{"watch_interaction", cfg.events.watch_interaction},
                     {"watch_generation", cfg.events.watch_generation},
                     {"generation_tol", cfg.events.generation_tol}};
  j["export"] = json{{"points", cfg.export_pts}, {"times", cfg.export_times}};
  j["resume"] = cfg.resume;
  return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
  const std::string s = config_to_json(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --- checkpoints -------------------------------------------------------------

std::vector<MlpParams*> layout_nets(SubdomainLayout& layout) {
  std::vector<MlpParams*> out;
  for (Subdomain& s : layout.subs) out.push_back(&s.net);
  for (DiscontinuityLine& l : layout.lines)
    if (!l.frozen()) out.push_back(&l.net);
  return out;
}

void save_checkpoint(const std::string& path, long epoch,
                     const std::vector<const MlpParams*>& nets) {
  json j;
  j["epoch"] = epoch;
  json arr = json::array();
  for (const MlpParams* n : nets) {
    json e;
    e["sizes"] = n->arch.sizes;
    e["flat"] = n->flat;
    arr.push_back(e);
  }
  j["nets"] = arr;
  write_text_file(path, j.dump() + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
  const json j = load_json_file(path);
  check_keys(j, "checkpoint", {"epoch", "nets"});
  Checkpoint ck;
  const json* ep = find(j, "epoch");
  const json* nets = find(j, "nets");
  if (!ep || !nets) throw ConfigError("checkpoint: needs epoch and nets");
  ck.epoch = get_long(*ep, "checkpoint.epoch");
  if (!nets->is_array()) throw ConfigError("checkpoint.nets: expected an array");
  for (std::size_t i = 0; i < nets->size(); ++i) {
    const std::string path_i = "checkpoint.nets[" + std::to_string(i) + "]";
    const json& e = (*nets)[i];
    check_keys(e, path_i, {"sizes", "flat"});
    const json* sizes = find(e, "sizes");
    const json* flat = find(e, "flat");
    if (!sizes || !flat) throw ConfigError(path_i + ": needs sizes and flat");
    MlpParams m;
    m.arch.sizes = get_ints(*sizes, path_i + ".sizes");
    m.arch.validate();
    m.flat = get_doubles(*flat, path_i + ".flat");
    if (int(m.flat.size()) != m.arch.param_count())
      throw ConfigError(path_i + ".flat: wrong parameter count");
    ck.nets.push_back(std::move(m));
  }
  return ck;
}

long restore_layout(SubdomainLayout& layout, const std::string& path) {
  const Checkpoint ck = load_checkpoint(path);
  const std::vector<MlpParams*> nets = layout_nets(layout);
  if (ck.nets.size() != nets.size())
    throw ConfigError("checkpoint holds " + std::to_string(ck.nets.size()) + " nets, layout has " +
                      std::to_string(nets.size()));
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (ck.nets[i].arch.sizes != nets[i]->arch.sizes)
      throw ConfigError("checkpoint net " + std::to_string(i) + " architecture mismatch");
    nets[i]->flat = ck.nets[i].flat;
  }
  return ck.epoch;
}

// --- exporters -----------------------------------------------------------------

void write_text_file(const std::string& path, const std::string& text) {
  std::FILE* f = open_out(path);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

void export_history_csv(const std::vector<EpochRecord>& hist, const std::string& path) {
  std::FILE* f = open_out(path);
  std::fprintf(f, "epoch,total,residual,rh,ic,interface\n");
  for (const EpochRecord& r : hist)
    std::fprintf(f, "%ld,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.epoch, r.total, r.residual, r.rh,
                 r.ic, r.interface_match);
  std::fclose(f);
}

void export_solution_csv(const SubdomainLayout& layout, int nx, int nt, const std::string& path) {
  nx = std::max(nx, 2);
  nt = std::max(nt, 2);
  std::FILE* f = open_out(path);
  std::fprintf(f, "t,x");
  print_state_header(f, layout.problem.flux.components());
  for (int it = 0; it < nt; ++it) {
    const double tau = layout.duration * double(it) / (nt - 1);
    for (int ix = 0; ix < nx; ++ix) {
      const double x =
          layout.problem.domain.a +
          (layout.problem.domain.b - layout.problem.domain.a) * double(ix) / (nx - 1);
      StateVec u;
      try {
        u = reconstruct(layout, x, tau);
      } catch (const CollapseError&) {
        continue;  // lines touching: the point has no subdomain
      } catch (const OrderingError&) {
        continue;
      }
      std::fprintf(f, "%.12g,%.12g", layout.t0 + tau, x);
      print_state_row(f, u);
    }
  }
  std::fclose(f);
}

void export_direct_csv(const ProblemSpec& spec, const MlpParams& net, int nx, int nt,
                       const std::string& path) {
  nx = std::max(nx, 2);
  nt = std::max(nt, 2);
  std::FILE* f = open_out(path);
  std::fprintf(f, "t,x");
  print_state_header(f, spec.flux.components());
  for (int it = 0; it < nt; ++it) {
    const double t = spec.final_time * double(it) / (nt - 1);
    for (int ix = 0; ix < nx; ++ix) {
      const double x = spec.domain.a + (spec.domain.b - spec.domain.a) * double(ix) / (nx - 1);
      const StateVec u = eval_field(net, x, t).value;
      std::fprintf(f, "%.12g,%.12g", t, x);
      print_state_row(f, u);
    }
  }
  std::fclose(f);
}

void export_ddm_csv(const DdmDecomposition& dec, int nx, int nt, const std::string& path) {
  nx = std::max(nx, 2);
  nt = std::max(nt, 2);
  std::FILE* f = open_out(path);
  std::fprintf(f, "t,x");
  print_state_header(f, dec.problem.flux.components());
  for (int it = 0; it < nt; ++it) {
    const double tau = dec.duration * double(it) / (nt - 1);
    for (int ix = 0; ix < nx; ++ix) {
      const double x =
          dec.problem.domain.a + (dec.problem.domain.b - dec.problem.domain.a) * double(ix) / (nx - 1);
      StateVec u;
      try {
        u = ddm_reconstruct(dec, x, tau);
      } catch (const CollapseError&) {
        continue;
      } catch (const OrderingError&) {
        continue;
      }
      std::fprintf(f, "%.12g,%.12g", dec.t0 + tau, x);
      print_state_row(f, u);
    }
  }
  std::fclose(f);
}

void export_sweep_csv(const DdmReport& rep, const std::string& path) {
  std::FILE* f = open_out(path);
  const std::size_t pieces = rep.sweeps.empty() ? 0 : rep.sweeps.front().local_total.size();
  std::fprintf(f, "sweep,mismatch");
  for (std::size_t p = 0; p < pieces; ++p) std::fprintf(f, ",loss_%zu", p + 1);
  std::fprintf(f, "\n");
  for (const SweepRecord& s : rep.sweeps) {
    std::fprintf(f, "%ld,%.12g", s.sweep, s.mismatch);
    for (double v : s.local_total) std::fprintf(f, ",%.12g", v);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

void export_consensus_csv(const std::vector<LineConsensus>& lines, const std::string& path) {
  std::FILE* f = open_out(path);
  std::fprintf(f, "interface,t,mean,left,right\n");
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const LineConsensus& c = lines[k];
    for (std::size_t i = 0; i < c.times.size(); ++i)
      std::fprintf(f, "%zu,%.12g,%.12g,%.12g,%.12g\n", k + 1, c.times[i], c.mean_pos[i],
                   c.left_pos[i], c.right_pos[i]);
  }
  std::fclose(f);
}

void export_curve_csv(const WaveCurve& curve, int pts, const std::string& path) {
  pts = std::max(pts, 2);
  std::FILE* f = open_out(path);
  std::fprintf(f, "xi");
  print_state_header(f, int(curve.anchor.size()));
  for (int i = 0; i < pts; ++i) {
    const double xi = curve.xi_lo + (curve.xi_hi - curve.xi_lo) * double(i) / (pts - 1);
    const StateVec u = curve_eval(curve, xi);
    std::fprintf(f, "%.12g", xi);
    print_state_row(f, u);
  }
  std::fclose(f);
}

namespace {

json wave_json(const FluxModel& flux, const Decomposition& dec, std::size_t i) {
  // states flanking wave i: left, stars..., right
  const StateVec& before = i == 0 ? dec.left : dec.stars[i - 1];
  const StateVec& after = i + 1 == dec.waves.size() ? dec.right : dec.stars[i];
  const Wave& w = dec.waves[i];
  json j;
  j["family"] = w.family;
  j["kind"] = wave_kind_name(w.kind);
  j["speed"] = w.speed;
  j["tail_speed"] = w.tail_speed;
  if (w.kind != WaveKind::kRarefaction) {
    const LaxClass lax = check_lax_states(flux, before, after, w.speed, w.family);
    j["lax"] = lax == LaxClass::kEntropic ? "entropic"
               : lax == LaxClass::kContact ? "contact"
                                           : "violated";
  }
  return j;
}

json fan_json(const FluxModel& flux, const Decomposition& dec) {
  json j;
  j["left"] = state_json(dec.left);
  j["right"] = state_json(dec.right);
  json stars = json::array();
  for (const StateVec& s : dec.stars) stars.push_back(state_json(s));
  j["stars"] = stars;
  json waves = json::array();
  for (std::size_t i = 0; i < dec.waves.size(); ++i) waves.push_back(wave_json(flux, dec, i));
  j["waves"] = waves;
  return j;
}

}  // namespace

std::string decomposition_report(const FluxModel& flux, const Decomposition& dec,
                                 const Decomposition* exact) {
  json j = fan_json(flux, dec);
  if (exact) {
    j["exact"] = fan_json(flux, *exact);
    if (exact->stars.size() == dec.stars.size()) {
      json errs = json::array();
      for (std::size_t i = 0; i < dec.stars.size(); ++i) {
        double num = 0, den = 1;
        for (std::size_t c = 0; c < dec.stars[i].size(); ++c) {
          const double d = dec.stars[i][c] - exact->stars[i][c];
          num += d * d;
          den += exact->stars[i][c] * exact->stars[i][c];
        }
        errs.push_back(std::sqrt(num) / std::sqrt(den));
      }
      j["star_rel_error"] = errs;
    }
  }
  return j.dump(2) + "\n";
}

std::string manifest_text(const RunConfig& cfg, std::vector<std::string> files) {
  std::sort(files.begin(), files.end());
  json j;
  j["config_hash"] = config_hash(cfg);
  j["mode"] = mode_name(cfg.mode);
  j["name"] = cfg.name;
  j["seed"] = cfg.seed;
  j["files"] = files;
  return j.dump(2) + "\n";
}

// --- bundled experiments -------------------------------------------------------

namespace {

RunConfig base_burgers(const char* name, double a, double b, double T) {
  RunConfig c;
  c.name = name;
  c.out_dir = std::string("out/") + name;
  c.problem.flux = FluxModel::burgers();
  c.problem.domain = {a, b};
  c.problem.final_time = T;
  return c;
}

void finish(RunConfig& c) {
  ProblemSpec& p = c.problem;
  if (p.initial.left_state.empty()) p.initial.left_state = p.initial.profiles.front().eval(p.domain.a);
  if (p.initial.right_state.empty()) p.initial.right_state = p.initial.profiles.back().eval(p.domain.b);
  p.validate();
  c.ddm.inner = c.train;
}

std::vector<BundledExperiment> make_bundled() {
  std::vector<BundledExperiment> out;

  {
    // Concave quadratic flux: a regularized fan on the left catches up with
    // an initially stationary shock, which then bends away.
    RunConfig c;
    c.name = "fan-shock-merge";
    c.out_dir = "out/fan-shock-merge";
    c.problem.flux = FluxModel::quadratic();
    c.problem.domain = {-4.0, 1.0};
    c.problem.final_time = 0.75;
    c.problem.initial.breakpoints = {0.0};
    c.problem.initial.profiles = {
        Profile::tanh_ramp(StateVec{0.75}, StateVec{-0.25}, 20.0, -2.0),
        Profile::constant(StateVec{1.5})};
    c.archs.field_hidden = {20, 20};
    c.samples.interior = 2500;
    c.samples.initial = 400;
    c.samples.times = 300;
    c.train.max_epochs = 30000;
    c.train.lr = 4e-3;
    c.train.adapt_lr = true;
    c.train.history_every = 100;
    finish(c);
    out.push_back({c.name, "fan merging into an initially stationary shock", c});
  }
  {
    // Two shocks moving at +-3/4 from piecewise constant data, against a
    // first-order reference solution.
    RunConfig c = base_burgers("two-shock", -1.0, 2.0, 0.5);
    c.mode = RunMode::kCompare;
    c.problem.initial.breakpoints = {0.0, 1.0};
    c.problem.initial.profiles = {Profile::constant(StateVec{1.0}),
                                  Profile::constant(StateVec{0.5}),
                                  Profile::constant(StateVec{-2.0})};
    c.archs.field_hidden = {5};
    c.samples.interior = 500;
    c.train.max_epochs = 20000;
    c.train.lr = 8e-3;
    c.train.adapt_lr = true;
    c.train.history_every = 100;
    c.fv.cells = 200;
    c.fv.cfl = 0.9;
    finish(c);
    out.push_back({c.name, "two shocks from three constant states, with reference profiles", c});
  }
  {
    // Shock, expanding fan, shock; the fan accelerates the left shock and
    // decelerates the right one.
    RunConfig c = base_burgers("shock-fan-shock", -1.0, 2.0, 0.4);
    c.problem.initial.breakpoints = {0.0, 1.0};
    c.problem.initial.profiles = {Profile::constant(StateVec{2.0}),
                                  Profile::affine(StateVec{4.0}, StateVec{0.0}),
                                  Profile::constant(StateVec{-4.0})};
    c.archs.field_hidden = {16};
    c.samples.interior = 512;
    c.train.max_epochs = 20000;
    c.train.lr = 8e-3;
    c.train.adapt_lr = true;
    c.train.history_every = 100;
    finish(c);
    out.push_back({c.name, "two shocks driven apart by a linear fan between them", c});
  }
  {
    // Smooth data steepening into a shock at an artificial line, plus a
    // genuine shock on the right.
    RunConfig c = base_burgers("shock-generation", -1.0, 2.0, 0.5);
    c.problem.initial.breakpoints = {1.5};
    c.problem.initial.profiles = {
        Profile::tanh_ramp(StateVec{0.75}, StateVec{-1.0}, 2.0, 0.0),
        Profile::constant(StateVec{-0.5})};
    c.problem.artificial = {0.5};
    c.events.watch_generation = true;
    c.archs.field_hidden = {30};
    c.samples.interior = 900;
    c.samples.initial = 300;
    c.train.max_epochs = 20000;
    c.train.lr = 4e-3;
    c.train.adapt_lr = true;
    c.train.history_every = 100;
    finish(c);
    out.push_back({c.name, "shock forming from smooth data on an artificial line", c});
  }
  {
    // Same data as shock-fan-shock but run past the collision time; the two
    // lines merge and the run re-decomposes onto [t*, T].
    RunConfig c = base_burgers("shock-interaction", -1.0, 2.0, 0.6);
    c.problem.initial.breakpoints = {0.0, 1.0};
    c.problem.initial.profiles = {Profile::constant(StateVec{2.0}),
                                  Profile::affine(StateVec{4.0}, StateVec{0.0}),
                                  Profile::constant(StateVec{-4.0})};
    c.events.watch_interaction = true;
    c.archs.field_hidden = {16};
    c.samples.interior = 512;
    c.train.max_epochs = 20000;
    c.train.lr = 8e-3;
    c.train.adapt_lr = true;
    c.train.history_every = 100;
    finish(c);
    out.push_back({c.name, "colliding shocks with re-decomposition at the interaction", c});
  }
  {
    // Whole-domain single-network baseline on increasing smooth data: the
    // profile opens into a rarefaction, which the baseline handles well.
    RunConfig c = base_burgers("pinn-rarefaction", -3.0, 3.0, 0.65);
    c.mode = RunMode::kDirectPinn;
    c.problem.initial.profiles = {
        Profile::tanh_ramp(StateVec{-0.9999}, StateVec{0.9999}, 4.0, 0.5756462732485114)};
    c.archs.field_hidden = {40};
    c.samples.interior = 1600;
    c.samples.initial = 400;
    c.train.max_epochs = 20000;
    c.train.lr = 8e-3;
    c.train.adapt_lr = true;
    c.train.history_every = 100;
    finish(c);
    out.push_back({c.name, "single-network baseline opening a rarefaction", c});
  }
  {
    // Decreasing variant of the same data: the baseline smears the forming
    // shock into a viscous profile.
    RunConfig c = base_burgers("pinn-viscous-shock", -3.0, 3.0, 0.65);
    c.mode = RunMode::kDirectPinn;
    c.problem.initial.profiles = {
        Profile::tanh_ramp(StateVec{0.9999}, StateVec{-0.9999}, 4.0, 0.5756462732485114)};
    c.archs.field_hidden = {40};
    c.samples.interior = 1600;
    c.samples.initial = 400;
    c.train.max_epochs = 20000;
    c.train.lr = 8e-3;
    c.train.adapt_lr = true;
    c.train.history_every = 100;
    finish(c);
    out.push_back({c.name, "single-network baseline smearing a forming shock", c});
  }
  {
    // Schwarz sweeps over three subdomains: shock, fan, shock with slower
    // dynamics, far from any interaction.
    RunConfig c = base_burgers("ddm-three-subdomains", -1.0, 2.0, 1.0);
    c.mode = RunMode::kDdm;
    c.problem.initial.breakpoints = {0.0, 1.0};
    c.problem.initial.profiles = {Profile::constant(StateVec{1.0}),
                                  Profile::affine(StateVec{2.0}, StateVec{0.0}),
                                  Profile::constant(StateVec{0.0})};
    c.archs.field_hidden = {30};
    c.samples.interior = 900;
    c.samples.initial = 300;
    c.train.max_epochs = 400;  // inner budget per subdomain per sweep
    c.train.lr = 8e-3;
    c.train.adapt_lr = true;
    c.train.history_every = 100;
    c.ddm.max_sweeps = 50;
    c.ddm.tol = 1e-3;
    finish(c);
    out.push_back({c.name, "Schwarz iteration over three subdomains", c});
  }
  {
    // Colliding shallow-water streams: symmetric two-shock fan, star depth
    // from the intersection of the two wave curves.
    RunConfig c;
    c.name = "sw-colliding";
    c.out_dir = "out/sw-colliding";
    c.mode = RunMode::kRiemannDecompose;
    c.problem.flux = FluxModel::shallow_water(1.0);
    c.problem.domain = {-0.1, 0.1};
    c.problem.final_time = 0.0025;
    c.problem.initial.breakpoints = {0.0};
    c.problem.initial.profiles = {Profile::constant(StateVec{3.0, 5.0}),
                                  Profile::constant(StateVec{3.0, -5.0})};
    c.problem.wave_counts = {2};
    c.riemann.kinds = {"shock", "shock"};
    c.riemann.decompose.hidden = {5, 5};
    c.riemann.decompose.fit.points = 150;
    c.riemann.decompose.fit.epochs = 40000;
    c.riemann.decompose.fit.lr = 2e-2;
    finish(c);
    out.push_back({c.name, "two-shock shallow-water fan from colliding streams", c});
  }
  {
    // Asymmetric shallow-water pair: 1-shock and 2-rarefaction. The two
    // curve parameters must relax independently here; a shared parameter
    // cannot reach the star on both curves.
    RunConfig c;
    c.name = "sw-mixed";
    c.out_dir = "out/sw-mixed";
    c.mode = RunMode::kRiemannDecompose;
    c.problem.flux = FluxModel::shallow_water(1.0);
    c.problem.domain = {-0.1, 0.1};
    c.problem.final_time = 0.0025;
    c.problem.initial.breakpoints = {0.0};
    c.problem.initial.profiles = {Profile::constant(StateVec{5.0, 3.0}),
                                  Profile::constant(StateVec{8.0, 2.5})};
    c.problem.wave_counts = {2};
    c.riemann.kinds = {"shock", "rarefaction"};
    c.riemann.decompose.hidden = {5, 5};
    c.riemann.decompose.fit.points = 150;
    c.riemann.decompose.fit.epochs = 40000;
    c.riemann.decompose.fit.lr = 2e-2;
    c.riemann.decompose.shared_xi = false;
    finish(c);
    out.push_back({c.name, "shallow-water 1-shock / 2-rarefaction decomposition", c});
  }
  {
    // Space-time evolution of the colliding-streams problem: the wave fan
    // from the decomposition seeds two lines and the wedge field.
    RunConfig c;
    c.name = "sw-two-shock-ndnn";
    c.out_dir = "out/sw-two-shock-ndnn";
    c.mode = RunMode::kNdnn;
    c.problem.flux = FluxModel::shallow_water(1.0);
    c.problem.domain = {-0.1, 0.1};
    c.problem.final_time = 0.0025;
    c.problem.initial.breakpoints = {0.0};
    c.problem.initial.profiles = {Profile::constant(StateVec{3.0, 5.0}),
                                  Profile::constant(StateVec{3.0, -5.0})};
    c.problem.wave_counts = {2};
    c.riemann.kinds = {"shock", "shock"};
    c.riemann.decompose.hidden = {5, 5};
    c.riemann.decompose.fit.points = 150;
    c.riemann.decompose.fit.epochs = 40000;
    c.riemann.decompose.fit.lr = 2e-2;
    c.archs.field_hidden = {4, 4};
    c.samples.interior = 500;
    c.samples.cone = 400;
    c.train.max_epochs = 20000;
    c.train.lr = 1e-3;
    c.train.adapt_lr = true;
    c.train.history_every = 100;
    finish(c);
    out.push_back({c.name, "shallow-water two-shock evolution from a decomposed fan", c});
  }
  {
    // Four-state compressible gas problem on a short horizon; one line per
    // initial jump.
    RunConfig c;
    c.name = "euler-four-state";
    c.out_dir = "out/euler-four-state";
    c.mode = RunMode::kNdnn;
    c.problem.flux = FluxModel::euler(1.4);
    c.problem.domain = {0.0, 2.0};
    c.problem.final_time = 0.001;
    c.problem.initial.breakpoints = {0.95, 1.0, 1.05};
    c.problem.initial.profiles = {Profile::constant(StateVec{0.01, 21.0, 25632.0}),
                                  Profile::constant(StateVec{0.06, 15.0, 119000.0}),
                                  Profile::constant(StateVec{0.235, 60.0, 125000.0}),
                                  Profile::constant(StateVec{0.14, 0.0, 55750.0})};
    c.problem.wave_counts = {1, 1, 1};
    c.archs.field_hidden = {30};
    c.samples.interior = 900;
    c.samples.initial = 300;
    c.train.max_epochs = 5000;
    c.train.lr = 1e-12;
    c.train.adapt_lr = true;
    c.train.max_halvings = 30;
    c.train.history_every = 100;
    finish(c);
    out.push_back({c.name, "four-state gas dynamics with three tracked lines", c});
  }
  return out;
}

}  // namespace

const std::vector<BundledExperiment>& bundled_experiments() {
  static const std::vector<BundledExperiment> list = make_bundled();
  return list;
}

RunConfig bundled_config(const std::string& name) {
  for (const BundledExperiment& b : bundled_experiments())
    if (b.name == name) return b.cfg;
  std::string known;
  for (const BundledExperiment& b : bundled_experiments()) {
    if (!known.empty()) known += ", ";
    known += b.name;
  }
  throw ConfigError("unknown experiment '" + name + "' (known: " + known + ")");
}

}  // namespace shocktrack
