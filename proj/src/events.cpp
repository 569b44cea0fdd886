#include "shocktrack/events.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "shocktrack/errors.hpp"

namespace shocktrack {

namespace {

void require_interior(const SubdomainLayout& layout, int chain_line) {
  if (chain_line <= 0 || chain_line + 1 >= int(layout.lines.size()) ||
      layout.lines[std::size_t(chain_line)].frozen())
    throw ConfigError("chain line " + std::to_string(chain_line) + " is not an interior line");
}

double norm2(const StateVec& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

StateVec solution_jump(const SubdomainLayout& layout, int chain_line, double tau) {
  require_interior(layout, chain_line);
  const double x = line_position(layout.lines[std::size_t(chain_line)], tau);
  const StateVec lo = eval_field(layout.subs[std::size_t(chain_line - 1)].net, x, tau).value;
  const StateVec hi = eval_field(layout.subs[std::size_t(chain_line)].net, x, tau).value;
  StateVec jump(lo.size());
  for (std::size_t c = 0; c < lo.size(); ++c) jump[c] = hi[c] - lo[c];
  return jump;
}

StateVec flux_jump(const SubdomainLayout& layout, int chain_line, double tau) {
  require_interior(layout, chain_line);
  const double x = line_position(layout.lines[std::size_t(chain_line)], tau);
  const StateVec lo = eval_field(layout.subs[std::size_t(chain_line - 1)].net, x, tau).value;
  const StateVec hi = eval_field(layout.subs[std::size_t(chain_line)].net, x, tau).value;
  const auto flo = flux_eval(layout.problem.flux, lo);
  const auto fhi = flux_eval(layout.problem.flux, hi);
  StateVec jump(lo.size());
  for (std::size_t c = 0; c < lo.size(); ++c) jump[c] = fhi[c] - flo[c];
  return jump;
}

double generation_tolerance(const ProblemSpec& spec) {
  return 0.01 * initial_total_variation(spec);
}

std::optional<EventReport> detect_generation(const SubdomainLayout& layout, int chain_line,
                                             double jump_tol) {
  require_interior(layout, chain_line);
  constexpr int kGrid = 1000;
  const auto jump_at = [&](double tau) {
    return norm2(solution_jump(layout, chain_line, tau));
  };
  // last grid index whose jump is still within tolerance
  int last_ok = -1;
  double after = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double tau = layout.duration * double(i) / kGrid;
    const double j = jump_at(tau);
    if (j <= jump_tol) last_ok = i;
  }
  if (last_ok == kGrid) return std::nullopt;  // never exceeds by the final time

  EventReport ev;
  ev.kind = EventKind::kGeneration;
  ev.line_a = chain_line;
  if (last_ok < 0) {
    // jump present from the start: the line was physical all along
    ev.t = 0.0;
    after = jump_at(0.0);
  } else {
    double lo = layout.duration * double(last_ok) / kGrid;
    double hi = layout.duration * double(last_ok + 1) / kGrid;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (jump_at(mid) <= jump_tol)
        lo = mid;
      else
        hi = mid;
    }
    ev.t = 0.5 * (lo + hi);
    after = jump_at(hi);
  }
  ev.x = line_position(layout.lines[std::size_t(chain_line)], ev.t);
  ev.confidence = after;
  return ev;
}

std::optional<EventReport> detect_interaction(const SubdomainLayout& layout, int chain_line) {
  require_interior(layout, chain_line);
  require_interior(layout, chain_line - 1);
  const DiscontinuityLine& left = layout.lines[std::size_t(chain_line - 1)];
  const DiscontinuityLine& right = layout.lines[std::size_t(chain_line)];
  const auto gap = [&](double tau) {
    return line_position(right, tau) - line_position(left, tau);
  };
  constexpr int kGrid = 1000;
  int first_hit = -1;
  int crossings = 0;
  double prev = gap(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double g = gap(layout.duration * double(i) / kGrid);
    if (prev > 0.0 && g <= 0.0) {
      ++crossings;
      if (first_hit < 0) first_hit = i;
    }
    prev = g;
  }
  if (first_hit < 0) return std::nullopt;

  double lo = layout.duration * double(first_hit - 1) / kGrid;
  double hi = layout.duration * double(first_hit) / kGrid;
  for (int it = 0; it < 100 && hi - lo > 1e-14 * std::max(1.0, layout.duration); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  EventReport ev;
  ev.kind = EventKind::kInteraction;
  ev.t = 0.5 * (lo + hi);
  ev.x = 0.5 * (line_position(left, ev.t) + line_position(right, ev.t));
  ev.line_a = chain_line - 1;
  ev.line_b = chain_line;
  ev.confidence = std::fabs(gap(layout.duration * double(first_hit) / kGrid));
  ev.extra_crossings = crossings - 1;
  return ev;
}

SubdomainLayout redecompose(const SubdomainLayout& layout, const EventReport& report,
                            const LayoutArchitectures& archs, std::uint64_t seed) {
  if (report.kind != EventKind::kInteraction)
    throw DecompositionError("redecompose needs an interaction report");
  require_interior(layout, report.line_a);
  require_interior(layout, report.line_b);
  if (report.line_b != report.line_a + 1)
    throw DecompositionError("interacting lines must be adjacent in the chain");
  for (int w : layout.problem.wave_counts)
    if (w != 1)
      throw DecompositionError("re-decomposition is implemented for single-wave groups only");
  const double remaining = layout.duration - report.t;
  if (remaining <= 1e-12) throw DecompositionError("interaction at the final time");

  // Sample the old model just before the collision, where every subdomain
  // still has finite width.
  const double teval = std::max(0.0, report.t - 1e-6 * layout.duration);
  auto old = std::make_shared<const SubdomainLayout>(layout);

  ProblemSpec next = layout.problem;
  next.final_time = remaining;
  next.initial.breakpoints.clear();
  next.initial.profiles.clear();
  // Every surviving line becomes a breakpoint of the new stage, artificial
  // ones included; they are physical by interaction time.
  next.artificial.clear();
  for (std::size_t li = 0; li < layout.lines.size(); ++li) {
    if (layout.lines[li].frozen()) continue;
    if (int(li) == report.line_a || int(li) == report.line_b) continue;
    next.initial.breakpoints.push_back(line_position(layout.lines[li], teval));
  }
  next.initial.breakpoints.push_back(report.x);
  std::sort(next.initial.breakpoints.begin(), next.initial.breakpoints.end());
  for (std::size_t i = 0; i + 1 < next.initial.breakpoints.size(); ++i)
    if (next.initial.breakpoints[i + 1] - next.initial.breakpoints[i] < 1e-9)
      throw DecompositionError("two discontinuities coincide at the interaction time");

  const Profile sampled = Profile::callable(
      [old, teval](double x) { return reconstruct(*old, x, teval); });
  next.initial.profiles.assign(next.initial.breakpoints.size() + 1, sampled);
  next.wave_counts.assign(next.initial.breakpoints.size(), 1);

  SubdomainLayout out = make_layout(next, archs, seed);
  out.t0 = layout.t0 + report.t;
  return out;
}

LaxClass check_lax_states(const FluxModel& flux, const StateVec& ul, const StateVec& ur,
                          double speed, int family) {
  if (flux.scalar()) {
    const double lm = scalar_flux_prime(flux, ul[0]);
    const double lp = scalar_flux_prime(flux, ur[0]);
    const double tol = 1e-6 * std::max({1.0, std::fabs(lm), std::fabs(lp)});
    if (std::fabs(lm - speed) <= tol && std::fabs(lp - speed) <= tol) return LaxClass::kContact;
    if (lm >= speed - tol && speed >= lp - tol) return LaxClass::kEntropic;
    return LaxClass::kViolated;
  }
  const EigenPairs el = eval_eigen(flux, ul);
  const EigenPairs er = eval_eigen(flux, ur);
  const int k = family - 1;
  const double lm = el.lambda[std::size_t(k)];
  const double lp = er.lambda[std::size_t(k)];
  const double tol = 1e-6 * std::max({1.0, std::fabs(lm), std::fabs(lp)});
  if (std::fabs(lm - speed) <= tol && std::fabs(lp - speed) <= tol) return LaxClass::kContact;
  bool ok = lm >= speed - tol && speed >= lp - tol;
  if (k - 1 >= 0) ok = ok && el.lambda[std::size_t(k - 1)] <= speed + tol;
  if (k + 1 < el.m) ok = ok && er.lambda[std::size_t(k + 1)] >= speed - tol;
  return ok ? LaxClass::kEntropic : LaxClass::kViolated;
}

LaxClass check_lax(const SubdomainLayout& layout, int chain_line, double tau) {
  require_interior(layout, chain_line);
  const DiscontinuityLine& line = layout.lines[std::size_t(chain_line)];
  const double x = line_position(line, tau);
  const double s = line_speed(line, tau);
  const StateVec ul = eval_field(layout.subs[std::size_t(chain_line - 1)].net, x, tau).value;
  const StateVec ur = eval_field(layout.subs[std::size_t(chain_line)].net, x, tau).value;
  return check_lax_states(layout.problem.flux, ul, ur, s, line.family);
}

}  // namespace shocktrack
