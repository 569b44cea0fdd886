#pragma once

#include <optional>

#include "shocktrack/geometry.hpp"

namespace shocktrack {

// Shock generation (an artificial line acquiring a jump) and shock
// interaction (two lines meeting). Times are local to the layout.
enum class EventKind { kGeneration, kInteraction };

struct EventReport {
  EventKind kind = EventKind::kGeneration;
  double t = 0.0;
  double x = 0.0;
  int line_a = -1;  // chain index; the only line for generation events
  int line_b = -1;  // right line of an interacting pair
  double confidence = 0.0;  // jump (generation) or overlap gap (interaction)
  int extra_crossings = 0;  // later sign changes beyond the reported one
};

// Cross-line jump N+ - N- of the trained fields at (n(tau), tau).
StateVec solution_jump(const SubdomainLayout& layout, int chain_line, double tau);

// f(N+) - f(N-) at the line.
StateVec flux_jump(const SubdomainLayout& layout, int chain_line, double tau);

// Default generation threshold: 1% of the initial data's total variation.
double generation_tolerance(const ProblemSpec& spec);

// Last time the cross-line jump stays within jump_tol, scanned on a
// 1000-point grid and refined by bisection. nullopt when the jump never
// exceeds the tolerance (no shock forms by the final time); t = 0 when the
// jump is present from the start.
std::optional<EventReport> detect_generation(const SubdomainLayout& layout, int chain_line,
                                             double jump_tol);

// First crossing time of chain lines (i-1, i), found by sign change of their
// gap and bisection; nullopt when they never meet.
std::optional<EventReport> detect_interaction(const SubdomainLayout& layout, int chain_line);

// New problem on [t*, T]: the two reported lines merge into one pinned at
// x*, the vanished subdomain disappears, and the initial data becomes the
// old model evaluated just before t*. Networks start fresh.
SubdomainLayout redecompose(const SubdomainLayout& layout, const EventReport& report,
                            const LayoutArchitectures& archs, std::uint64_t seed);

enum class LaxClass { kEntropic, kContact, kViolated };

// Lax admissibility of a discontinuity with the given traces and speed.
// Scalar: f'(u-) > s > f'(u+). Systems, family k: lambda_k(u-) > s >
// lambda_k(u+) with lambda_{k-1}(u-) < s < lambda_{k+1}(u+). Equality of
// both k-speeds within 1e-6 * scale classifies as a contact; the strict
// inequalities carry the same slack so borderline shocks are not rejected.
LaxClass check_lax_states(const FluxModel& flux, const StateVec& ul, const StateVec& ur,
                          double speed, int family);

LaxClass check_lax(const SubdomainLayout& layout, int chain_line, double tau);

}  // namespace shocktrack
