#pragma once

#include <array>
#include <optional>

#include "shocktrack/train.hpp"

namespace shocktrack {

enum class WaveKind { kShock, kRarefaction, kContact };

struct Wave {
  WaveKind kind = WaveKind::kShock;
  int family = 1;
  double speed = 0.0;       // shock/contact speed; rarefaction head (left edge)
  double tail_speed = 0.0;  // rarefaction tail; equals speed otherwise
};

// Phase-space curve of states reachable from the anchor through a single
// family-k wave, approximated by the integral curve of the unit eigenvector
// field: curve(xi) = anchor + (xi - xi0) * net((xi - xi0)/xi_scale). The
// anchor value at xi = xi0 is exact by construction, xi measures arc length,
// and the scaled net input keeps tanh units in range on long intervals.
// Rarefaction curves are the same point sets with the parameter offset to
// the anchor's characteristic speed.
struct WaveCurve {
  int family = 1;
  WaveKind kind = WaveKind::kShock;
  int direction = +1;  // +1: follow +r (density-like component grows)
  StateVec anchor;
  double xi0 = 0.0;
  double xi_lo = 0.0, xi_hi = 1.0;
  double xi_scale = 1.0;
  MlpParams net;
};

// Wave fan of a Riemann problem: left state, right state, the intermediate
// (star) states between consecutive waves, and the waves themselves. The
// neural decompositions also return their fitted curves (for export); exact
// solvers leave `curves` empty.
struct Decomposition {
  StateVec left, right;
  std::vector<StateVec> stars;
  std::vector<Wave> waves;
  std::vector<WaveCurve> curves;
};

StateVec curve_eval(const WaveCurve& c, double xi);
StateVec curve_deriv(const WaveCurve& c, double xi);

// Untrained anchored curve over [xi0, xi0 + span]; for rarefactions xi0 is
// the anchor's family-k characteristic speed, for shocks 0. The default
// direction follows compression: +r for shocks/contacts, -r for
// rarefactions.
WaveCurve make_curve(const FluxModel& flux, const StateVec& anchor, int family, WaveKind kind,
                     double span, const std::vector<int>& hidden, std::uint64_t seed);

// Default parameter span: twice the phase-space distance of the data.
double default_curve_span(const StateVec& ul, const StateVec& ur);

struct CurveFitConfig {
  long epochs = 4000;
  double lr = 2e-3;
  int points = 150;
  std::uint64_t seed = 1;
  int max_curtails = 4;
};

struct CurveFitReport {
  std::vector<EpochRecord> history;
  double final_defect = 0.0;
  double xi_hi_used = 0.0;
  int curtails = 0;  // interval shrinks after admissibility/divergence failures
};

// Minimizes the mean squared integral-curve defect
// |curve'(xi) - direction * r_k(curve(xi))|^2 on fixed samples of
// [xi_lo, xi_hi]. A diverging fit (typically the state leaving the
// admissible set) curtails the interval and retries from the initial
// parameters.
CurveFitReport fit_curve(const FluxModel& flux, WaveCurve& curve, const CurveFitConfig& cfg);

struct Intersection {
  double xi1 = 0.0, xi2 = 0.0;
  StateVec state;  // midpoint of the two curve points at the minimizer
  double gap = 0.0;
};

// Minimizer of |c1(xi) - c2(xi)|. With shared_xi both curves are evaluated
// at one common parameter (coarse scan plus golden-section refinement);
// otherwise the parameters relax independently (coarse 2D scan plus
// coordinate descent). Gap above gap_tol: DecompositionError.
Intersection intersect_two(const WaveCurve& c1, const WaveCurve& c2, double gap_tol,
                           bool shared_xi = true);

struct DecomposeConfig {
  CurveFitConfig fit;
  long epochs = 6000;  // middle-curve stage
  double lr = 2e-3;
  double g1 = 1.0, g2 = 10.0, g3 = 10.0;  // defect and endpoint-matching weights
  double match_tol = 5e-2;
  double gap_tol = 5e-2;
  bool shared_xi = true;
  std::vector<int> hidden{5, 5};
  std::uint64_t seed = 7;
};

// Two-wave split (m = 2): outer curves from u_L (family 1) and u_R
// (family 2), star state from their intersection.
Decomposition decompose_two(const FluxModel& flux, const StateVec& ul, const StateVec& ur,
                            const std::array<WaveKind, 2>& kinds, const DecomposeConfig& cfg);

// Three-wave split (m = 3): outer curves from u_L (family 1) and u_R
// (family 3) are fitted and frozen; a free middle curve trains against the
// weighted loss g1 * defect + g2 * |v2(0) - v1(xi1)|^2 + g3 * |v2(xi2) -
// v3(xi3)|^2 with xi1, xi2, xi3 as trainable scalars. Star states are v2(0)
// and v2(xi2). Endpoint residuals above match_tol: DecompositionError.
Decomposition decompose_three(const FluxModel& flux, const StateVec& ul, const StateVec& ur,
                              const std::array<WaveKind, 3>& kinds, const DecomposeConfig& cfg);

// Classical exact solvers, used as oracles: scalar single wave by
// characteristic comparison, shallow water and Euler by Newton iteration on
// the star depth/pressure to residual 1e-12. VacuumError when no positive
// star exists.
Decomposition exact_riemann(const FluxModel& flux, const StateVec& ul, const StateVec& ur);

// Speeds consistent with the curve construction: every wave's speed is the
// family eigenvalue at the adjacent star state. Classification falls out of
// the eigenvalue ordering across the wave.
Wave classify_wave(const FluxModel& flux, const StateVec& before, const StateVec& after,
                   int family);

// Replace a two-state problem's single breakpoint by the decomposition's
// wave fan: one anchored line per wave and cone subdomains between them.
// Line networks are nudged toward the wave speeds, wedge fields toward the
// star states.
SubdomainLayout handoff(const Decomposition& dec, const ProblemSpec& spec,
                        const LayoutArchitectures& archs, std::uint64_t seed);

}  // namespace shocktrack
