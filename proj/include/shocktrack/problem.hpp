#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "shocktrack/errors.hpp"
#include "shocktrack/flux.hpp"
#include "shocktrack/small_vec.hpp"

namespace shocktrack {

// One per-interval piece of the initial data. Declarative kinds (constant,
// affine, tanh ramp) serialize to JSON; kCallable wraps an arbitrary sampled
// closure and exists for re-decomposition, where the new initial data is the
// previous model evaluated at the interaction time. Callable profiles do not
// serialize.
struct Profile {
  enum class Kind { kConst, kAffine, kTanh, kCallable };
  Kind kind = Kind::kConst;

  StateVec value;      // kConst
  StateVec slope;      // kAffine: slope*x + intercept
  StateVec intercept;
  StateVec base;       // kTanh: base + amp * tanh(sharpness*(x - center))
  StateVec amp;
  double sharpness = 1.0;
  double center = 0.0;
  std::function<StateVec(double)> fn;  // kCallable

  StateVec eval(double x) const {
    switch (kind) {
      case Kind::kConst:
        return value;
      case Kind::kAffine: {
        StateVec r(slope.size());
        for (std::size_t i = 0; i < slope.size(); ++i) r[i] = slope[i] * x + intercept[i];
        return r;
      }
      case Kind::kTanh: {
        StateVec r(base.size());
        const double s = std::tanh(sharpness * (x - center));
        for (std::size_t i = 0; i < base.size(); ++i) r[i] = base[i] + amp[i] * s;
        return r;
      }
      case Kind::kCallable:
        return fn(x);
    }
    throw ConfigError("unknown profile kind");
  }

  int components() const {
    switch (kind) {
      case Kind::kConst: return int(value.size());
      case Kind::kAffine: return int(slope.size());
      case Kind::kTanh: return int(base.size());
      case Kind::kCallable: return fn ? int(fn(0.0).size()) : 0;
    }
    return 0;
  }

  static Profile constant(StateVec v) {
    Profile p;
    p.kind = Kind::kConst;
    p.value = v;
    return p;
  }
  static Profile affine(StateVec a, StateVec b) {
    Profile p;
    p.kind = Kind::kAffine;
    p.slope = a;
    p.intercept = b;
    return p;
  }
  static Profile tanh_ramp(StateVec base, StateVec amp, double sharpness, double center) {
    Profile p;
    p.kind = Kind::kTanh;
    p.base = base;
    p.amp = amp;
    p.sharpness = sharpness;
    p.center = center;
    return p;
  }
  static Profile callable(std::function<StateVec(double)> f) {
    Profile p;
    p.kind = Kind::kCallable;
    p.fn = std::move(f);
    return p;
  }
};

// Piecewise initial data on (a, b): strictly increasing interior breakpoints
// and one profile per interval. Boundary states are stored explicitly; they
// feed incoming-characteristic boundary terms and Schwarz edge neighbors.
struct InitialData {
  std::vector<double> breakpoints;
  std::vector<Profile> profiles;
  StateVec left_state;
  StateVec right_state;
};

struct Domain {
  double a = 0.0;
  double b = 1.0;
};

struct ProblemSpec {
  FluxModel flux;
  Domain domain;
  double final_time = 1.0;
  InitialData initial;
  // Waves per breakpoint: 1 for scalar problems, up to m after a Riemann
  // decomposition seeds multiple lines from one breakpoint.
  std::vector<int> wave_counts;
  // Positions of artificial lines: trainable lines seeded inside smooth data
  // where a shock is expected to form. They carry no jump at t = 0 and must
  // not coincide with breakpoints.
  std::vector<double> artificial;

  void validate() const;
};

// Initial data evaluated at x in [a, b]. At an interior breakpoint the value
// of the interval to the LEFT is returned. Outside the domain: DomainError.
StateVec eval_initial(const ProblemSpec& spec, double x);

// Total variation of the initial data, summed over components, approximated
// on a fine grid. Sets the default shock-generation tolerance.
double initial_total_variation(const ProblemSpec& spec);

}  // namespace shocktrack
