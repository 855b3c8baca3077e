#pragma once

#include "automala/phase.hpp"

namespace automala {

/// Cap on |j|. Hitting it means the search would not terminate on this state
/// (zero momentum on a flat region, a density plateau, ...).
inline constexpr int kMaxExponent = 60;

/// Result of one step-size search.
struct StepSizeDecision {
  double eps = 0.0;   // eps_init * 2^j, exact
  int j = 0;          // net doublings; negative for halvings
  int n_leapfrog = 0; // leapfrog evaluations consumed by the search
  /// L_eps(x, p) at the selected eps; always inside the support.
  LeapfrogEnd proposal;
};

/// +1 when ell >= log b, -1 when ell <= log a, 0 otherwise.
int initial_direction(double ell, double a, double b);

/// eps_init * 2^j by exponent manipulation. Throws TerminationGuardError when
/// |j| exceeds the cap or the result leaves the normal floating-point range.
double step_size_from_exponent(double eps_init, int j, int max_exponent = kMaxExponent);

/// Doubling/halving search for a step size whose log joint-density ratio
/// lands between log a and log b. When the search doubled, the returned step
/// is the last one that still had ell >= log b (the final halving).
StepSizeDecision select_step_size(const TargetDensity& target, const DiagonalMass& mass,
                                  const AugmentedState& s, double eps_init,
                                  int max_exponent = kMaxExponent);

/// Same search from a start whose evaluation is already known. Performs
/// exactly `n_leapfrog` target evaluations.
StepSizeDecision select_step_size(const TargetDensity& target, const DiagonalMass& mass,
                                  const AugmentedState& s, const Evaluation& start, double eps_init,
                                  int max_exponent = kMaxExponent);

/// The reversibility check: forward and reverse searches agree on the
/// integer exponent. Step sizes are never compared as floats.
inline bool reversibility_check(const StepSizeDecision& forward, const StepSizeDecision& reverse) {
  return forward.j == reverse.j;
}

}  // namespace automala
