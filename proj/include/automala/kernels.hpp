#pragma once

#include "automala/selector.hpp"

namespace automala {

/// One transition of any of the kernels below.
struct StepResult {
  TargetPoint next;  // equals the previous point bit-for-bit when rejected
  bool accepted = false;
  bool reversibility_ok = true;
  double eps_forward = 0.0;
  double eps_reverse = 0.0;
  int j_forward = 0;
  int j_reverse = 0;
  double eps_t = 0.0;  // (eps_forward + eps_reverse) / 2
  double alpha = 0.0;  // min(1, joint ratio), before the reversibility check
  int n_leapfrog = 0;
};

/// Deterministic part of an autoMALA transition for fixed (p, a, b):
/// forward search, proposal, reverse search from the proposal.
struct AutoMalaProposal {
  StepSizeDecision forward;
  StepSizeDecision reverse;
  double alpha = 0.0;
  bool reversibility_ok = false;
};

AutoMalaProposal automala_proposal(const TargetDensity& target, const DiagonalMass& mass,
                                   const TargetPoint& current, const Vector& p, Thresholds thresholds,
                                   double eps_init);

/// autoMALA transition. Draws p, then (a, b), then U. Unadjusted steps
/// always move to the proposal but still report j, j', alpha and eps_t.
StepResult automala_step(const TargetDensity& target, const DiagonalMass& mass,
                         const TargetPoint& current, double eps_init, bool unadjusted, Rng& rng);

StepResult automala_step(const TargetDensity& target, const DiagonalMass& mass,
                         const Vector& x, double eps_init, bool unadjusted, Rng& rng);

/// MALA written as one leapfrog step of size eps with momentum p ~ N(0, M).
/// Draws p, then U.
StepResult mala_step(const TargetDensity& target, const DiagonalMass& mass,
                     const TargetPoint& current, double eps, Rng& rng);

StepResult mala_step(const TargetDensity& target, const DiagonalMass& mass,
                     const Vector& x, double eps, Rng& rng);

/// Draw from N(x + (h/2) C grad log gamma(x), h C), C = M^-1.
Vector ula_step(const TargetDensity& target, const DiagonalMass& mass, const Vector& x, double h, Rng& rng);

/// min(1, exp(joint(s') - joint(s))); 0 when s' has zero density.
double acceptance_ratio(const TargetDensity& target, const DiagonalMass& mass,
                        const AugmentedState& s, const AugmentedState& s_prime);

}  // namespace automala
