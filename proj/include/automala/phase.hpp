#pragma once

#include "automala/core.hpp"
#include "automala/rng.hpp"
#include "automala/targets.hpp"

namespace automala {

/// Diagonal mass matrix stored through its momentum standard deviations.
///
/// `inv_sqrt_scale()[i]` is the momentum standard deviation of coordinate i,
/// so M_ii = s_i^2 and the drift uses (M^-1)_ii = s_i^-2.
class DiagonalMass {
 public:
  explicit DiagonalMass(Vector inv_sqrt_scale);
  static DiagonalMass identity(Eigen::Index d) { return DiagonalMass(Vector::Ones(d)); }

  Eigen::Index dimension() const { return inv_sqrt_scale_.size(); }
  const Vector& inv_sqrt_scale() const { return inv_sqrt_scale_; }
  const Vector& inverse_mass() const { return inverse_mass_; }

  /// 1/2 p^T M^-1 p
  double kinetic_energy(const Vector& p) const;

 private:
  Vector inv_sqrt_scale_;
  Vector inverse_mass_;
};

struct Thresholds {
  double a = 0.0;
  double b = 1.0;
};

/// The state s = (x, p, a, b) on which the step-size selector operates.
struct AugmentedState {
  Vector x;
  Vector p;
  Thresholds thresholds;
};

/// A position together with its cached evaluation.
struct TargetPoint {
  Vector x;
  Evaluation eval;
};

/// Evaluates x; throws UsageError unless x lies in the support.
TargetPoint evaluate_point(const TargetDensity& target, Vector x);

Vector sample_momentum(const DiagonalMass& mass, Rng& rng);

/// Order statistics of two uniforms, so 0 < a < b < 1.
Thresholds sample_thresholds(Rng& rng);

struct PhasePoint {
  Vector x;
  Vector p;
};

/// End of one leapfrog-with-flip step. When the drifted position leaves the
/// support (or its gradient is undefined) `eval` is out of support and `p`
/// is meaningless; callers treat the log ratio as -inf.
struct LeapfrogEnd {
  Vector x;
  Vector p;
  Evaluation eval;

  bool in_support() const { return eval.in_support(); }
};

/// One leapfrog step from an already evaluated start. Performs exactly one
/// target evaluation, at the drifted position.
LeapfrogEnd leapfrog_step(const TargetDensity& target, const DiagonalMass& mass,
                          const Vector& x, const Vector& grad_x, const Vector& p, double eps);

/// The involution L_eps: half kick, drift, half kick, momentum flip.
/// Throws DomainError if the gradient is undefined at x or at the end point,
/// or if the end momentum overflows.
PhasePoint leapfrog(const TargetDensity& target, const DiagonalMass& mass,
                    const Vector& x, const Vector& p, double eps);

/// log gamma(x) - 1/2 p^T M^-1 p. The momentum normalizer and the threshold
/// indicator are omitted; both cancel in every ratio taken under one mass.
double joint_log_density(const TargetDensity& target, const DiagonalMass& mass,
                         const Vector& x, const Vector& p);

/// Same, from a cached log density. Returns -inf for non-finite kinetic energy.
double joint_log_density(double log_density, const DiagonalMass& mass, const Vector& p);

}  // namespace automala
