#include "automala/phase.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace automala {

DiagonalMass::DiagonalMass(Vector inv_sqrt_scale) : inv_sqrt_scale_(std::move(inv_sqrt_scale)) {
  if (inv_sqrt_scale_.size() < 1) throw UsageError("mass matrix must have dimension >= 1");
  for (Eigen::Index i = 0; i < inv_sqrt_scale_.size(); ++i) {
    const double s = inv_sqrt_scale_[i];
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw UsageError("mass matrix entries must be positive and finite (entry " + std::to_string(i) +
                       " = " + format_double(s) + ")");
    }
  }
  inverse_mass_ = inv_sqrt_scale_.array().square().inverse();
  if (!inverse_mass_.allFinite()) throw UsageError("mass matrix entries too small to invert");
}

double DiagonalMass::kinetic_energy(const Vector& p) const {
  return 0.5 * (p.array().square() * inverse_mass_.array()).sum();
}

TargetPoint evaluate_point(const TargetDensity& target, Vector x) {
  if (x.size() != target.dimension()) {
    throw UsageError("point of dimension " + std::to_string(x.size()) + " for a target of dimension " +
                     std::to_string(target.dimension()));
  }
  if (!x.allFinite()) throw UsageError("point has a non-finite coordinate");
  Evaluation eval = target.evaluate(x);
  if (!eval.in_support()) throw UsageError(target.name() + ": starting point outside the support");
  return {std::move(x), std::move(eval)};
}

Vector sample_momentum(const DiagonalMass& mass, Rng& rng) {
  Vector p(mass.dimension());
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = mass.inv_sqrt_scale()[i] * rng.normal();
  return p;
}

Thresholds sample_thresholds(Rng& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return {std::min(u1, u2), std::max(u1, u2)};
}

LeapfrogEnd leapfrog_step(const TargetDensity& target, const DiagonalMass& mass,
                          const Vector& x, const Vector& grad_x, const Vector& p, double eps) {
  const double half = 0.5 * eps;
  const Vector p_half = p + half * grad_x;
  LeapfrogEnd end;
  end.x = x + eps * (mass.inverse_mass().array() * p_half.array()).matrix();
  end.eval = target.evaluate(end.x);
  if (end.eval.in_support()) {
    end.p = -(p_half + half * end.eval.gradient);
  } else {
    end.p = -p_half;
  }
  return end;
}

PhasePoint leapfrog(const TargetDensity& target, const DiagonalMass& mass,
                    const Vector& x, const Vector& p, double eps) {
  if (!(eps > 0.0)) throw UsageError("leapfrog step size must be positive");
  if (p.size() != x.size() || mass.dimension() != x.size()) {
    throw UsageError("leapfrog: position, momentum and mass dimensions differ");
  }
  const Vector grad = target.grad_log_density(x);
  LeapfrogEnd end = leapfrog_step(target, mass, x, grad, p, eps);
  if (!end.in_support()) {
    throw DomainError(target.name() + ": leapfrog end point outside the support");
  }
  if (!end.p.allFinite()) throw DomainError(target.name() + ": leapfrog momentum overflowed");
  return {std::move(end.x), std::move(end.p)};
}

double joint_log_density(double log_density, const DiagonalMass& mass, const Vector& p) {
  if (log_density == kNegInf) return kNegInf;
  const double kinetic = mass.kinetic_energy(p);
  if (!std::isfinite(kinetic)) return kNegInf;
  return log_density - kinetic;
}

double joint_log_density(const TargetDensity& target, const DiagonalMass& mass,
                         const Vector& x, const Vector& p) {
  if (p.size() != x.size() || mass.dimension() != x.size()) {
    throw UsageError("joint density: position, momentum and mass dimensions differ");
  }
  if (!p.allFinite()) throw UsageError("joint density: momentum has a non-finite coordinate");
  return joint_log_density(target.log_density(x), mass, p);
}

}  // namespace automala
