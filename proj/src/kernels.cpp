#include "automala/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace automala {

namespace {

double alpha_from_log_ratio(double log_ratio) {
  if (log_ratio == kNegInf) return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

}  // namespace

AutoMalaProposal automala_proposal(const TargetDensity& target, const DiagonalMass& mass,
                                   const TargetPoint& current, const Vector& p, Thresholds thresholds,
                                   double eps_init) {
  AutoMalaProposal out;
  const AugmentedState s{current.x, p, thresholds};
  out.forward = select_step_size(target, mass, s, current.eval, eps_init);

  const LeapfrogEnd& end = out.forward.proposal;
  const AugmentedState s_prime{end.x, end.p, thresholds};
  out.reverse = select_step_size(target, mass, s_prime, end.eval, eps_init);

  const double log_ratio = joint_log_density(end.eval.log_density, mass, end.p) -
                           joint_log_density(current.eval.log_density, mass, p);
  out.alpha = alpha_from_log_ratio(log_ratio);
  out.reversibility_ok = reversibility_check(out.forward, out.reverse);
  return out;
}

StepResult automala_step(const TargetDensity& target, const DiagonalMass& mass,
                         const TargetPoint& current, double eps_init, bool unadjusted, Rng& rng) {
  const Vector p = sample_momentum(mass, rng);
  const Thresholds thresholds = sample_thresholds(rng);
  AutoMalaProposal prop = automala_proposal(target, mass, current, p, thresholds, eps_init);
  const double u = rng.uniform();

  StepResult r;
  r.reversibility_ok = prop.reversibility_ok;
  r.eps_forward = prop.forward.eps;
  r.eps_reverse = prop.reverse.eps;
  r.j_forward = prop.forward.j;
  r.j_reverse = prop.reverse.j;
  r.eps_t = 0.5 * (r.eps_forward + r.eps_reverse);
  r.alpha = prop.alpha;
  r.n_leapfrog = prop.forward.n_leapfrog + prop.reverse.n_leapfrog;
  r.accepted = unadjusted || (prop.reversibility_ok && u <= prop.alpha);
  if (r.accepted) {
    r.next = TargetPoint{std::move(prop.forward.proposal.x), std::move(prop.forward.proposal.eval)};
  } else {
    r.next = current;
  }
  return r;
}

StepResult automala_step(const TargetDensity& target, const DiagonalMass& mass,
                         const Vector& x, double eps_init, bool unadjusted, Rng& rng) {
  return automala_step(target, mass, evaluate_point(target, x), eps_init, unadjusted, rng);
}

StepResult mala_step(const TargetDensity& target, const DiagonalMass& mass,
                     const TargetPoint& current, double eps, Rng& rng) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw UsageError("MALA step size must be positive and finite");
  const Vector p = sample_momentum(mass, rng);
  LeapfrogEnd end = leapfrog_step(target, mass, current.x, current.eval.gradient, p, eps);
  const double u = rng.uniform();

  StepResult r;
  r.eps_forward = r.eps_reverse = r.eps_t = eps;
  r.n_leapfrog = 1;
  if (end.in_support()) {
    r.alpha = alpha_from_log_ratio(joint_log_density(end.eval.log_density, mass, end.p) -
                                   joint_log_density(current.eval.log_density, mass, p));
  }
  r.accepted = end.in_support() && u <= r.alpha;
  if (r.accepted) {
    r.next = TargetPoint{std::move(end.x), std::move(end.eval)};
  } else {
    r.next = current;
  }
  return r;
}

StepResult mala_step(const TargetDensity& target, const DiagonalMass& mass,
                     const Vector& x, double eps, Rng& rng) {
  return mala_step(target, mass, evaluate_point(target, x), eps, rng);
}

Vector ula_step(const TargetDensity& target, const DiagonalMass& mass, const Vector& x, double h, Rng& rng) {
  if (!(h > 0.0) || !std::isfinite(h)) throw UsageError("ULA step size must be positive and finite");
  const Vector grad = target.grad_log_density(x);
  const Vector& c = mass.inverse_mass();
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = x[i] + 0.5 * h * c[i] * grad[i] + std::sqrt(h * c[i]) * rng.normal();
  }
  return out;
}

double acceptance_ratio(const TargetDensity& target, const DiagonalMass& mass,
                        const AugmentedState& s, const AugmentedState& s_prime) {
  const double from = joint_log_density(target, mass, s.x, s.p);
  if (!std::isfinite(from)) throw UsageError("acceptance ratio needs a finite joint density at s");
  if (s_prime.x.size() != s.x.size() || !s_prime.x.allFinite() || !s_prime.p.allFinite()) {
    if (s_prime.x.size() != s.x.size()) throw UsageError("acceptance ratio: dimension mismatch");
    return 0.0;
  }
  return alpha_from_log_ratio(joint_log_density(target, mass, s_prime.x, s_prime.p) - from);
}

}  // namespace automala
