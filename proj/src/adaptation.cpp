#include "automala/adaptation.hpp"

#include <cmath>
#include <utility>

namespace automala {

std::string to_string(PreconditionerPreset preset) {
  switch (preset) {
    case PreconditionerPreset::identity: return "identity";
    case PreconditionerPreset::single: return "single";
    case PreconditionerPreset::smooth: return "smooth";
    case PreconditionerPreset::mixture: return "mixture";
  }
  return "unknown";
}

PreconditionerPreset parse_preset(const std::string& name) {
  if (name == "identity") return PreconditionerPreset::identity;
  if (name == "single") return PreconditionerPreset::single;
  if (name == "smooth") return PreconditionerPreset::smooth;
  if (name == "mixture") return PreconditionerPreset::mixture;
  throw UsageError("unknown preconditioner preset '" + name + "' (identity|single|smooth|mixture)");
}

EtaDistribution EtaDistribution::from_preset(PreconditionerPreset preset) {
  switch (preset) {
    case PreconditionerPreset::identity: return {1.0, 1.0, 0.0, 1.0};
    case PreconditionerPreset::single: return {1.0, 1.0, 1.0, 1.0};
    case PreconditionerPreset::smooth: return {1.0, 1.0, 1.0, 0.0};
    case PreconditionerPreset::mixture: return {1.0, 1.0, 0.5, 2.0 / 3.0};
  }
  return {};
}

double sample_eta(Rng& rng, double alpha_tilde, double beta_tilde, double p, double m) {
  if (!(alpha_tilde > 0.0) || !(beta_tilde > 0.0) || !std::isfinite(alpha_tilde) || !std::isfinite(beta_tilde)) {
    throw UsageError("Beta01 shape parameters must be positive and finite");
  }
  if (!(p >= 0.0 && p <= 1.0) || !(m >= 0.0 && m <= 1.0)) {
    throw UsageError("Beta01 probabilities p and m must lie in [0, 1]");
  }
  if (rng.uniform() < m) return rng.uniform() < p ? 1.0 : 0.0;
  const double x = rng.gamma(alpha_tilde);
  const double y = rng.gamma(beta_tilde);
  return x / (x + y);
}

DiagonalMass mix_preconditioner(const PreconditionerEstimate& estimate, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("mixing weight eta must lie in [0, 1]");
  const Vector& sd = estimate.diag_std;
  Vector scale(sd.size());
  for (Eigen::Index i = 0; i < sd.size(); ++i) {
    if (!(sd[i] > 0.0) || !std::isfinite(sd[i])) {
      throw UsageError("preconditioner estimate has a non-positive or non-finite entry at " + std::to_string(i));
    }
    scale[i] = eta / sd[i] + (1.0 - eta);
  }
  return DiagonalMass(std::move(scale));
}

Vector estimate_diag_variance(const std::vector<Vector>& positions) {
  if (positions.size() < 2) throw UsageError("variance estimate needs at least two positions");
  const Eigen::Index d = positions.front().size();
  Vector mean = Vector::Zero(d);
  for (const auto& x : positions) mean += x;
  mean /= static_cast<double>(positions.size());
  Vector ss = Vector::Zero(d);
  for (const auto& x : positions) ss += (x - mean).array().square().matrix();
  return ss / static_cast<double>(positions.size() - 1);
}

void RoundSchedule::validate() const {
  if (n_rounds < 1 || n_rounds > 40) throw UsageError("number of rounds must be in [1, 40]");
  // The shortest round has 2 iterations.
  if (t_unadj < 0 || t_unadj > 2) throw UsageError("t_unadj must be in [0, 2] so every round can honour it");
}

RoundResult run_round(const TargetDensity& target, const Vector& x0, std::int64_t T, double eps_init,
                      const PreconditionerEstimate& estimate, int t_unadj, const EtaDistribution& eta,
                      Rng& rng) {
  if (T < 1) throw UsageError("a round needs at least one iteration");
  if (!(eps_init > 0.0) || !std::isfinite(eps_init)) throw UsageError("eps_init must be positive and finite");
  if (estimate.diag_std.size() != target.dimension()) throw UsageError("preconditioner dimension mismatch");

  RoundResult out;
  TargetPoint current = evaluate_point(target, x0);
  double eps_sum = 0.0;
  for (std::int64_t t = 1; t <= T; ++t) {
    const double weight = sample_eta(rng, eta);
    const DiagonalMass mass = mix_preconditioner(estimate, weight);
    const bool unadjusted = t <= t_unadj;
    StepResult step;
    try {
      step = automala_step(target, mass, current, eps_init, unadjusted, rng);
    } catch (const TerminationGuardError& e) {
      throw RoundAbortedError("round aborted at iteration " + std::to_string(t) + ": " + e.what(),
                              std::move(out.trace));
    }
    eps_sum += step.eps_t;
    out.trace.append(step, unadjusted);
    current = std::move(step.next);
  }
  out.eps_init_next = eps_sum / static_cast<double>(T);
  return out;
}

std::vector<double> TuningHistory::eps_init_sequence() const {
  std::vector<double> out;
  out.reserve(rounds.size());
  for (const auto& r : rounds) out.push_back(r.eps_init_next);
  return out;
}

TuningResult run_rounds(const TargetDensity& target, const Vector& x0, const RoundSchedule& schedule,
                        const EtaDistribution& eta, Rng& rng) {
  schedule.validate();
  const Eigen::Index d = target.dimension();
  TuningResult out;
  double eps_init = 1.0;
  PreconditionerEstimate estimate = PreconditionerEstimate::identity(d);
  Vector x = x0;

  for (int r = 1; r <= schedule.n_rounds; ++r) {
    const std::int64_t T = RoundSchedule::iterations_in_round(r);
    RoundResult round = run_round(target, x, T, eps_init, estimate, schedule.t_unadj, eta, rng);

    RoundRecord rec;
    rec.round = r;
    rec.iterations = T;
    rec.eps_init = eps_init;
    rec.eps_init_next = round.eps_init_next;
    rec.diag_std = estimate.diag_std;
    rec.mean_acceptance = round.trace.mean_acceptance_probability();
    rec.reversibility_failure_rate = round.trace.reversibility_failure_rate();
    rec.n_leapfrog = round.trace.n_leapfrog_total;
    out.history.rounds.push_back(rec);

    round.trace.n_leapfrog_before = out.history.n_leapfrog_total;
    out.history.n_leapfrog_total += round.trace.n_leapfrog_total;

    eps_init = round.eps_init_next;
    x = round.trace.positions.back();
    Vector var = estimate_diag_variance(round.trace.positions);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!std::isfinite(var[i])) {
        out.history.warnings.push_back("round " + std::to_string(r) + ": non-finite variance in coordinate " +
                                       std::to_string(i + 1) + "; using 1");
        var[i] = 1.0;
      } else if (var[i] < kVarianceFloor) {
        out.history.warnings.push_back("round " + std::to_string(r) + ": variance " + format_double(var[i]) +
                                       " in coordinate " + std::to_string(i + 1) + " floored at 1e-12");
        var[i] = kVarianceFloor;
      } else if (var[i] > kVarianceCeiling) {
        out.history.warnings.push_back("round " + std::to_string(r) + ": variance " + format_double(var[i]) +
                                       " in coordinate " + std::to_string(i + 1) + " capped at 1e100");
        var[i] = kVarianceCeiling;
      }
    }
    estimate = PreconditionerEstimate{var.array().sqrt().matrix(), r};
    if (r == schedule.n_rounds) out.final_trace = std::move(round.trace);
  }
  out.eps_init_final = eps_init;
  out.estimate_final = estimate;
  return out;
}

double estimate_step_size_objective(const TargetDensity& target, const DiagonalMass& mass,
                                    double eps_init, std::int64_t n_samples, Rng& rng) {
  if (!target.has_exact_sampler()) throw UsageError(target.name() + " has no exact sampler");
  if (n_samples < 1) throw UsageError("objective estimate needs at least one sample");
  double sum = 0.0;
  for (std::int64_t n = 0; n < n_samples; ++n) {
    const TargetPoint start = evaluate_point(target, target.sample_exact(rng));
    const Vector p = sample_momentum(mass, rng);
    const Thresholds thresholds = sample_thresholds(rng);
    const AutoMalaProposal prop = automala_proposal(target, mass, start, p, thresholds, eps_init);
    sum += 0.5 * (prop.forward.eps + prop.reverse.eps);
  }
  return sum / static_cast<double>(n_samples);
}

}  // namespace automala
