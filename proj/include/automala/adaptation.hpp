#pragma once

#include "automala/trace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace automala {

/// Named settings of the zero-one-inflated Beta law of the mixing weight eta.
enum class PreconditionerPreset {
  identity,  // eta = 0: never use the estimate
  single,    // eta = 1: always use the estimate
  smooth,    // eta ~ Beta(1, 1)
  mixture,   // eta in {0}, {1}, (0, 1) with probability 1/3 each
};

std::string to_string(PreconditionerPreset preset);
PreconditionerPreset parse_preset(const std::string& name);

/// Beta01(alpha_tilde, beta_tilde, p, m): Bernoulli(p) with probability m,
/// Beta(alpha_tilde, beta_tilde) otherwise.
struct EtaDistribution {
  double alpha_tilde = 1.0;
  double beta_tilde = 1.0;
  double p = 0.5;
  double m = 2.0 / 3.0;

  static EtaDistribution from_preset(PreconditionerPreset preset);
};

double sample_eta(Rng& rng, double alpha_tilde, double beta_tilde, double p, double m);

inline double sample_eta(Rng& rng, const EtaDistribution& dist) {
  return sample_eta(rng, dist.alpha_tilde, dist.beta_tilde, dist.p, dist.m);
}

/// Per-coordinate standard deviations estimated from a previous round.
struct PreconditionerEstimate {
  Vector diag_std;
  int source_round = 0;  // 0 for the initial identity

  static PreconditionerEstimate identity(Eigen::Index d) { return {Vector::Ones(d), 0}; }
};

/// inv_sqrt_scale_i = eta / sigma_i + (1 - eta).
DiagonalMass mix_preconditioner(const PreconditionerEstimate& estimate, double eta);

/// Unbiased per-coordinate sample variance (divisor T - 1).
Vector estimate_diag_variance(const std::vector<Vector>& positions);

inline constexpr double kVarianceFloor = 1e-12;
// Keeps 1 / sigma^2 representable in the mixed mass matrix.
inline constexpr double kVarianceCeiling = 1e100;

struct RoundSchedule {
  int n_rounds = 14;
  int t_unadj = 1;

  static std::int64_t iterations_in_round(int round) { return std::int64_t{1} << round; }
  void validate() const;
};

struct RoundResult {
  ChainTrace trace;
  double eps_init_next = 0.0;
};

/// Thrown when the step-size search hits its guard mid-round; carries the
/// iterations completed so far.
class RoundAbortedError : public TerminationGuardError {
 public:
  RoundAbortedError(const std::string& what, ChainTrace partial)
      : TerminationGuardError(what), partial_(std::move(partial)) {}
  const ChainTrace& partial_trace() const { return partial_; }

 private:
  ChainTrace partial_;
};

/// T autoMALA iterations with eps_init and the estimate frozen. Each
/// iteration draws eta first, rebuilds the mass, then steps; the first
/// t_unadj iterations are unadjusted.
RoundResult run_round(const TargetDensity& target, const Vector& x0, std::int64_t T, double eps_init,
                      const PreconditionerEstimate& estimate, int t_unadj, const EtaDistribution& eta,
                      Rng& rng);

struct RoundRecord {
  int round = 0;
  std::int64_t iterations = 0;
  double eps_init = 0.0;       // used during the round
  double eps_init_next = 0.0;  // mean of eps_t over the round
  Vector diag_std;             // estimate used during the round
  double mean_acceptance = 0.0;
  double reversibility_failure_rate = 0.0;
  std::int64_t n_leapfrog = 0;
};

struct TuningHistory {
  std::vector<RoundRecord> rounds;
  std::vector<std::string> warnings;
  std::int64_t n_leapfrog_total = 0;

  /// eps_init values produced at the end of each round.
  std::vector<double> eps_init_sequence() const;
};

struct TuningResult {
  ChainTrace final_trace;  // n_leapfrog_before counts all earlier rounds
  TuningHistory history;
  double eps_init_final = 0.0;
  PreconditionerEstimate estimate_final;
};

/// Round-based tuning: round r runs 2^r iterations, starting from eps_init = 1
/// and the identity estimate, refreshing both after every round.
TuningResult run_rounds(const TargetDensity& target, const Vector& x0, const RoundSchedule& schedule,
                        const EtaDistribution& eta, Rng& rng);

/// Monte Carlo estimate of g(eps_init) = E[(eps(S) + eps(S')) / 2] with
/// stationary starts from the target's exact sampler.
double estimate_step_size_objective(const TargetDensity& target, const DiagonalMass& mass,
                                    double eps_init, std::int64_t n_samples, Rng& rng);

}  // namespace automala
