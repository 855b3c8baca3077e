#pragma once

#include "automala/kernels.hpp"

#include <cstdint>
#include <vector>

namespace automala {

/// Raw output of a run of one chain.
struct ChainTrace {
  std::vector<Vector> positions;
  std::vector<double> eps_t;
  std::vector<double> alpha;
  std::vector<bool> accepted;
  std::vector<bool> reversibility_ok;
  std::vector<bool> unadjusted;
  std::vector<int> n_leapfrog;
  std::int64_t n_leapfrog_total = 0;   // sum of n_leapfrog
  std::int64_t n_leapfrog_before = 0;  // spent before the first row (warmup)

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  void append(const StepResult& step, bool was_unadjusted) {
    positions.push_back(step.next.x);
    eps_t.push_back(step.eps_t);
    alpha.push_back(step.alpha);
    accepted.push_back(step.accepted);
    reversibility_ok.push_back(step.reversibility_ok);
    unadjusted.push_back(was_unadjusted);
    n_leapfrog.push_back(step.n_leapfrog);
    n_leapfrog_total += step.n_leapfrog;
  }

  std::vector<double> coordinate(Eigen::Index i) const {
    std::vector<double> out;
    out.reserve(positions.size());
    for (const auto& x : positions) out.push_back(x[i]);
    return out;
  }

  /// Mean over adjusted rows of the probability of moving: alpha when the
  /// reversibility check passed, 0 otherwise. NaN when no row is adjusted.
  double mean_acceptance_probability() const;

  /// Fraction of adjusted rows that failed the reversibility check.
  double reversibility_failure_rate() const;

  /// Fraction of adjusted rows that were accepted.
  double accepted_fraction() const;
};

}  // namespace automala
