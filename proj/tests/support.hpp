#pragma once

#include "automala/targets.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace testing {

using automala::Evaluation;
using automala::TargetDensity;
using automala::TargetPtr;
using automala::Vector;

/// Forwards to another target and counts joint evaluations.
class CountingTarget : public TargetDensity {
 public:
  explicit CountingTarget(TargetPtr inner) : TargetDensity(inner->dimension()), inner_(std::move(inner)) {}

  std::string name() const override { return "counting " + inner_->name(); }
  bool has_exact_sampler() const override { return inner_->has_exact_sampler(); }
  Vector sample_exact(automala::Rng& rng) const override { return inner_->sample_exact(rng); }
  std::optional<automala::KnownMargin> known_margin() const override { return inner_->known_margin(); }

  long count() const { return count_.load(); }
  void reset() { count_ = 0; }

 protected:
  double log_density_impl(const Vector& x) const override { return inner_->log_density(x); }
  Vector gradient_impl(const Vector& x) const override { return inner_->grad_log_density(x); }
  double evaluate_impl(const Vector& x, Vector& gradient) const override {
    ++count_;
    Evaluation e = inner_->evaluate(x);
    gradient = std::move(e.gradient);
    return e.log_density;
  }

 private:
  TargetPtr inner_;
  mutable std::atomic<long> count_{0};
};

/// Central differences with step 1e-5 (1 + |x_i|).
inline Vector finite_difference_gradient(const TargetDensity& target, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-5 * (1.0 + std::abs(x[i]));
    Vector up = x;
    Vector down = x;
    up[i] += h;
    down[i] -= h;
    g[i] = (target.log_density(up) - target.log_density(down)) / (2.0 * h);
  }
  return g;
}

/// Normal log density written out independently of the library.
inline double normal_logpdf(double x, double mean, double var) {
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * (x - mean) * (x - mean) / var;
}

inline std::vector<std::string> builtin_target_specs() {
  return {"funnel(2,2)", "funnel(8,0.5)", "banana(2,1)", "banana(4,8)", "normal(1)",
          "normal(8)",   "aniso(0)",      "aniso(1)",    "aniso(4)"};
}

}  // namespace testing
