#pragma once

#include "automala/core.hpp"
#include "automala/rng.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

namespace automala {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// A one-dimensional margin of the target whose law is known in closed form.
struct KnownMargin {
  Eigen::Index index = 0;  // zero-based coordinate
  double mean = 0.0;
  double sd = 1.0;
  std::function<double(double)> cdf;
};

/// Log density and gradient at one position.
///
/// `log_density == -inf` marks a point outside the support; the gradient is
/// then empty and must not be used.
struct Evaluation {
  double log_density = kNegInf;
  Vector gradient;

  bool in_support() const { return log_density > kNegInf; }
};

/// A differentiable unnormalized log density on R^d.
///
/// Implementations must be pure: concurrent calls from several chains share
/// one instance without synchronization.
class TargetDensity {
 public:
  explicit TargetDensity(Eigen::Index dimension);
  virtual ~TargetDensity() = default;

  Eigen::Index dimension() const { return dimension_; }
  virtual std::string name() const = 0;

  /// Checked log density. Throws UsageError on a dimension mismatch or a
  /// non-finite coordinate; never returns NaN.
  double log_density(const Vector& x) const;

  /// Checked gradient. Throws DomainError where the log density is -inf.
  Vector grad_log_density(const Vector& x) const;

  /// Unchecked joint evaluation used by the samplers. Never throws for
  /// points of the right dimension: non-finite positions, NaN densities and
  /// undefined gradients all come back as an out-of-support Evaluation.
  Evaluation evaluate(const Vector& x) const;

  virtual bool has_exact_sampler() const { return false; }
  virtual Vector sample_exact(Rng& rng) const;
  virtual std::optional<KnownMargin> known_margin() const { return std::nullopt; }

 protected:
  virtual double log_density_impl(const Vector& x) const = 0;
  virtual Vector gradient_impl(const Vector& x) const = 0;

  /// Both at once; the default calls the two hooks above. The gradient is
  /// only requested when the returned log density is finite.
  virtual double evaluate_impl(const Vector& x, Vector& gradient) const;

  void check_point(const Vector& x) const;

 private:
  Eigen::Index dimension_;
};

using TargetPtr = std::shared_ptr<const TargetDensity>;

/// Neal's funnel: X1 ~ N(0, 9), X2..Xd | X1 iid N(0, exp(x1 / beta)).
TargetPtr make_funnel(int d, double beta);

/// Banana: X1 ~ N(0, 10), X2..Xd | X1 iid N(x1^2, beta^2 / 10).
TargetPtr make_banana(int d, double beta);

/// d-dimensional iid standard normal.
TargetPtr make_normal_iid(int d);

/// Two independent zero-mean normals with standard deviations (10^-c, 10^c).
TargetPtr make_anisotropic_normal(int c);

/// User-supplied density. The gradient must be analytic; nothing here
/// differentiates numerically.
TargetPtr make_custom_target(int d, std::string name,
                             std::function<double(const Vector&)> log_density,
                             std::function<Vector(const Vector&)> gradient);

/// Parses the CLI spelling: `funnel(d,beta)`, `banana(d,beta)`, `normal(d)`,
/// `aniso(c)`. Arguments may be written as decimals or as `p/q` fractions.
TargetPtr parse_target(const std::string& spec);

double normal_cdf(double x, double mean, double sd);

}  // namespace automala
