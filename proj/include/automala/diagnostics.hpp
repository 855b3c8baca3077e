#pragma once

#include "automala/targets.hpp"
#include "automala/trace.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace automala {

inline constexpr double kInfiniteEss = std::numeric_limits<double>::infinity();

/// Batch-means ESS with batch size floor(sqrt(T)); the trailing partial
/// batch is dropped. Returns +inf when the batch means have zero spread.
double ess_batch_means(std::span<const double> chain);

/// Autocovariance ESS, T / (1 + 2 sum rho_k), truncated by the monotone
/// initial positive sequence of paired autocorrelations and clamped to
/// (0, 10 T]. Returns +inf for a constant chain.
double ess_autocov(std::span<const double> chain);

/// Batch-means ESS centred at a known mean and scaled by a known standard
/// deviation:
///   sigma_a^2 = m / B * sum_b (batch_mean_b - mu)^2,   ESS = T sigma^2 / sigma_a^2.
/// Unlike the plain estimators it drops when the chain misses the mean or
/// the spread of the margin.
double ess_known_moments(std::span<const double> chain, double mu, double sigma);

struct CoordinateEss {
  double batch = 0.0;
  double autocov = 0.0;
};

struct EssReport {
  double ess_batch = 0.0;    // minimum over coordinates
  double ess_autocov = 0.0;  // minimum over coordinates
  std::optional<double> ess_known;
  double min_ess = 0.0;
  bool degenerate = false;  // every estimator returned +inf
  std::vector<CoordinateEss> per_coordinate;
};

EssReport min_ess(const std::vector<Vector>& positions, const std::optional<KnownMargin>& margin);

/// One-sample Kolmogorov-Smirnov statistic D_n against `cdf`.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

/// 1000 * n_leapfrog / minESS; nullopt when minESS is infinite or zero.
std::optional<double> leapfrogs_per_kiloess(std::int64_t n_leapfrog_total, const EssReport& report);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // divisor n - 1
};

Moments sample_moments(std::span<const double> values);

}  // namespace automala
