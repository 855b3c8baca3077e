#include "automala/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace automala {

namespace {

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Means of floor(T / m) consecutive batches of size m = floor(sqrt(T)).
std::vector<double> batch_means(std::span<const double> chain, std::size_t& batch_size) {
  const std::size_t T = chain.size();
  batch_size = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(T))));
  const std::size_t n_batches = T / batch_size;
  std::vector<double> means(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    means[b] = mean_of(chain.subspan(b * batch_size, batch_size));
  }
  return means;
}

}  // namespace

Moments sample_moments(std::span<const double> values) {
  if (values.empty()) throw UsageError("moments of an empty sample");
  Moments m;
  m.mean = mean_of(values);
  if (values.size() < 2) return m;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.variance = ss / static_cast<double>(values.size() - 1);
  return m;
}

double ess_batch_means(std::span<const double> chain) {
  if (chain.size() < 4) throw UsageError("batch-means ESS needs at least 4 samples");
  const double T = static_cast<double>(chain.size());
  std::size_t m = 0;
  const std::vector<double> means = batch_means(chain, m);
  const double grand = mean_of(means);
  double spread = 0.0;
  for (double v : means) spread += (v - grand) * (v - grand);
  const double sigma_a2 = static_cast<double>(m) * spread / static_cast<double>(means.size() - 1);
  const double s2 = sample_moments(chain).variance;
  if (!(sigma_a2 > 0.0)) return kInfiniteEss;
  return T * s2 / sigma_a2;
}

double ess_autocov(std::span<const double> chain) {
  if (chain.size() < 8) throw UsageError("autocovariance ESS needs at least 8 samples");
  const std::size_t T = chain.size();
  const double mean = mean_of(chain);
  std::vector<double> centred(T);
  for (std::size_t t = 0; t < T; ++t) centred[t] = chain[t] - mean;

  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < T; ++t) s += centred[t] * centred[t + lag];
    return s / static_cast<double>(T);
  };

  const double gamma0 = autocov(0);
  if (!(gamma0 > 0.0)) return kInfiniteEss;

  // Geyer: Gamma_k = rho_{2k} + rho_{2k+1}, summed while positive and forced
  // to be non-increasing.
  double sum_pairs = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; 2 * k + 1 < T; ++k) {
    const double rho_even = k == 0 ? 1.0 : autocov(2 * k) / gamma0;
    const double rho_odd = autocov(2 * k + 1) / gamma0;
    double pair = rho_even + rho_odd;
    if (!(pair > 0.0)) break;
    pair = std::min(pair, previous);
    sum_pairs += pair;
    previous = pair;
  }
  // 1 + 2 sum_{k>=1} rho_k = 2 sum_k Gamma_k - 1
  const double tau = 2.0 * sum_pairs - 1.0;
  const double n = static_cast<double>(T);
  if (!(tau > 0.1)) return 10.0 * n;
  return std::min(n / tau, 10.0 * n);
}

double ess_known_moments(std::span<const double> chain, double mu, double sigma) {
  if (chain.size() < 4) throw UsageError("known-moment ESS needs at least 4 samples");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw UsageError("known-moment ESS needs sigma > 0");
  std::size_t m = 0;
  const std::vector<double> means = batch_means(chain, m);
  double spread = 0.0;
  for (double v : means) spread += (v - mu) * (v - mu);
  const double sigma_a2 = static_cast<double>(m) * spread / static_cast<double>(means.size());
  if (!(sigma_a2 > 0.0)) return kInfiniteEss;
  return static_cast<double>(chain.size()) * sigma * sigma / sigma_a2;
}

EssReport min_ess(const std::vector<Vector>& positions, const std::optional<KnownMargin>& margin) {
  if (positions.empty()) throw UsageError("ESS of an empty trace");
  const Eigen::Index d = positions.front().size();
  EssReport report;
  report.ess_batch = kInfiniteEss;
  report.ess_autocov = kInfiniteEss;
  std::vector<double> column(positions.size());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (std::size_t t = 0; t < positions.size(); ++t) column[t] = positions[t][i];
    CoordinateEss c{ess_batch_means(column), ess_autocov(column)};
    report.ess_batch = std::min(report.ess_batch, c.batch);
    report.ess_autocov = std::min(report.ess_autocov, c.autocov);
    report.per_coordinate.push_back(c);
    if (margin && margin->index == i) report.ess_known = ess_known_moments(column, margin->mean, margin->sd);
  }
  report.min_ess = std::min(report.ess_batch, report.ess_autocov);
  if (report.ess_known) report.min_ess = std::min(report.min_ess, *report.ess_known);
  report.degenerate = std::isinf(report.min_ess);
  return report;
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw UsageError("KS statistic of an empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

std::optional<double> leapfrogs_per_kiloess(std::int64_t n_leapfrog_total, const EssReport& report) {
  if (!std::isfinite(report.min_ess) || !(report.min_ess > 0.0)) return std::nullopt;
  return 1000.0 * static_cast<double>(n_leapfrog_total) / report.min_ess;
}

}  // namespace automala
