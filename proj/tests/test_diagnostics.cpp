#include "automala/diagnostics.hpp"

#include <doctest.h>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

using namespace automala;

namespace {

std::vector<double> iid_normal(Rng& rng, std::size_t n, double mean = 0.0, double sd = 1.0) {
  std::vector<double> out(n);
  for (auto& v : out) v = mean + sd * rng.normal();
  return out;
}

std::vector<double> ar1(Rng& rng, std::size_t n, double phi) {
  std::vector<double> out(n);
  double x = rng.normal() / std::sqrt(1 - phi * phi);
  for (auto& v : out) {
    x = phi * x + rng.normal();
    v = x;
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("known-moment ESS hand case") {
  const std::vector<double> chain{1, 1, -1, -1};
  CHECK(ess_known_moments(chain, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("batch-means ESS by hand") {
  // T = 9, m = 3, batch means 2, 5, 8 around 5: sigma_a^2 = 3 * 18 / 2 = 27.
  const std::vector<double> chain{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const double s2 = 7.5;
  CHECK(ess_batch_means(chain) == doctest::Approx(9.0 * s2 / 27.0).epsilon(1e-14));

  // T = 10 drops the trailing sample.
  std::vector<double> longer = chain;
  longer.push_back(100);
  double mean = 0, ss = 0;
  for (double v : longer) mean += v / 10;
  for (double v : longer) ss += (v - mean) * (v - mean);
  CHECK(ess_batch_means(longer) == doctest::Approx(10.0 * (ss / 9) / 27.0).epsilon(1e-14));
}

TEST_CASE("degenerate chains return the sentinel") {
  const std::vector<double> constant(64, 3.5);
  CHECK(ess_batch_means(constant) == kInfiniteEss);
  CHECK(ess_autocov(constant) == kInfiniteEss);
  CHECK(ess_known_moments(constant, 3.5, 1.0) == kInfiniteEss);

  std::vector<double> alternating(16);
  for (std::size_t t = 0; t < 16; ++t) alternating[t] = t % 2 ? -1.0 : 1.0;
  CHECK(ess_batch_means(alternating) == kInfiniteEss);

  std::vector<Vector> positions(32, Vector::Constant(2, 1.0));
  const EssReport r = min_ess(positions, std::nullopt);
  CHECK(r.degenerate);
  CHECK(r.min_ess == kInfiniteEss);
  CHECK_FALSE(leapfrogs_per_kiloess(1000, r).has_value());
}

TEST_CASE("short-chain errors and smoke") {
  CHECK_THROWS_AS(ess_batch_means(std::vector<double>{1, 2, 3}), UsageError);
  CHECK_THROWS_AS(ess_known_moments(std::vector<double>{1, 2, 3}, 0, 1), UsageError);
  CHECK_THROWS_AS(ess_known_moments(std::vector<double>{1, 2, 3, 4}, 0, 0), UsageError);
  CHECK_THROWS_AS(ess_autocov(std::vector<double>{1, 2, 3, 4, 5, 6, 7}), UsageError);
  const double e = ess_autocov(std::vector<double>{0.3, -1.2, 0.8, 2.0, -0.4, 0.1, 1.1, -0.9});
  CHECK(std::isfinite(e));
  CHECK(e > 0);
  CHECK(e <= 80);
}

TEST_CASE("ESS calibration on iid chains") {
  Rng rng(81);
  std::vector<double> batch, autocov, known;
  const std::size_t T = 1 << 14;
  for (int c = 0; c < 50; ++c) {
    const std::vector<double> chain = iid_normal(rng, T, 2.0, 3.0);
    batch.push_back(ess_batch_means(chain) / T);
    autocov.push_back(ess_autocov(chain) / T);
    known.push_back(ess_known_moments(chain, 2.0, 3.0) / T);
  }
  CHECK(median(batch) >= 0.6);
  CHECK(median(batch) <= 1.5);
  CHECK(median(autocov) >= 0.7);
  CHECK(median(autocov) <= 1.4);
  CHECK(median(known) >= 0.6);
  CHECK(median(known) <= 1.5);
}

TEST_CASE("autocovariance ESS on AR(1)") {
  Rng rng(83);
  const double phi = 0.9;
  const std::size_t T = 1 << 16;
  const double analytic = (1 - phi) / (1 + phi) * T;
  const double e = ess_autocov(ar1(rng, T, phi));
  CHECK(e >= 0.6 * analytic);
  CHECK(e <= 1.4 * analytic);
}

TEST_CASE("ESS is invariant to affine maps") {
  Rng rng(85);
  const std::vector<double> x = ar1(rng, 4096, 0.5);
  std::vector<double> scaled(x.size()), affine(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    scaled[t] = 8.0 * x[t];
    affine[t] = -3.7 * x[t] + 12.5;
  }
  // Power-of-two scaling is exact in floating point, so the estimates are too.
  CHECK(ess_batch_means(scaled) == ess_batch_means(x));
  CHECK(ess_autocov(scaled) == ess_autocov(x));
  CHECK(ess_known_moments(scaled, 0.0, 8.0) == ess_known_moments(x, 0.0, 1.0));
  CHECK(ess_batch_means(affine) == doctest::Approx(ess_batch_means(x)).epsilon(1e-10));
  CHECK(ess_autocov(affine) == doctest::Approx(ess_autocov(x)).epsilon(1e-10));
  CHECK(ess_known_moments(affine, 12.5, 3.7) == doctest::Approx(ess_known_moments(x, 0.0, 1.0)).epsilon(1e-10));
}

TEST_CASE("known-moment ESS notices a wrong mean or spread") {
  Rng rng(87);
  const std::vector<double> chain = iid_normal(rng, 1 << 12);
  const double right = ess_known_moments(chain, 0.0, 1.0);
  CHECK(ess_known_moments(chain, 0.5, 1.0) < 0.2 * right);
  CHECK(ess_known_moments(chain, 0.0, 0.5) == doctest::Approx(right / 4));
}

TEST_CASE("min_ess takes the minimum of every estimator") {
  Rng rng(89);
  std::vector<Vector> positions;
  double x = 0;
  for (int t = 0; t < 2048; ++t) {
    x = 0.8 * x + rng.normal();
    Vector v(2);
    v << rng.normal(), x;
    positions.push_back(v);
  }
  const EssReport plain = min_ess(positions, std::nullopt);
  REQUIRE(plain.per_coordinate.size() == 2);
  double lowest = kInfiniteEss;
  for (const auto& c : plain.per_coordinate) lowest = std::min({lowest, c.batch, c.autocov});
  CHECK(plain.min_ess == lowest);
  CHECK_FALSE(plain.ess_known.has_value());
  CHECK_FALSE(plain.degenerate);

  // Known margin on coordinate 1 with a deliberately wrong mean.
  KnownMargin margin{1, 5.0, 1.0, [](double) { return 0.5; }};
  const EssReport with_known = min_ess(positions, margin);
  REQUIRE(with_known.ess_known.has_value());
  CHECK(*with_known.ess_known == ess_known_moments(std::vector<double>([&] {
          std::vector<double> col;
          for (const auto& p : positions) col.push_back(p[1]);
          return col;
        }()), 5.0, 1.0));
  CHECK(with_known.min_ess == std::min(lowest, *with_known.ess_known));
  CHECK(with_known.min_ess < plain.min_ess);
}

TEST_CASE("KS statistic") {
  const auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  CHECK(ks_statistic(std::vector<double>{0.0}, phi) == doctest::Approx(0.5).epsilon(1e-15));

  const boost::math::normal_distribution<double> unit;
  for (int n : {1, 7, 100, 1000}) {
    std::vector<double> q;
    for (int i = 1; i <= n; ++i) q.push_back(boost::math::quantile(unit, (i - 0.5) / n));
    CHECK(ks_statistic(q, phi) == doctest::Approx(0.5 / n).epsilon(1e-9));
  }
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, phi), UsageError);

  Rng rng(91);
  for (int n = 0; n < 200; ++n) {
    const std::size_t size = 1 + static_cast<std::size_t>(rng.uniform() * 50);
    const std::vector<double> s = iid_normal(rng, size, rng.normal(), 0.5 + rng.uniform());
    const double d = ks_statistic(s, phi);
    CHECK(d >= 0.5 / size - 1e-15);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("KS calibration under the null") {
  Rng rng(93);
  const auto cdf = [](double x) { return 0.5 * std::erfc(-x / (3.0 * std::sqrt(2.0))); };
  int below = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) below += ks_statistic(iid_normal(rng, 10000, 0.0, 3.0), cdf) < 1.63 / 100.0;
  CHECK(below >= 0.99 * seeds);
}

TEST_CASE("leapfrogs per thousand minESS") {
  EssReport r;
  r.min_ess = 1e4;
  // 10^6 leapfrogs over 10 thousand-ESS units.
  CHECK(*leapfrogs_per_kiloess(1000000, r) == 1e5);
  CHECK(*leapfrogs_per_kiloess(2000000, r) == 2 * *leapfrogs_per_kiloess(1000000, r));
  r.min_ess = 0.0;
  CHECK_FALSE(leapfrogs_per_kiloess(10, r).has_value());
}
