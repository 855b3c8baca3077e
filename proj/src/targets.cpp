#include "automala/targets.hpp"

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>
#include <utility>
#include <vector>

namespace automala {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

double normal_log_pdf(double x, double mean, double variance) {
  const double z = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance)) - 0.5 * z * z / variance;
}

class Funnel final : public TargetDensity {
 public:
  Funnel(int d, double beta) : TargetDensity(d), beta_(beta) {}

  std::string name() const override {
    return "funnel(" + std::to_string(dimension()) + "," + format_double(beta_) + ")";
  }

  bool has_exact_sampler() const override { return true; }

  Vector sample_exact(Rng& rng) const override {
    Vector x(dimension());
    x[0] = 3.0 * rng.normal();
    const double sd = std::exp(x[0] / (2.0 * beta_));
    for (Eigen::Index i = 1; i < x.size(); ++i) x[i] = sd * rng.normal();
    return x;
  }

  std::optional<KnownMargin> known_margin() const override {
    return KnownMargin{0, 0.0, 3.0, [](double v) { return normal_cdf(v, 0.0, 3.0); }};
  }

 protected:
  double log_density_impl(const Vector& x) const override {
    const double x1 = x[0];
    const double inv_var = std::exp(-x1 / beta_);
    const auto rest = static_cast<double>(x.size() - 1);
    double quad = 0.0;
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      if (x[i] != 0.0) quad += x[i] * x[i] * inv_var;  // 0 * inf stays 0
    }
    const double lp = normal_log_pdf(x1, 0.0, 9.0) - 0.5 * rest * (kLog2Pi + x1 / beta_) - 0.5 * quad;
    return std::isnan(lp) ? kNegInf : lp;
  }

  Vector gradient_impl(const Vector& x) const override {
    const double x1 = x[0];
    const double inv_var = std::exp(-x1 / beta_);
    const auto rest = static_cast<double>(x.size() - 1);
    Vector g(x.size());
    double quad = 0.0;
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      if (x[i] != 0.0) quad += x[i] * x[i] * inv_var;
      g[i] = x[i] == 0.0 ? 0.0 : -x[i] * inv_var;
    }
    g[0] = -x1 / 9.0 - rest / (2.0 * beta_) + quad / (2.0 * beta_);
    return g;
  }

 private:
  double beta_;
};

class Banana final : public TargetDensity {
 public:
  Banana(int d, double beta) : TargetDensity(d), beta_(beta), cond_var_(beta * beta / 10.0) {}

  std::string name() const override {
    return "banana(" + std::to_string(dimension()) + "," + format_double(beta_) + ")";
  }

  bool has_exact_sampler() const override { return true; }

  Vector sample_exact(Rng& rng) const override {
    Vector x(dimension());
    x[0] = std::sqrt(10.0) * rng.normal();
    const double sd = std::sqrt(cond_var_);
    for (Eigen::Index i = 1; i < x.size(); ++i) x[i] = x[0] * x[0] + sd * rng.normal();
    return x;
  }

  std::optional<KnownMargin> known_margin() const override {
    const double sd = std::sqrt(10.0);
    return KnownMargin{0, 0.0, sd, [sd](double v) { return normal_cdf(v, 0.0, sd); }};
  }

 protected:
  double log_density_impl(const Vector& x) const override {
    const double center = x[0] * x[0];
    double lp = normal_log_pdf(x[0], 0.0, 10.0);
    for (Eigen::Index i = 1; i < x.size(); ++i) lp += normal_log_pdf(x[i], center, cond_var_);
    return std::isnan(lp) ? kNegInf : lp;
  }

  Vector gradient_impl(const Vector& x) const override {
    const double center = x[0] * x[0];
    Vector g(x.size());
    double cross = 0.0;
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double r = (x[i] - center) / cond_var_;
      g[i] = -r;
      cross += r;
    }
    g[0] = -x[0] / 10.0 + 2.0 * x[0] * cross;
    return g;
  }

 private:
  double beta_;
  double cond_var_;
};

// Independent zero-mean normals with per-coordinate standard deviations.
class DiagonalNormal final : public TargetDensity {
 public:
  DiagonalNormal(Vector sd, std::string name)
      : TargetDensity(sd.size()), sd_(std::move(sd)), name_(std::move(name)) {
    inv_var_ = sd_.array().square().inverse();
    log_norm_ = 0.0;
    for (Eigen::Index i = 0; i < sd_.size(); ++i) log_norm_ -= 0.5 * kLog2Pi + std::log(sd_[i]);
  }

  std::string name() const override { return name_; }
  bool has_exact_sampler() const override { return true; }

  Vector sample_exact(Rng& rng) const override {
    Vector x(dimension());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = sd_[i] * rng.normal();
    return x;
  }

  std::optional<KnownMargin> known_margin() const override {
    const double sd = sd_[0];
    return KnownMargin{0, 0.0, sd, [sd](double v) { return normal_cdf(v, 0.0, sd); }};
  }

 protected:
  double log_density_impl(const Vector& x) const override {
    const double lp = log_norm_ - 0.5 * (x.array().square() * inv_var_.array()).sum();
    return std::isnan(lp) ? kNegInf : lp;
  }

  Vector gradient_impl(const Vector& x) const override {
    return -(x.array() * inv_var_.array()).matrix();
  }

 private:
  Vector sd_;
  Vector inv_var_;
  double log_norm_;
  std::string name_;
};

class CustomTarget final : public TargetDensity {
 public:
  CustomTarget(int d, std::string name, std::function<double(const Vector&)> log_density,
               std::function<Vector(const Vector&)> gradient)
      : TargetDensity(d),
        name_(std::move(name)),
        log_density_(std::move(log_density)),
        gradient_(std::move(gradient)) {}

  std::string name() const override { return name_; }

 protected:
  double log_density_impl(const Vector& x) const override {
    const double lp = log_density_(x);
    return std::isnan(lp) ? kNegInf : lp;
  }
  Vector gradient_impl(const Vector& x) const override { return gradient_(x); }

 private:
  std::string name_;
  std::function<double(const Vector&)> log_density_;
  std::function<Vector(const Vector&)> gradient_;
};

double parse_number(const std::string& text, const std::string& spec) {
  auto parse_one = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("target '" + spec + "': cannot parse number '" + s + "'");
    }
    if (used != s.size()) throw UsageError("target '" + spec + "': cannot parse number '" + s + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_one(text);
  return parse_one(text.substr(0, slash)) / parse_one(text.substr(slash + 1));
}

int parse_int(const std::string& text, const std::string& spec) {
  const double v = parse_number(text, spec);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw UsageError("target '" + spec + "': expected an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

TargetDensity::TargetDensity(Eigen::Index dimension) : dimension_(dimension) {
  if (dimension < 1) throw UsageError("target dimension must be at least 1");
}

void TargetDensity::check_point(const Vector& x) const {
  if (x.size() != dimension_) {
    throw UsageError(name() + ": expected a point of dimension " + std::to_string(dimension_) +
                     ", got " + std::to_string(x.size()));
  }
  if (!x.allFinite()) throw UsageError(name() + ": point has a non-finite coordinate");
}

double TargetDensity::log_density(const Vector& x) const {
  check_point(x);
  const double lp = log_density_impl(x);
  return std::isnan(lp) ? kNegInf : lp;
}

Vector TargetDensity::grad_log_density(const Vector& x) const {
  if (log_density(x) == kNegInf) {
    throw DomainError(name() + ": gradient requested at a point of zero density");
  }
  return gradient_impl(x);
}

double TargetDensity::evaluate_impl(const Vector& x, Vector& gradient) const {
  const double lp = log_density_impl(x);
  if (std::isfinite(lp)) gradient = gradient_impl(x);
  return lp;
}

Evaluation TargetDensity::evaluate(const Vector& x) const {
  Evaluation out;
  if (x.size() != dimension_) check_point(x);
  if (!x.allFinite()) return out;
  Vector gradient;
  const double lp = evaluate_impl(x, gradient);
  // +inf and NaN are treated like leaving the support.
  if (!std::isfinite(lp) || gradient.size() != dimension_ || !gradient.allFinite()) return out;
  out.log_density = lp;
  out.gradient = std::move(gradient);
  return out;
}

Vector TargetDensity::sample_exact(Rng&) const {
  throw UsageError(name() + " has no exact sampler");
}

TargetPtr make_funnel(int d, double beta) {
  if (d < 2) throw UsageError("funnel needs d >= 2");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw UsageError("funnel needs beta > 0");
  return std::make_shared<Funnel>(d, beta);
}

TargetPtr make_banana(int d, double beta) {
  if (d < 2) throw UsageError("banana needs d >= 2");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw UsageError("banana needs beta > 0");
  return std::make_shared<Banana>(d, beta);
}

TargetPtr make_normal_iid(int d) {
  if (d < 1) throw UsageError("normal needs d >= 1");
  return std::make_shared<DiagonalNormal>(Vector::Ones(d), "normal(" + std::to_string(d) + ")");
}

TargetPtr make_anisotropic_normal(int c) {
  if (c < 0) throw UsageError("aniso needs c >= 0");
  const double scale = std::pow(10.0, c);
  Vector sd(2);
  sd << 1.0 / scale, scale;
  return std::make_shared<DiagonalNormal>(std::move(sd), "aniso(" + std::to_string(c) + ")");
}

TargetPtr make_custom_target(int d, std::string name,
                             std::function<double(const Vector&)> log_density,
                             std::function<Vector(const Vector&)> gradient) {
  if (d < 1) throw UsageError("custom target needs d >= 1");
  if (!log_density || !gradient) throw UsageError("custom target needs both a log density and a gradient");
  return std::make_shared<CustomTarget>(d, std::move(name), std::move(log_density), std::move(gradient));
}

TargetPtr parse_target(const std::string& spec) {
  static const std::regex pattern(R"(^\s*([A-Za-z_]+)\s*\(([^()]*)\)\s*$)");
  std::smatch m;
  if (!std::regex_match(spec, m, pattern)) {
    throw UsageError("cannot parse target '" + spec + "'; expected e.g. funnel(2,2)");
  }
  const std::string family = m[1];
  std::vector<std::string> args;
  std::stringstream ss(m[2].str());
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    args.push_back(item);
  }
  auto expect = [&](std::size_t n) {
    if (args.size() != n) {
      throw UsageError("target '" + spec + "': " + family + " takes " + std::to_string(n) + " argument(s)");
    }
  };
  if (family == "funnel") {
    expect(2);
    return make_funnel(parse_int(args[0], spec), parse_number(args[1], spec));
  }
  if (family == "banana") {
    expect(2);
    return make_banana(parse_int(args[0], spec), parse_number(args[1], spec));
  }
  if (family == "normal") {
    expect(1);
    return make_normal_iid(parse_int(args[0], spec));
  }
  if (family == "aniso") {
    expect(1);
    return make_anisotropic_normal(parse_int(args[0], spec));
  }
  throw UsageError("unknown target family '" + family + "'");
}

}  // namespace automala
