#include "automala/selector.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace automala {

namespace {

std::string describe(const AugmentedState& s, double eps_init) {
  Eigen::IOFormat fmt(Eigen::FullPrecision, Eigen::DontAlignCols, ", ", ", ", "", "", "(", ")");
  std::ostringstream os;
  os << "x=" << s.x.transpose().format(fmt) << " p=" << s.p.transpose().format(fmt)
     << " a=" << format_double(s.thresholds.a) << " b=" << format_double(s.thresholds.b)
     << " eps_init=" << format_double(eps_init);
  return os.str();
}

}  // namespace

int initial_direction(double ell, double a, double b) {
  return static_cast<int>(ell >= std::log(b)) - static_cast<int>(ell <= std::log(a));
}

double step_size_from_exponent(double eps_init, int j, int max_exponent) {
  if (std::abs(j) > max_exponent) {
    throw TerminationGuardError("step-size exponent " + std::to_string(j) + " exceeds the cap of " +
                                std::to_string(max_exponent));
  }
  const double eps = std::ldexp(eps_init, j);
  if (!std::isnormal(eps)) {
    throw TerminationGuardError("step size " + format_double(eps_init) + " * 2^" + std::to_string(j) +
                                " is not representable");
  }
  return eps;
}

StepSizeDecision select_step_size(const TargetDensity& target, const DiagonalMass& mass,
                                  const AugmentedState& s, double eps_init, int max_exponent) {
  const Evaluation start = target.evaluate(s.x);
  if (!start.in_support()) throw UsageError("step-size search started outside the support");
  return select_step_size(target, mass, s, start, eps_init, max_exponent);
}

StepSizeDecision select_step_size(const TargetDensity& target, const DiagonalMass& mass,
                                  const AugmentedState& s, const Evaluation& start, double eps_init,
                                  int max_exponent) {
  if (!(eps_init > 0.0) || !std::isfinite(eps_init)) throw UsageError("eps_init must be positive and finite");
  const auto [a, b] = s.thresholds;
  if (!(0.0 < a && a < b && b < 1.0)) throw UsageError("thresholds must satisfy 0 < a < b < 1");

  const double joint_start = joint_log_density(start.log_density, mass, s.p);
  if (!std::isfinite(joint_start)) throw UsageError("step-size search needs a finite joint density at s");
  const double log_a = std::log(a);
  const double log_b = std::log(b);

  auto log_ratio = [&](const LeapfrogEnd& end) {
    if (!end.in_support()) return kNegInf;
    return joint_log_density(end.eval.log_density, mass, end.p) - joint_start;
  };

  StepSizeDecision out;
  LeapfrogEnd end = leapfrog_step(target, mass, s.x, start.gradient, s.p, eps_init);
  out.n_leapfrog = 1;
  double ell = log_ratio(end);
  const int delta = initial_direction(ell, a, b);
  if (delta == 0) {
    out.eps = eps_init;
    out.j = 0;
    out.proposal = std::move(end);
    return out;
  }

  int j = 0;
  LeapfrogEnd previous = std::move(end);
  while (true) {
    j += delta;
    if (std::abs(j) > max_exponent) {
      throw TerminationGuardError("step-size search did not terminate within 2^" + std::to_string(max_exponent) +
                                  " scaling at " + describe(s, eps_init));
    }
    double eps = 0.0;
    try {
      eps = step_size_from_exponent(eps_init, j, max_exponent);
    } catch (const TerminationGuardError& e) {
      throw TerminationGuardError(std::string(e.what()) + " at " + describe(s, eps_init));
    }
    end = leapfrog_step(target, mass, s.x, start.gradient, s.p, eps);
    ++out.n_leapfrog;
    ell = log_ratio(end);
    if (delta == 1 && ell < log_b) {
      out.j = j - 1;
      out.eps = step_size_from_exponent(eps_init, out.j, max_exponent);
      out.proposal = std::move(previous);
      return out;
    }
    if (delta == -1 && ell > log_a) {
      out.j = j;
      out.eps = eps;
      out.proposal = std::move(end);
      return out;
    }
    previous = std::move(end);
  }
}

}  // namespace automala
