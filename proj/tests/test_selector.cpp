#include "automala/selector.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace automala;

namespace {

Vector vec1(double v) { return Vector::Constant(1, v); }

// Textbook transcription of the search used as an oracle: every step is
// recomputed from scratch through the public leapfrog.
struct Reference {
  double eps;
  int j;
  int n_leapfrog;
};

double ell_at(const TargetDensity& target, const DiagonalMass& mass, const AugmentedState& s, double eps) {
  try {
    const PhasePoint end = leapfrog(target, mass, s.x, s.p, eps);
    return joint_log_density(target, mass, end.x, end.p) - joint_log_density(target, mass, s.x, s.p);
  } catch (const DomainError&) {
    return -INFINITY;
  }
}

Reference reference_search(const TargetDensity& target, const DiagonalMass& mass, const AugmentedState& s,
                           double eps_init) {
  const double log_a = std::log(s.thresholds.a);
  const double log_b = std::log(s.thresholds.b);
  double eps = eps_init;
  int j = 0;
  int n = 1;
  double ell = ell_at(target, mass, s, eps);
  const int delta = (ell >= log_b ? 1 : 0) - (ell <= log_a ? 1 : 0);
  if (delta == 0) return {eps_init, 0, 1};
  while (true) {
    eps = delta == 1 ? eps * 2 : eps / 2;
    j += delta;
    ++n;
    ell = ell_at(target, mass, s, eps);
    if (delta == 1 && !(ell >= log_b)) return {eps / 2, j - 1, n};
    if (delta == -1 && !(ell <= log_a)) return {eps, j, n};
  }
}

}  // namespace

TEST_CASE("initial direction") {
  CHECK(initial_direction(-0.125, 0.3, 0.7) == 1);
  CHECK(initial_direction(-0.125, 0.95, 0.99) == -1);
  CHECK(initial_direction(std::log(std::sqrt(0.3 * 0.7)), 0.3, 0.7) == 0);
  CHECK(initial_direction(-INFINITY, 0.3, 0.7) == -1);
  CHECK(initial_direction(std::log(0.7), 0.3, 0.7) == 1);
  CHECK(initial_direction(std::log(0.3), 0.3, 0.7) == -1);
}

TEST_CASE("step size from exponent") {
  CHECK(step_size_from_exponent(1.0, 3) == 8.0);
  CHECK(step_size_from_exponent(1.0, -2) == 0.25);
  CHECK(step_size_from_exponent(step_size_from_exponent(0.3, 1), -1) == 0.3);
  CHECK_THROWS_AS(step_size_from_exponent(1.0, 61), TerminationGuardError);
  CHECK_THROWS_AS(step_size_from_exponent(1.0, -61), TerminationGuardError);
  CHECK_THROWS_AS(step_size_from_exponent(1e-300, -60), TerminationGuardError);
  CHECK_THROWS_AS(step_size_from_exponent(1e300, 60), TerminationGuardError);
}

TEST_CASE("selector hand cases on the standard normal") {
  const auto normal = make_normal_iid(1);
  const DiagonalMass mass = DiagonalMass::identity(1);

  // ell(1) = -0.125 >= log 0.7, ell(2) = -2 < log 0.7: double once, halve back.
  const StepSizeDecision up = select_step_size(*normal, mass, {vec1(0), vec1(1), {0.3, 0.7}}, 1.0);
  CHECK(up.eps == 1.0);
  CHECK(up.j == 0);
  CHECK(up.n_leapfrog == 2);
  CHECK(up.proposal.x[0] == 1.0);
  CHECK(up.proposal.p[0] == -0.5);

  // ell(1) = -0.125 <= log 0.95, ell(0.5) = -0.0078 > log 0.95.
  const StepSizeDecision down = select_step_size(*normal, mass, {vec1(0), vec1(1), {0.95, 0.99}}, 1.0);
  CHECK(down.eps == 0.5);
  CHECK(down.j == -1);
  CHECK(down.n_leapfrog == 2);

  // ell(1) = -0.125 lies strictly inside (log 0.5, log 0.95).
  const StepSizeDecision stay = select_step_size(*normal, mass, {vec1(0), vec1(1), {0.5, 0.95}}, 1.0);
  CHECK(stay.eps == 1.0);
  CHECK(stay.j == 0);
  CHECK(stay.n_leapfrog == 1);
}

TEST_CASE("selector matches a reference transcription") {
  Rng rng(31);
  for (const auto& spec : testing::builtin_target_specs()) {
    CAPTURE(spec);
    const auto target = parse_target(spec);
    const Eigen::Index d = target->dimension();
    for (int n = 0; n < 200; ++n) {
      Vector scale(d);
      for (Eigen::Index i = 0; i < d; ++i) scale[i] = std::exp(rng.normal() * 0.5);
      const DiagonalMass mass(scale);
      const AugmentedState s{target->sample_exact(rng), sample_momentum(mass, rng), sample_thresholds(rng)};
      const double eps_init = std::exp(rng.normal() * 2.0);
      const StepSizeDecision got = select_step_size(*target, mass, s, eps_init);
      const Reference want = reference_search(*target, mass, s, eps_init);
      CHECK(got.j == want.j);
      CHECK(got.eps == want.eps);
      CHECK(got.n_leapfrog == want.n_leapfrog);
      CHECK(got.eps == std::ldexp(eps_init, got.j));
    }
  }
}

TEST_CASE("doubling branch needs the final halving") {
  Rng rng(37);
  int cases = 0;
  for (const std::string spec : {"normal(1)", "normal(3)", "aniso(0)"}) {
    const auto target = parse_target(spec);
    const DiagonalMass mass = DiagonalMass::identity(target->dimension());
    while (cases < 1000) {
      const AugmentedState s{target->sample_exact(rng), sample_momentum(mass, rng), sample_thresholds(rng)};
      const double eps_init = std::exp(rng.normal() * 2.0 - 2.0);
      const StepSizeDecision dec = select_step_size(*target, mass, s, eps_init);
      const double ell1 = ell_at(*target, mass, s, eps_init);
      if (!(ell1 >= std::log(s.thresholds.b))) continue;  // not a doubling run
      const double eps_last = 2.0 * dec.eps;
      const PhasePoint end = leapfrog(*target, mass, s.x, s.p, eps_last);
      const double ell = joint_log_density(*target, mass, end.x, end.p) - joint_log_density(*target, mass, s.x, s.p);
      const AugmentedState s_end{end.x, end.p, s.thresholds};
      const double ell_back = ell_at(*target, mass, s_end, eps_last);
      CHECK(ell < std::log(s.thresholds.b));
      CHECK(std::abs(ell + ell_back) <= 1e-8);
      CHECK(ell_back > std::log(s.thresholds.b));
      ++cases;
      if (cases % 400 == 0) break;
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("n_leapfrog counts target evaluations") {
  Rng rng(41);
  for (const auto& spec : testing::builtin_target_specs()) {
    CAPTURE(spec);
    testing::CountingTarget target(parse_target(spec));
    const DiagonalMass mass = DiagonalMass::identity(target.dimension());
    for (int n = 0; n < 100; ++n) {
      const Vector x = target.sample_exact(rng);
      const Evaluation start = target.evaluate(x);
      const AugmentedState s{x, sample_momentum(mass, rng), sample_thresholds(rng)};
      target.reset();
      const StepSizeDecision dec = select_step_size(target, mass, s, start, 0.5);
      CHECK(dec.n_leapfrog == target.count());
    }
  }
}

TEST_CASE("the guard fires on a flat target with zero momentum") {
  const auto flat = make_custom_target(
      2, "flat", [](const Vector&) { return 0.0; }, [](const Vector&) { return Vector::Zero(2); });
  const DiagonalMass mass = DiagonalMass::identity(2);
  const AugmentedState s{Vector::Zero(2), Vector::Zero(2), {0.3, 0.7}};
  CHECK_THROWS_AS(select_step_size(*flat, mass, s, 1.0), TerminationGuardError);
  try {
    select_step_size(*flat, mass, s, 1.0);
  } catch (const TerminationGuardError& e) {
    CHECK(std::string(e.what()).find("eps_init=1") != std::string::npos);
  }
}

TEST_CASE("selector usage errors") {
  const auto normal = make_normal_iid(1);
  const DiagonalMass mass = DiagonalMass::identity(1);
  CHECK_THROWS_AS(select_step_size(*normal, mass, {vec1(0), vec1(1), {0.7, 0.3}}, 1.0), UsageError);
  CHECK_THROWS_AS(select_step_size(*normal, mass, {vec1(0), vec1(1), {0.0, 0.3}}, 1.0), UsageError);
  CHECK_THROWS_AS(select_step_size(*normal, mass, {vec1(0), vec1(1), {0.3, 0.7}}, 0.0), UsageError);
  CHECK_THROWS_AS(select_step_size(*normal, mass, {vec1(0), vec1(1), {0.3, 0.7}}, INFINITY), UsageError);
}

TEST_CASE("reversibility compares exponents only") {
  StepSizeDecision fwd, rev;
  fwd.j = rev.j = -3;
  fwd.eps = 0.125;
  rev.eps = std::nextafter(0.125, 1.0);
  CHECK(reversibility_check(fwd, rev));
  rev.j = -2;
  rev.eps = 0.125;
  CHECK_FALSE(reversibility_check(fwd, rev));
}
