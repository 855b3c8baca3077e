#include "automala/harness.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <limits>

namespace automala::harness {

namespace {

ChainTrace run_fixed_step(const TargetDensity& target, const SamplerSpec& sampler, Vector x,
                          std::int64_t warmup, std::int64_t retained, Rng& rng) {
  const DiagonalMass mass = DiagonalMass::identity(target.dimension());
  TargetPoint current = evaluate_point(target, x);
  ChainTrace trace;
  std::int64_t warmup_leapfrogs = 0;
  for (std::int64_t t = 0; t < warmup + retained; ++t) {
    StepResult step;
    const bool unadjusted = sampler.kind == SamplerKind::ula;
    if (unadjusted) {
      Vector next = ula_step(target, mass, current.x, sampler.step, rng);
      const Evaluation eval = target.evaluate(next);
      if (!eval.in_support()) throw DomainError("ULA left the support of " + target.name());
      step.next = TargetPoint{std::move(next), eval};
      step.accepted = true;
      step.alpha = std::numeric_limits<double>::quiet_NaN();
      step.eps_forward = step.eps_reverse = step.eps_t = sampler.step;
      step.n_leapfrog = 1;
    } else {
      step = mala_step(target, mass, current, sampler.step, rng);
    }
    current = step.next;
    if (t < warmup) {
      warmup_leapfrogs += step.n_leapfrog;
    } else {
      trace.append(step, unadjusted);
    }
  }
  trace.n_leapfrog_before = warmup_leapfrogs;
  return trace;
}

}  // namespace

RunOutcome run_chain(const RunConfig& config) {
  config.validate();
  const TargetPtr target = parse_target(config.target);
  Rng rng(config.seed);
  const Vector x0 = Vector::Zero(target->dimension());
  const auto start = std::chrono::steady_clock::now();

  RunOutcome out;
  if (config.sampler.kind == SamplerKind::automala) {
    const EtaDistribution eta = EtaDistribution::from_preset(config.precond);
    if (config.iterations) {
      RoundResult round = run_round(*target, x0, *config.iterations, 1.0,
                                    PreconditionerEstimate::identity(target->dimension()), config.t_unadj, eta, rng);
      out.trace = std::move(round.trace);
      out.eps_final = round.eps_init_next;
    } else {
      TuningResult tuned = run_rounds(*target, x0, RoundSchedule{config.rounds, config.t_unadj}, eta, rng);
      out.trace = std::move(tuned.final_trace);
      out.history = std::move(tuned.history);
      out.eps_final = tuned.eps_init_final;
    }
  } else {
    // Same leapfrog budget shape as the round schedule: 2 + 4 + ... + 2^(R-1)
    // warmup iterations, then 2^R retained.
    std::int64_t warmup = 0;
    std::int64_t retained = 0;
    if (config.iterations) {
      retained = *config.iterations;
    } else {
      retained = RoundSchedule::iterations_in_round(config.rounds);
      warmup = retained - 2;
    }
    out.trace = run_fixed_step(*target, config.sampler, x0, warmup, retained, rng);
    out.eps_final = config.sampler.step;
  }
  out.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::filesystem::path resolve_out_dir(const std::string& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv("AUTOMALA_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw UsageError("failed writing '" + path.string() + "'");
}

}  // namespace

RunFiles cmd_run(const RunConfig& config, RunReport* report_out) {
  config.validate();
  const std::filesystem::path dir = resolve_out_dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir.string() + "': " + ec.message());

  RunOutcome outcome = run_chain(config);
  const TargetPtr target = parse_target(config.target);

  RunReport report;
  report.config = config;
  report.history = std::move(outcome.history);
  report.analysis = analyze_trace(outcome.trace, *target);
  report.eps_final = outcome.eps_final;
  report.wall_time_seconds = outcome.wall_time_seconds;

  RunFiles files{dir / "trace.csv", dir / "report.json", dir / "timing.json"};
  write_trace_csv(files.trace, outcome.trace);
  write_text(files.report, report_to_json(report).dump(2) + "\n");
  json timing;
  timing["fingerprint"] = config.fingerprint();
  timing["wall_time_seconds"] = report.wall_time_seconds;
  write_text(files.timing, timing.dump(2) + "\n");

  if (report_out != nullptr) *report_out = std::move(report);
  return files;
}

}  // namespace automala::harness
