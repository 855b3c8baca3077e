#pragma once

#include "automala/adaptation.hpp"
#include "automala/diagnostics.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace automala::harness {

using json = nlohmann::ordered_json;

enum class SamplerKind { automala, mala, ula };

/// `automala`, `mala(eps)` or `ula(h)`.
struct SamplerSpec {
  SamplerKind kind = SamplerKind::automala;
  double step = 0.0;  // eps for MALA, h for ULA

  static SamplerSpec parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const SamplerSpec&) const = default;
};

/// Everything needed to reproduce one chain.
struct RunConfig {
  std::string target = "normal(2)";
  SamplerSpec sampler;
  int rounds = 14;
  int t_unadj = 1;
  /// Flat run of this many iterations instead of the round schedule.
  std::optional<std::int64_t> iterations;
  PreconditionerPreset precond = PreconditionerPreset::mixture;
  std::uint64_t seed = 1;
  std::string out_dir;

  void validate() const;
  bool operator==(const RunConfig&) const = default;

  /// Every field, including out_dir.
  json to_json() const;
  /// Rejects unknown keys and ill-typed values, naming the offending field.
  static RunConfig from_json(const json& j);
  static RunConfig load(const std::filesystem::path& path);

  /// FNV-1a hash of the canonical JSON without out_dir, as 16 hex digits.
  std::string fingerprint() const;
};

/// Output of one chain before analysis.
struct RunOutcome {
  ChainTrace trace;        // retained (final-phase) iterations
  TuningHistory history;   // empty rounds for MALA / ULA
  double eps_final = 0.0;  // eps_init after tuning, or the fixed step
  double wall_time_seconds = 0.0;
};

RunOutcome run_chain(const RunConfig& config);

struct MarginSummary {
  Eigen::Index index = 0;
  double mean = 0.0;
  double variance = 0.0;
  double ks = 0.0;
};

/// Quantities computed from a persisted trace alone.
struct TraceAnalysis {
  std::size_t n_samples = 0;
  std::optional<EssReport> ess;  // needs at least 8 samples
  std::int64_t n_leapfrog_total = 0;  // warmup included
  double mean_acceptance = 0.0;
  double accepted_fraction = 0.0;
  double reversibility_failure_rate = 0.0;
  std::optional<MarginSummary> margin;
  std::optional<double> leapfrogs_per_kiloess;
};

TraceAnalysis analyze_trace(const ChainTrace& trace, const TargetDensity& target);

struct RunReport {
  RunConfig config;
  TuningHistory history;
  TraceAnalysis analysis;
  double eps_final = 0.0;
  double wall_time_seconds = 0.0;
};

/// The report document. Wall time is left out so the file is a pure
/// function of the config; it goes to a separate timing file.
json report_to_json(const RunReport& report);
json analysis_to_json(const TraceAnalysis& analysis);

/// Comma-separated trace: iter, x1..xd, eps_t, alpha, accepted,
/// reversibility_ok, unadjusted, n_leapfrog, cum_leapfrog. Reals use 17
/// significant digits.
void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace);
ChainTrace read_trace_csv(const std::filesystem::path& path);

struct RunFiles {
  std::filesystem::path trace;
  std::filesystem::path report;
  std::filesystem::path timing;
};

/// Runs the chain and writes trace.csv, report.json and timing.json into
/// config.out_dir (or the AUTOMALA_OUT_DIR directory, or the current one).
RunFiles cmd_run(const RunConfig& config, RunReport* report_out = nullptr);

std::filesystem::path resolve_out_dir(const std::string& requested);

/// A delimited result table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  std::size_t column(const std::string& name) const;
};

struct SweepOptions {
  std::vector<std::uint64_t> seeds{1};
  int rounds = 14;
  int t_unadj = 1;
  PreconditionerPreset precond = PreconditionerPreset::mixture;
  int jobs = 1;
};

/// Default scale grids: funnel beta in {1/0.2, 1/0.4, ..., 1/4.0}, banana
/// beta in {2^13, ..., 2^-6}.
std::vector<double> default_scale_grid(const std::string& family);

Table cmd_sweep_scale(const std::string& family, int d, const std::vector<double>& scales,
                      const SweepOptions& options);

/// `beta` is ignored for the normal family.
Table cmd_sweep_dimension(const std::string& family, double beta, const std::vector<int>& dims,
                          const SweepOptions& options);

enum class GridMode { absolute, relative };

/// autoMALA to convergence, then MALA at each grid step size. In absolute
/// mode the grid values are the exponents k of eps = 2^k; in relative mode
/// eps = eps_final * 2^k.
Table cmd_mala_grid(const std::string& target, GridMode mode, const std::vector<int>& exponents,
                    const SweepOptions& options);

/// Estimates g(eps_init) at eps_init = 2^k for every k in the grid.
Table cmd_fixed_point(const std::string& target, const std::vector<double>& exponents,
                      std::int64_t samples_per_point, std::uint64_t seed, int jobs = 1);

/// Number of sign changes of g_hat - eps_init along a fixed-point table.
int count_sign_changes(const Table& fixed_point_table);

Table cmd_precond_ablation(const std::string& target, const std::vector<PreconditionerPreset>& presets,
                           const SweepOptions& options);

}  // namespace automala::harness
