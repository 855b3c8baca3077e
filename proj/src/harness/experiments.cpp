#include "automala/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace automala::harness {

namespace {

using Row = std::vector<std::string>;
using Rows = std::vector<Row>;

std::string cell(double v) { return format_double(v); }
std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

// Error text must not break the table layout.
std::string sanitize(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

/// Runs `cell_fn` for cells 0..n-1 on up to `jobs` threads. Rows come back in
/// cell order whatever order the cells finish in. A throwing cell yields the
/// rows produced by `on_failure`.
Rows run_cells(std::size_t n, int jobs, const std::function<Rows(std::size_t)>& cell_fn,
               const std::function<Rows(std::size_t, const std::string&)>& on_failure) {
  std::vector<Rows> results(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = cell_fn(i);
      } catch (const std::exception& e) {
        results[i] = on_failure(i, sanitize(e.what()));
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs < 1 ? 1 : static_cast<std::size_t>(jobs), 1, std::max<std::size_t>(n, 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  Rows rows;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(rows));
  return rows;
}

const Row kMetricColumns{"status",          "error",     "n_samples",   "n_leapfrog_total",
                         "min_ess",         "leapfrogs_per_kiloess", "mean_acceptance",
                         "margin_mean",     "margin_variance",       "ks",
                         "eps_final"};

Row metric_cells(const TraceAnalysis& a, double eps_final) {
  Row row{"ok", ""};
  row.push_back(std::to_string(a.n_samples));
  row.push_back(std::to_string(a.n_leapfrog_total));
  row.push_back(a.ess ? cell(a.ess->min_ess) : "");
  row.push_back(cell(a.leapfrogs_per_kiloess));
  row.push_back(cell(a.mean_acceptance));
  row.push_back(a.margin ? cell(a.margin->mean) : "");
  row.push_back(a.margin ? cell(a.margin->variance) : "");
  row.push_back(a.margin ? cell(a.margin->ks) : "");
  row.push_back(cell(eps_final));
  return row;
}

Row failed_cells(std::size_t width, const std::string& error) {
  Row row{"failed", error};
  row.resize(width);
  return row;
}

Row concat(Row a, const Row& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

RunConfig automala_config(const std::string& target, std::uint64_t seed, const SweepOptions& options) {
  RunConfig config;
  config.target = target;
  config.rounds = options.rounds;
  config.t_unadj = options.t_unadj;
  config.precond = options.precond;
  config.seed = seed;
  return config;
}

void require_nonempty(bool empty, const std::string& what) {
  if (empty) throw UsageError(what + " must not be empty");
}

/// One row per (target, seed) cell with the standard metric columns.
Table metric_sweep(Row key_header, const std::vector<std::pair<Row, std::string>>& targets,
                   const SweepOptions& options) {
  require_nonempty(options.seeds.empty(), "seed list");
  Table table;
  table.header = concat(key_header, concat({"seed"}, kMetricColumns));
  const std::size_t n_seeds = options.seeds.size();
  auto key = [&](std::size_t i) { return concat(targets[i / n_seeds].first, {std::to_string(options.seeds[i % n_seeds])}); };
  table.rows = run_cells(
      targets.size() * n_seeds, options.jobs,
      [&](std::size_t i) {
        const RunConfig config = automala_config(targets[i / n_seeds].second, options.seeds[i % n_seeds], options);
        const RunOutcome outcome = run_chain(config);
        const TraceAnalysis analysis = analyze_trace(outcome.trace, *parse_target(config.target));
        return Rows{concat(key(i), metric_cells(analysis, outcome.eps_final))};
      },
      [&](std::size_t i, const std::string& error) {
        return Rows{concat(key(i), failed_cells(kMetricColumns.size(), error))};
      });
  return table;
}

}  // namespace

std::string Table::to_csv() const {
  std::string out;
  auto line = [&out](const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += row[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out;
}

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw UsageError("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> default_scale_grid(const std::string& family) {
  std::vector<double> grid;
  if (family == "funnel") {
    for (int i = 1; i <= 20; ++i) grid.push_back(1.0 / (0.2 * i));
  } else if (family == "banana") {
    for (int k = 13; k >= -6; --k) grid.push_back(std::ldexp(1.0, k));
  } else {
    throw UsageError("scale sweeps support funnel and banana, not '" + family + "'");
  }
  return grid;
}

Table cmd_sweep_scale(const std::string& family, int d, const std::vector<double>& scales,
                      const SweepOptions& options) {
  if (family != "funnel" && family != "banana") {
    throw UsageError("scale sweeps support funnel and banana, not '" + family + "'");
  }
  require_nonempty(scales.empty(), "scale grid");
  std::vector<std::pair<Row, std::string>> targets;
  for (double beta : scales) {
    const std::string target = family + "(" + std::to_string(d) + "," + format_double(beta) + ")";
    targets.push_back({{family, std::to_string(d), format_double(beta)}, target});
  }
  return metric_sweep({"family", "d", "scale"}, targets, options);
}

Table cmd_sweep_dimension(const std::string& family, double beta, const std::vector<int>& dims,
                          const SweepOptions& options) {
  if (family != "funnel" && family != "banana" && family != "normal") {
    throw UsageError("dimension sweeps support funnel, banana and normal, not '" + family + "'");
  }
  require_nonempty(dims.empty(), "dimension list");
  std::vector<std::pair<Row, std::string>> targets;
  for (int d : dims) {
    if (d < 1) throw UsageError("dimensions must be positive");
    const std::string target = family == "normal"
                                   ? "normal(" + std::to_string(d) + ")"
                                   : family + "(" + std::to_string(d) + "," + format_double(beta) + ")";
    targets.push_back({{family, std::to_string(d)}, target});
  }
  return metric_sweep({"family", "d"}, targets, options);
}

Table cmd_mala_grid(const std::string& target, GridMode mode, const std::vector<int>& exponents,
                    const SweepOptions& options) {
  require_nonempty(exponents.empty(), "step-size grid");
  require_nonempty(options.seeds.empty(), "seed list");
  parse_target(target);
  const std::string mode_name = mode == GridMode::absolute ? "absolute" : "relative";

  Table table;
  table.header = {"target", "mode", "seed", "k", "eps", "automala_eps_final", "automala_acceptance",
                  "mala_acceptance", "status", "error"};
  auto key = [&](std::size_t i, int k) {
    return Row{target, mode_name, std::to_string(options.seeds[i]), std::to_string(k)};
  };
  // One cell per seed: the autoMALA run is shared by every grid point.
  table.rows = run_cells(
      options.seeds.size(), options.jobs,
      [&](std::size_t i) {
        const RunConfig base = automala_config(target, options.seeds[i], options);
        const TargetPtr density = parse_target(target);
        const RunOutcome tuned = run_chain(base);
        const std::string auto_acc = cell(tuned.trace.mean_acceptance_probability());
        Rows rows;
        for (int k : exponents) {
          const double eps = mode == GridMode::absolute ? std::ldexp(1.0, k) : std::ldexp(tuned.eps_final, k);
          Row row = concat(key(i, k), {cell(eps), cell(tuned.eps_final), auto_acc});
          try {
            RunConfig config = base;
            config.sampler = SamplerSpec{SamplerKind::mala, eps};
            const RunOutcome mala = run_chain(config);
            rows.push_back(concat(row, {cell(mala.trace.mean_acceptance_probability()), "ok", ""}));
          } catch (const std::exception& e) {
            rows.push_back(concat(row, {"", "failed", sanitize(e.what())}));
          }
        }
        return rows;
      },
      [&](std::size_t i, const std::string& error) {
        Rows rows;
        for (int k : exponents) rows.push_back(concat(key(i, k), {"", "", "", "", "failed", error}));
        return rows;
      });
  return table;
}

Table cmd_fixed_point(const std::string& target, const std::vector<double>& exponents,
                      std::int64_t samples_per_point, std::uint64_t seed, int jobs) {
  require_nonempty(exponents.empty(), "step-size grid");
  const TargetPtr density = parse_target(target);
  if (!density->has_exact_sampler()) throw UsageError(target + " has no exact sampler");
  if (samples_per_point < 1) throw UsageError("samples per point must be positive");
  const DiagonalMass mass = DiagonalMass::identity(density->dimension());

  Table table;
  table.header = {"k", "eps_init", "g_hat", "g_minus_eps", "status", "error"};
  table.rows = run_cells(
      exponents.size(), jobs,
      [&](std::size_t i) {
        const double eps_init = std::exp2(exponents[i]);
        Rng rng(seed, i + 1);
        const double g = estimate_step_size_objective(*density, mass, eps_init, samples_per_point, rng);
        return Rows{{cell(exponents[i]), cell(eps_init), cell(g), cell(g - eps_init), "ok", ""}};
      },
      [&](std::size_t i, const std::string& error) {
        return Rows{{cell(exponents[i]), cell(std::exp2(exponents[i])), "", "", "failed", error}};
      });
  return table;
}

int count_sign_changes(const Table& fixed_point_table) {
  const std::size_t col = fixed_point_table.column("g_minus_eps");
  int changes = 0;
  int previous = 0;
  for (const auto& row : fixed_point_table.rows) {
    if (row[col].empty()) continue;
    const double v = std::stod(row[col]);
    const int sign = (v > 0.0) - (v < 0.0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) ++changes;
    previous = sign;
  }
  return changes;
}

Table cmd_precond_ablation(const std::string& target, const std::vector<PreconditionerPreset>& presets,
                           const SweepOptions& options) {
  require_nonempty(presets.empty(), "preset list");
  require_nonempty(options.seeds.empty(), "seed list");
  const TargetPtr density = parse_target(target);
  const auto margin = density->known_margin();

  Table table;
  table.header = {"target", "preset", "seed"};
  table.header = concat(table.header, kMetricColumns);
  table.header = concat(table.header, {"margin_mean_error", "margin_variance_error"});
  const std::size_t n_seeds = options.seeds.size();
  auto key = [&](std::size_t i) {
    return Row{target, to_string(presets[i / n_seeds]), std::to_string(options.seeds[i % n_seeds])};
  };
  table.rows = run_cells(
      presets.size() * n_seeds, options.jobs,
      [&](std::size_t i) {
        RunConfig config = automala_config(target, options.seeds[i % n_seeds], options);
        config.precond = presets[i / n_seeds];
        const RunOutcome outcome = run_chain(config);
        const TraceAnalysis a = analyze_trace(outcome.trace, *density);
        Row row = concat(key(i), metric_cells(a, outcome.eps_final));
        if (margin && a.margin) {
          row.push_back(cell(a.margin->mean - margin->mean));
          row.push_back(cell(a.margin->variance - margin->sd * margin->sd));
        } else {
          row.insert(row.end(), {"", ""});
        }
        return Rows{row};
      },
      [&](std::size_t i, const std::string& error) {
        return Rows{concat(key(i), failed_cells(kMetricColumns.size() + 2, error))};
      });
  return table;
}

}  // namespace automala::harness
