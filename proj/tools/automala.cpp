#include "automala/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace automala;
using namespace automala::harness;

namespace {

std::vector<PreconditionerPreset> parse_presets(const std::vector<std::string>& names) {
  std::vector<PreconditionerPreset> out;
  for (const auto& n : names) out.push_back(parse_preset(n));
  return out;
}

void emit(const Table& table, const std::string& out_dir, const std::string& file_name) {
  if (out_dir.empty() && std::getenv("AUTOMALA_OUT_DIR") == nullptr) {
    std::cout << table.to_csv();
    return;
  }
  const auto dir = resolve_out_dir(out_dir);
  std::filesystem::create_directories(dir);
  const auto path = dir / file_name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path.string() + "' for writing");
  out << table.to_csv();
  std::cout << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"autoMALA sampler and experiment harness"};
  app.require_subcommand(1);

  // Flags shared by the sweep commands.
  SweepOptions sweep;
  std::string precond_name = "mixture";
  std::string out_dir;
  auto add_sweep_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seeds", sweep.seeds, "Seeds, one cell per seed")->delimiter(',');
    cmd->add_option("--rounds", sweep.rounds, "Tuning rounds R (final round has 2^R iterations)");
    cmd->add_option("--t-unadj", sweep.t_unadj, "Unadjusted iterations at the start of each round");
    cmd->add_option("--precond", precond_name, "identity | single | smooth | mixture");
    cmd->add_option("--jobs", sweep.jobs, "Worker threads");
    cmd->add_option("--out", out_dir, "Output directory (default: stdout, or $AUTOMALA_OUT_DIR)");
  };

  // run
  auto* run = app.add_subcommand("run", "Run one chain and write trace.csv, report.json, timing.json");
  RunConfig config;
  std::string config_path;
  std::string sampler_text = "automala";
  std::string run_precond;
  std::int64_t iterations = 0;
  run->add_option("--config", config_path, "JSON config; flags given on the command line override it");
  run->add_option("--target", config.target, "funnel(d,beta) | banana(d,beta) | normal(d) | aniso(c)");
  run->add_option("--sampler", sampler_text, "automala | mala(eps) | ula(h)");
  run->add_option("--rounds", config.rounds, "Tuning rounds R");
  run->add_option("--t-unadj", config.t_unadj, "Unadjusted iterations at the start of each round");
  run->add_option("--iterations", iterations, "Flat run of T iterations instead of rounds");
  run->add_option("--precond", run_precond, "identity | single | smooth | mixture");
  run->add_option("--seed", config.seed, "64-bit seed");
  run->add_option("--out", config.out_dir, "Output directory (default: $AUTOMALA_OUT_DIR or .)");

  // sweep-scale
  auto* sweep_scale = app.add_subcommand("sweep-scale", "Sweep the scale parameter of funnel or banana");
  std::string family = "funnel";
  int dimension = 2;
  std::vector<double> scales;
  sweep_scale->add_option("--family", family, "funnel | banana");
  sweep_scale->add_option("--d", dimension, "Dimension");
  sweep_scale->add_option("--scales", scales, "Scale grid (default: the standard grid)")->delimiter(',');
  add_sweep_flags(sweep_scale);

  // sweep-dim
  auto* sweep_dim = app.add_subcommand("sweep-dim", "Sweep the dimension");
  double beta = 2.0;
  std::vector<int> dims{2, 4, 8, 16, 32, 64};
  sweep_dim->add_option("--family", family, "funnel | banana | normal");
  sweep_dim->add_option("--beta", beta, "Scale parameter for funnel and banana");
  sweep_dim->add_option("--dims", dims, "Dimensions")->delimiter(',');
  add_sweep_flags(sweep_dim);

  // mala-grid
  auto* mala_grid = app.add_subcommand("mala-grid", "MALA acceptance over a step-size grid");
  std::string target = "funnel(2,2)";
  std::string mode_name = "relative";
  std::vector<int> exponents{-6, -5, -4, -3, -2, -1, 0, 1, 2, 3};
  mala_grid->add_option("--target", target, "Target");
  mala_grid->add_option("--mode", mode_name, "absolute (eps = 2^k) | relative (eps = eps_final * 2^k)");
  mala_grid->add_option("--exponents", exponents, "Grid exponents k")->delimiter(',');
  add_sweep_flags(mala_grid);

  // fixed-point
  auto* fixed_point = app.add_subcommand("fixed-point", "Estimate g(eps_init) along a grid eps_init = 2^k");
  std::vector<double> fp_exponents{-7, -6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7};
  std::int64_t samples = 4096;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string fp_target = "normal(1)";
  fixed_point->add_option("--target", fp_target, "Target with an exact sampler");
  fixed_point->add_option("--exponents", fp_exponents, "Grid exponents k")->delimiter(',');
  fixed_point->add_option("--samples", samples, "Stationary samples per grid point");
  fixed_point->add_option("--seed", seed, "64-bit seed");
  fixed_point->add_option("--jobs", jobs, "Worker threads");
  fixed_point->add_option("--out", out_dir, "Output directory (default: stdout, or $AUTOMALA_OUT_DIR)");

  // precond-ablation
  auto* ablation = app.add_subcommand("precond-ablation", "Compare preconditioner presets");
  std::vector<std::string> preset_names{"single", "smooth", "mixture"};
  std::string ablation_target = "aniso(4)";
  ablation->add_option("--target", ablation_target, "Target");
  ablation->add_option("--presets", preset_names, "Presets to compare")->delimiter(',');
  add_sweep_flags(ablation);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (!config_path.empty()) {
        RunConfig loaded = RunConfig::load(config_path);
        if (run->count("--target")) loaded.target = config.target;
        if (run->count("--rounds")) loaded.rounds = config.rounds;
        if (run->count("--t-unadj")) loaded.t_unadj = config.t_unadj;
        if (run->count("--seed")) loaded.seed = config.seed;
        if (run->count("--out")) loaded.out_dir = config.out_dir;
        config = loaded;
      }
      if (run->count("--sampler") || config_path.empty()) config.sampler = SamplerSpec::parse(sampler_text);
      if (run->count("--precond")) config.precond = parse_preset(run_precond);
      if (run->count("--iterations")) config.iterations = iterations;
      RunReport report;
      const RunFiles files = cmd_run(config, &report);
      for (const auto& w : report.history.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << files.trace.string() << "\n" << files.report.string() << "\n";
      return 0;
    }

    sweep.precond = parse_preset(precond_name);
    if (*sweep_scale) {
      if (scales.empty()) scales = default_scale_grid(family);
      emit(cmd_sweep_scale(family, dimension, scales, sweep), out_dir, "sweep_scale.csv");
    } else if (*sweep_dim) {
      emit(cmd_sweep_dimension(family, beta, dims, sweep), out_dir, "sweep_dim.csv");
    } else if (*mala_grid) {
      GridMode mode;
      if (mode_name == "absolute") {
        mode = GridMode::absolute;
      } else if (mode_name == "relative") {
        mode = GridMode::relative;
      } else {
        throw UsageError("--mode must be absolute or relative");
      }
      emit(cmd_mala_grid(target, mode, exponents, sweep), out_dir, "mala_grid.csv");
    } else if (*fixed_point) {
      const Table table = cmd_fixed_point(fp_target, fp_exponents, samples, seed, jobs);
      emit(table, out_dir, "fixed_point.csv");
      std::cerr << "sign changes of g_hat - eps_init: " << count_sign_changes(table) << "\n";
    } else if (*ablation) {
      emit(cmd_precond_ablation(ablation_target, parse_presets(preset_names), sweep), out_dir, "precond_ablation.csv");
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
