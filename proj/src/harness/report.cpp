#include "automala/harness.hpp"

#include <cmath>

namespace automala::harness {

namespace {

constexpr std::size_t kMinSamplesForEss = 8;

json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json real(const std::optional<double>& v) { return v ? real(*v) : json(nullptr); }

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(real(v[i]));
  return out;
}

}  // namespace

TraceAnalysis analyze_trace(const ChainTrace& trace, const TargetDensity& target) {
  TraceAnalysis a;
  a.n_samples = trace.size();
  a.n_leapfrog_total = trace.n_leapfrog_before + trace.n_leapfrog_total;
  a.mean_acceptance = trace.mean_acceptance_probability();
  a.accepted_fraction = trace.accepted_fraction();
  a.reversibility_failure_rate = trace.reversibility_failure_rate();
  if (trace.empty()) return a;

  const auto margin = target.known_margin();
  if (trace.size() >= kMinSamplesForEss) {
    a.ess = min_ess(trace.positions, margin);
    a.leapfrogs_per_kiloess = leapfrogs_per_kiloess(a.n_leapfrog_total, *a.ess);
  }
  if (margin) {
    const std::vector<double> values = trace.coordinate(margin->index);
    const Moments m = sample_moments(values);
    a.margin = MarginSummary{margin->index, m.mean, m.variance, ks_statistic(values, margin->cdf)};
  }
  return a;
}

json analysis_to_json(const TraceAnalysis& a) {
  json j;
  j["n_samples"] = a.n_samples;
  j["n_leapfrog_total"] = a.n_leapfrog_total;
  j["mean_acceptance"] = real(a.mean_acceptance);
  j["accepted_fraction"] = real(a.accepted_fraction);
  j["reversibility_failure_rate"] = real(a.reversibility_failure_rate);
  if (a.ess) {
    json ess;
    ess["ess_batch"] = real(a.ess->ess_batch);
    ess["ess_autocov"] = real(a.ess->ess_autocov);
    ess["ess_known"] = real(a.ess->ess_known);
    ess["min_ess"] = real(a.ess->min_ess);
    ess["degenerate"] = a.ess->degenerate;
    json per = json::array();
    for (const auto& c : a.ess->per_coordinate) per.push_back({{"batch", real(c.batch)}, {"autocov", real(c.autocov)}});
    ess["per_coordinate"] = std::move(per);
    j["ess"] = std::move(ess);
  } else {
    j["ess"] = nullptr;
  }
  j["leapfrogs_per_kiloess"] = real(a.leapfrogs_per_kiloess);
  if (a.margin) {
    j["margin"] = {{"coordinate", a.margin->index + 1},
                   {"mean", real(a.margin->mean)},
                   {"variance", real(a.margin->variance)},
                   {"ks", real(a.margin->ks)}};
  } else {
    j["margin"] = nullptr;
  }
  return j;
}

json report_to_json(const RunReport& r) {
  json j;
  j["fingerprint"] = r.config.fingerprint();
  json config = r.config.to_json();
  config.erase("out_dir");
  j["config"] = std::move(config);
  j["eps_final"] = real(r.eps_final);

  json rounds = json::array();
  for (const auto& rec : r.history.rounds) {
    json row;
    row["round"] = rec.round;
    row["iterations"] = rec.iterations;
    row["eps_init"] = real(rec.eps_init);
    row["eps_init_next"] = real(rec.eps_init_next);
    row["diag_std"] = vector_json(rec.diag_std);
    row["mean_acceptance"] = real(rec.mean_acceptance);
    row["reversibility_failure_rate"] = real(rec.reversibility_failure_rate);
    row["n_leapfrog"] = rec.n_leapfrog;
    rounds.push_back(std::move(row));
  }
  j["tuning"] = {{"rounds", std::move(rounds)},
                 {"warnings", r.history.warnings},
                 {"n_leapfrog_total", r.history.n_leapfrog_total}};
  j["analysis"] = analysis_to_json(r.analysis);
  return j;
}

}  // namespace automala::harness
