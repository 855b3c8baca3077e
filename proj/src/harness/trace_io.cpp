#include "automala/harness.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace automala::harness {

namespace {

constexpr std::size_t kFixedColumns = 8;  // iter + 7 trailing columns

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw UsageError(path.string() + ":" + std::to_string(line) + ": cannot parse '" + cell + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.string().c_str(), "w"), &std::fclose);
  if (!file) throw UsageError("cannot write trace file " + path.string());
  const Eigen::Index d = trace.empty() ? 0 : trace.positions.front().size();

  std::fputs("iter", file.get());
  for (Eigen::Index i = 0; i < d; ++i) std::fprintf(file.get(), ",x%lld", static_cast<long long>(i + 1));
  std::fputs(",eps_t,alpha,accepted,reversibility_ok,unadjusted,n_leapfrog,cum_leapfrog\n", file.get());

  std::int64_t cumulative = trace.n_leapfrog_before;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    cumulative += trace.n_leapfrog[t];
    std::fprintf(file.get(), "%zu", t + 1);
    for (Eigen::Index i = 0; i < d; ++i) std::fprintf(file.get(), ",%.17g", trace.positions[t][i]);
    std::fprintf(file.get(), ",%.17g,%.17g,%d,%d,%d,%d,%lld\n", trace.eps_t[t], trace.alpha[t],
                 trace.accepted[t] ? 1 : 0, trace.reversibility_ok[t] ? 1 : 0, trace.unadjusted[t] ? 1 : 0,
                 trace.n_leapfrog[t], static_cast<long long>(cumulative));
  }
  if (std::ferror(file.get())) throw UsageError("error while writing " + path.string());
}

ChainTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open trace file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw UsageError(path.string() + ": empty trace file");
  const auto header = split_csv(line);
  if (header.size() < kFixedColumns + 1 || header.front() != "iter" || header.back() != "cum_leapfrog") {
    throw UsageError(path.string() + ":1: unexpected trace header");
  }
  const std::size_t d = header.size() - kFixedColumns;

  ChainTrace trace;
  std::int64_t previous = 0;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " columns, found " + std::to_string(cells.size()));
    }
    Vector x(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) x[static_cast<Eigen::Index>(i)] = parse_real(cells[1 + i], path, lineno);
    trace.positions.push_back(std::move(x));
    trace.eps_t.push_back(parse_real(cells[d + 1], path, lineno));
    trace.alpha.push_back(parse_real(cells[d + 2], path, lineno));
    trace.accepted.push_back(cells[d + 3] == "1");
    trace.reversibility_ok.push_back(cells[d + 4] == "1");
    trace.unadjusted.push_back(cells[d + 5] == "1");
    const auto steps = static_cast<int>(parse_real(cells[d + 6], path, lineno));
    const auto cumulative = static_cast<std::int64_t>(parse_real(cells[d + 7], path, lineno));
    if (trace.n_leapfrog.empty()) {
      trace.n_leapfrog_before = cumulative - steps;
    } else if (cumulative != previous + steps) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": cum_leapfrog is inconsistent");
    }
    trace.n_leapfrog.push_back(steps);
    trace.n_leapfrog_total += steps;
    previous = cumulative;
  }
  return trace;
}

}  // namespace automala::harness
