#include "automala/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>

namespace automala::harness {

SamplerSpec SamplerSpec::parse(const std::string& text) {
  static const std::regex pattern(R"(^\s*(automala|mala|ula)\s*(?:\(\s*([^()\s]+)\s*\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw UsageError("cannot parse sampler '" + text + "'; expected automala, mala(eps) or ula(h)");
  }
  SamplerSpec spec;
  const std::string kind = m[1];
  if (kind == "automala") {
    if (m[2].matched) throw UsageError("sampler 'automala' takes no step size");
    return spec;
  }
  spec.kind = kind == "mala" ? SamplerKind::mala : SamplerKind::ula;
  if (!m[2].matched) throw UsageError("sampler '" + kind + "' needs a step size, e.g. " + kind + "(0.1)");
  std::size_t used = 0;
  try {
    spec.step = std::stod(m[2].str(), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != m[2].str().size() || !(spec.step > 0.0) || !std::isfinite(spec.step)) {
    throw UsageError("sampler '" + text + "': step size must be a positive number");
  }
  return spec;
}

std::string SamplerSpec::to_string() const {
  switch (kind) {
    case SamplerKind::automala: return "automala";
    case SamplerKind::mala: return "mala(" + format_double(step) + ")";
    case SamplerKind::ula: return "ula(" + format_double(step) + ")";
  }
  return "unknown";
}

void RunConfig::validate() const {
  parse_target(target);
  if (sampler.kind != SamplerKind::automala && !(sampler.step > 0.0 && std::isfinite(sampler.step))) {
    throw UsageError("field 'sampler': step size must be positive");
  }
  if (iterations) {
    if (*iterations < 1) throw UsageError("field 'iterations': must be at least 1");
    if (t_unadj < 0) throw UsageError("field 't_unadj': must be non-negative");
  } else {
    RoundSchedule{rounds, t_unadj}.validate();
  }
}

json RunConfig::to_json() const {
  json j;
  j["target"] = target;
  j["sampler"] = sampler.to_string();
  j["rounds"] = rounds;
  j["t_unadj"] = t_unadj;
  j["iterations"] = iterations ? json(*iterations) : json(nullptr);
  j["precond"] = automala::to_string(precond);
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::set<std::string> known{"target", "sampler", "rounds", "t_unadj",
                                           "iterations", "precond", "seed", "out_dir"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw UsageError("config: unknown key '" + item.key() + "'");
  }
  RunConfig c;
  auto field = [&](const char* key, auto& dest, auto&& check) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!check(v)) throw UsageError(std::string("config field '") + key + "' has the wrong type");
    v.get_to(dest);
  };
  auto is_string = [](const json& v) { return v.is_string(); };
  auto is_int = [](const json& v) { return v.is_number_integer(); };
  auto is_uint = [](const json& v) { return v.is_number_unsigned(); };

  field("target", c.target, is_string);
  std::string sampler = c.sampler.to_string();
  field("sampler", sampler, is_string);
  field("rounds", c.rounds, is_int);
  field("t_unadj", c.t_unadj, is_int);
  if (j.contains("iterations") && !j.at("iterations").is_null()) {
    if (!j.at("iterations").is_number_integer()) throw UsageError("config field 'iterations' has the wrong type");
    c.iterations = j.at("iterations").get<std::int64_t>();
  }
  std::string precond = automala::to_string(c.precond);
  field("precond", precond, is_string);
  field("seed", c.seed, is_uint);
  field("out_dir", c.out_dir, is_string);

  try {
    c.sampler = SamplerSpec::parse(sampler);
    c.precond = parse_preset(precond);
  } catch (const UsageError& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  try {
    c.validate();
  } catch (const UsageError& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

std::string RunConfig::fingerprint() const {
  json j = to_json();
  j.erase("out_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace automala::harness
