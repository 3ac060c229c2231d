#include "config.hpp"

#include <cmath>
#include <fstream>

#include "nnls/errors.hpp"

namespace nnls::cli {

namespace {
[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::ConfigError, "key '" + key + "': " + why);
}
}  // namespace

Tolerances::Tolerances()
    : values_{{"identity", 1e-8},       {"picard", 1e-12},         {"quadrature", 1e-10},
              {"zero_contour", 1e-8},   {"newton_residual", 1e-10}, {"boundary_leak", 1e-8},
              {"nu_tail", 1e-12},       {"nu_spacing", 0.01},       {"jost_bound_slack", 1.1}} {}

double Tolerances::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw Error(ErrorKind::ConfigError, "unknown tolerance '" + name + "'");
  return it->second;
}

void Tolerances::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) fail("tol-override", "expected name=value, got '" + assignment + "'");
  const std::string name = assignment.substr(0, eq);
  if (!values_.count(name)) fail("tol-override", "unknown tolerance '" + name + "'");
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(assignment.substr(eq + 1), &used);
    if (used != assignment.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    fail("tol-override", "value for '" + name + "' is not a number");
  }
  if (!(v > 0.0) || !std::isfinite(v)) fail("tol-override", "tolerance '" + name + "' must be positive");
  values_[name] = v;
}

json Tolerances::to_json() const {
  json j = json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

RunConfig load_config(const std::string& path, const std::string& out_dir, int threads,
                      const std::vector<std::string>& overrides) {
  RunConfig cfg;
  std::ifstream in(path);
  if (!in) fail("config", "cannot open '" + path + "'");
  try {
    cfg.doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("config", std::string("malformed JSON: ") + e.what());
  }
  if (!cfg.doc.is_object()) fail("config", "top level must be an object");
  cfg.base_dir = std::filesystem::absolute(path).parent_path();
  if (out_dir.empty()) fail("out", "output directory is required");
  cfg.out_dir = out_dir;
  if (threads < 1) fail("threads", "must be >= 1");
  cfg.threads = threads;
  if (cfg.doc.contains("tolerances")) {
    const json& t = cfg.doc["tolerances"];
    if (!t.is_object()) fail("tolerances", "expected an object");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_number()) fail("tolerances." + k, "expected a number");
      cfg.tol.apply_override(k + "=" + std::to_string(v.get<double>()));
    }
  }
  for (const auto& o : overrides) cfg.tol.apply_override(o);
  return cfg;
}

const json& section(const RunConfig& cfg, const std::string& name) {
  static const json empty = json::object();
  if (!cfg.doc.contains(name)) return empty;
  const json& s = cfg.doc[name];
  if (!s.is_object()) fail(name, "expected an object");
  return s;
}

const json& require_section(const RunConfig& cfg, const std::string& name) {
  if (!cfg.doc.contains(name)) fail(name, "missing");
  return section(cfg, name);
}

double number(const json& j, const std::string& key, std::optional<double> fallback) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(key, "missing");
  }
  if (!j[key].is_number()) fail(key, "expected a number");
  return j[key].get<double>();
}

int integer(const json& j, const std::string& key, std::optional<int> fallback) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(key, "missing");
  }
  if (!j[key].is_number_integer()) fail(key, "expected an integer");
  return j[key].get<int>();
}

std::vector<double> number_list(const json& j, const std::string& key) {
  if (!j.contains(key)) fail(key, "missing");
  if (!j[key].is_array()) fail(key, "expected a list of numbers");
  std::vector<double> out;
  for (const auto& e : j[key]) {
    if (!e.is_number()) fail(key, "expected a list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<double> uniform_grid(const json& j, const std::string& key) {
  const std::vector<double> v = number_list(j, key);
  if (v.size() != 3) fail(key, "expected [start, stop, count]");
  const double n = v[2];
  if (n < 1 || n != std::floor(n)) fail(key, "count must be a positive integer");
  if (n > 1 && !(v[0] < v[1])) fail(key, "window must be increasing and non-empty");
  std::vector<double> out;
  const int m = static_cast<int>(n);
  for (int i = 0; i < m; ++i) out.push_back(m == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (m - 1));
  return out;
}

}  // namespace nnls::cli
