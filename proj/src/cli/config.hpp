#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nnls::cli {

using nlohmann::json;

/// Named numeric tolerances; every command records the full table in its manifest.
class Tolerances {
 public:
  Tolerances();
  double get(const std::string& name) const;
  /// "name=value"; ConfigError for unknown names, malformed or non-positive values.
  void apply_override(const std::string& assignment);
  json to_json() const;

 private:
  std::map<std::string, double> values_;
};

struct RunConfig {
  json doc;
  std::filesystem::path base_dir;
  std::filesystem::path out_dir;
  int threads = 1;
  Tolerances tol;
};

/// Reads and validates the top-level document. Throws ConfigError.
RunConfig load_config(const std::string& path, const std::string& out_dir, int threads,
                      const std::vector<std::string>& overrides);

/// doc[name] as an object; an absent section is an empty object.
const json& section(const RunConfig& cfg, const std::string& name);
const json& require_section(const RunConfig& cfg, const std::string& name);

double number(const json& j, const std::string& key, std::optional<double> fallback = std::nullopt);
int integer(const json& j, const std::string& key, std::optional<int> fallback = std::nullopt);
std::vector<double> number_list(const json& j, const std::string& key);
/// [t0, t1, n] -> n uniformly spaced values; requires t0 < t1 (or n == 1).
std::vector<double> uniform_grid(const json& j, const std::string& key);

}  // namespace nnls::cli
