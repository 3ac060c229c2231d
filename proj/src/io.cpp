#include "nnls/io.hpp"

#include <cstdio>

#include "nnls/errors.hpp"

namespace nnls {

nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json complex_list_to_json(const std::vector<cplx>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (cplx z : v) a.push_back(complex_to_json(z));
  return a;
}

cplx complex_from_json(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw Error(ErrorKind::ConfigError, "key '" + key + "': expected a number or [re, im]");
}

std::vector<cplx> complex_list_from_json(const nlohmann::json& j, const std::string& key) {
  std::vector<cplx> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) throw Error(ErrorKind::ConfigError, "key '" + key + "': expected a list");
  for (const auto& e : j[key]) out.push_back(complex_from_json(e, key));
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace nnls
