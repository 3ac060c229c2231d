#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

namespace nnls {

using cplx = std::complex<double>;

nlohmann::json complex_to_json(cplx z);
nlohmann::json complex_list_to_json(const std::vector<cplx>& v);
/// Parse a number or [re, im]; ConfigError naming key on failure.
cplx complex_from_json(const nlohmann::json& v, const std::string& key);
/// j[key] as a list of complex numbers; a missing key yields an empty list.
std::vector<cplx> complex_list_from_json(const nlohmann::json& j, const std::string& key);

/// "%.17g" formatting used for every floating value written to disk.
std::string fmt17(double v);

}  // namespace nnls
