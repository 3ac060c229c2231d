#include "nnls/potential.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "nnls/errors.hpp"

namespace nnls {

using nlohmann::json;

bool DecayClass::permits(double im_k) const {
  switch (kind) {
    case DecayKind::compact_support: return true;
    case DecayKind::exponential: return std::abs(im_k) < 0.5 * rate;
    case DecayKind::generic: return im_k == 0.0;
  }
  return false;
}

namespace {

void check_grid(double L, std::size_t n, int sigma) {
  if (!(L > 0.0)) throw Error(ErrorKind::InvalidArgument, "L must be positive");
  if (n < 3 || n % 2 == 0) throw Error(ErrorKind::InvalidArgument, "node count must be odd and >= 3");
  if (sigma != 1 && sigma != -1) throw Error(ErrorKind::InvalidArgument, "sigma must be +1 or -1");
}

}  // namespace

Potential::Potential(double L, std::vector<cplx> q_minus, std::vector<cplx> q_plus, int sigma,
                     DecayClass decay)
    : L_(L), qm_(std::move(q_minus)), qp_(std::move(q_plus)), sigma_(sigma), decay_(decay) {
  check_grid(L, qm_.size(), sigma);
  if (qp_.size() != qm_.size()) throw Error(ErrorKind::InvalidArgument, "one-sided limit arrays differ in size");
  h_ = 2.0 * L_ / double(qm_.size() - 1);
}

Potential::Potential(double L, std::vector<cplx> values, int sigma, DecayClass decay)
    : Potential(L, values, values, sigma, decay) {}

Potential Potential::from_function(const std::function<cplx(double)>& f, double L, int n, int sigma,
                                   DecayClass decay) {
  check_grid(L, static_cast<std::size_t>(std::max(n, 0)), sigma);
  const double h = 2.0 * L / (n - 1);
  std::vector<cplx> v(n);
  for (int j = 0; j < n; ++j) v[j] = f(-L + h * j);
  return Potential(L, std::move(v), sigma, decay);
}

int Potential::index_of(double x) const {
  const double s = (x + L_) / h_;
  const double j = std::round(s);
  if (std::abs(s - j) > 1e-8 || j < 0 || j > size() - 1) {
    std::ostringstream os;
    os << "x = " << x << " is not a grid node";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  return static_cast<int>(j);
}

bool Potential::has_jumps() const { return !jump_nodes().empty(); }

std::vector<int> Potential::jump_nodes() const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j)
    if (qm_[j] != qp_[j]) out.push_back(j);
  return out;
}

double Potential::l1_norm() const {
  double s = 0.0;
  for (int j = 0; j + 1 < size(); ++j) s += 0.5 * h_ * (std::abs(qp_[j]) + std::abs(qm_[j + 1]));
  return s;
}

double Potential::l11_norm() const {
  double s = 0.0;
  for (int j = 0; j + 1 < size(); ++j)
    s += 0.5 * h_ * ((1 + std::abs(x(j))) * std::abs(qp_[j]) + (1 + std::abs(x(j + 1))) * std::abs(qm_[j + 1]));
  return s;
}

double Potential::l2_half_norm() const {
  double s = 0.0;
  for (int j = 0; j + 1 < size(); ++j)
    s += 0.5 * h_ * ((1 + std::abs(x(j))) * std::norm(qp_[j]) + (1 + std::abs(x(j + 1))) * std::norm(qm_[j + 1]));
  return std::sqrt(s);
}

Potential zero_potential(double L, int n, int sigma) {
  return Potential::from_function([](double) { return cplx(0.0); }, L, n, sigma, DecayClass::compact());
}

Potential gaussian_potential(cplx amplitude, double width, double center, double L, int n, int sigma) {
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "gaussian width must be positive");
  auto f = [=](double x) {
    const double u = (x - center) / width;
    return amplitude * std::exp(-u * u);
  };
  return Potential::from_function(f, L, n, sigma,
                                  DecayClass::exponential(std::numeric_limits<double>::infinity()));
}

Potential box_potential(cplx amplitude, double left, double right, double L, int n, int sigma) {
  if (!(left < right)) throw Error(ErrorKind::InvalidArgument, "box requires left < right");
  Potential grid = zero_potential(L, n, sigma);
  const int a = grid.index_of(left);
  const int b = grid.index_of(right);
  std::vector<cplx> qm(n, 0.0), qp(n, 0.0);
  for (int j = a; j <= b; ++j) {
    if (j > a) qm[j] = amplitude;
    if (j < b) qp[j] = amplitude;
  }
  return Potential(L, std::move(qm), std::move(qp), sigma, DecayClass::compact());
}

Potential sech_potential(cplx amplitude, double width, double L, int n, int sigma) {
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "sech width must be positive");
  auto f = [=](double x) { return amplitude / std::cosh(x / width); };
  return Potential::from_function(f, L, n, sigma, DecayClass::exponential(2.0 / width));
}

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::ConfigError, "key '" + key + "': " + why);
}

double get_number(const json& j, const std::string& key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad_key(key, "missing");
  }
  if (!j[key].is_number()) bad_key(key, "expected a number");
  return j[key].get<double>();
}

cplx get_complex(const json& j, const std::string& key, std::optional<cplx> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad_key(key, "missing");
  }
  const json& v = j[key];
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  bad_key(key, "expected a number or [re, im]");
}

DecayClass decay_from_json(const json& j, DecayClass fallback) {
  if (!j.contains("decay")) return fallback;
  const json& d = j["decay"];
  const std::string kind = d.is_string() ? d.get<std::string>() : (d.is_object() && d.contains("kind") && d["kind"].is_string() ? d["kind"].get<std::string>() : "");
  if (kind == "compact_support") return DecayClass::compact();
  if (kind == "generic") return DecayClass::generic();
  if (kind == "exponential") {
    if (!d.is_object()) bad_key("decay", "exponential decay needs a rate");
    return DecayClass::exponential(get_number(d, "rate"));
  }
  bad_key("decay", "expected compact_support, exponential or generic");
}

}  // namespace

Potential potential_from_json(const json& spec, const std::string& base_dir) {
  if (!spec.is_object()) bad_key("potential", "expected an object");
  if (!spec.contains("kind") || !spec["kind"].is_string()) bad_key("kind", "missing or not a string");
  const std::string kind = spec["kind"].get<std::string>();

  int sigma = 1;
  if (spec.contains("sigma")) {
    if (!spec["sigma"].is_number_integer() || (spec["sigma"] != 1 && spec["sigma"] != -1))
      bad_key("sigma", "must be +1 or -1");
    sigma = spec["sigma"].get<int>();
  }

  if (kind == "samples") {
    std::string file;
    if (spec.contains("file")) {
      if (!spec["file"].is_string()) bad_key("file", "expected a path");
      std::filesystem::path p(spec["file"].get<std::string>());
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      return potential_from_csv(p.string(), sigma, decay_from_json(spec, DecayClass::generic()));
    }
    if (!spec.contains("values") || !spec["values"].is_array()) bad_key("values", "samples need 'file' or 'values'");
    const double L = get_number(spec, "L");
    std::vector<cplx> v;
    for (const auto& e : spec["values"]) {
      if (e.is_number()) v.emplace_back(e.get<double>(), 0.0);
      else if (e.is_array() && e.size() == 2) v.emplace_back(e[0].get<double>(), e[1].get<double>());
      else bad_key("values", "entries must be numbers or [re, im]");
    }
    try {
      return Potential(L, std::move(v), sigma, decay_from_json(spec, DecayClass::generic()));
    } catch (const Error& e) {
      bad_key("values", e.what());
    }
  }

  const double L = get_number(spec, "L");
  if (!(L > 0.0)) bad_key("L", "must be positive");
  if (!spec.contains("n") || !spec["n"].is_number_integer()) bad_key("n", "missing or not an integer");
  const int n = spec["n"].get<int>();
  if (n < 3 || n % 2 == 0) bad_key("n", "must be odd and >= 3");

  if (kind == "gaussian") {
    const double w = get_number(spec, "width", 1.0);
    if (!(w > 0.0)) bad_key("width", "must be positive");
    return gaussian_potential(get_complex(spec, "amplitude"), w, get_number(spec, "center", 0.0), L, n, sigma);
  }
  if (kind == "box") {
    try {
      return box_potential(get_complex(spec, "amplitude"), get_number(spec, "left"), get_number(spec, "right"), L, n,
                           sigma);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigError) throw;
      bad_key("left/right", e.what());
    }
  }
  if (kind == "sech") {
    const double w = get_number(spec, "width", 1.0);
    if (!(w > 0.0)) bad_key("width", "must be positive");
    return sech_potential(get_complex(spec, "amplitude"), w, L, n, sigma);
  }
  bad_key("kind", "unknown potential kind '" + kind + "'");
}

Potential potential_from_csv(const std::string& path, int sigma, DecayClass decay) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "key 'file': cannot open " + path);
  std::vector<double> xs;
  std::vector<cplx> vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    double x, re, im = 0.0;
    if (!(ls >> x >> re)) {
      if (xs.empty()) continue;  // header
      throw Error(ErrorKind::ConfigError, "key 'file': malformed row " + std::to_string(lineno));
    }
    ls >> im;
    xs.push_back(x);
    vs.emplace_back(re, im);
  }
  if (xs.size() < 3) throw Error(ErrorKind::ConfigError, "key 'file': fewer than 3 samples");
  const std::size_t n = xs.size();
  const double L = xs.back();
  const double h = 2.0 * L / double(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(xs[j] - (-L + h * double(j))) > 1e-9 * std::max(1.0, L))
      throw Error(ErrorKind::ConfigError, "key 'file': grid is not uniform and symmetric about 0");
  }
  try {
    return Potential(L, std::move(vs), sigma, decay);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, std::string("key 'file': ") + e.what());
  }
}

std::function<cplx(double)> potential_profile(const json& spec, const std::string& base_dir) {
  const Potential q0 = potential_from_json(spec, base_dir);  // validates every key
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "gaussian") {
    const cplx a = get_complex(spec, "amplitude");
    const double w = get_number(spec, "width", 1.0), c = get_number(spec, "center", 0.0);
    return [=](double x) { return a * std::exp(-((x - c) / w) * ((x - c) / w)); };
  }
  if (kind == "sech") {
    const cplx a = get_complex(spec, "amplitude");
    const double w = get_number(spec, "width", 1.0);
    return [=](double x) { return a / std::cosh(x / w); };
  }
  if (kind == "box") {
    const cplx a = get_complex(spec, "amplitude");
    const double l = get_number(spec, "left"), r = get_number(spec, "right");
    return [=](double x) { return (x > l && x < r) ? a : (x == l || x == r ? 0.5 * a : cplx(0.0)); };
  }
  return [q0](double x) {
    const double s = (x + q0.L()) / q0.h();
    if (s < 0.0 || s > q0.size() - 1) return cplx(0.0);
    const int j = std::min(static_cast<int>(s), q0.size() - 2);
    const double f = s - j;
    return (1.0 - f) * q0.q_plus()[j] + f * q0.q_minus()[j + 1];
  };
}

json potential_summary(const Potential& q0) {
  json j;
  j["L"] = q0.L();
  j["n"] = q0.size();
  j["h"] = q0.h();
  j["sigma"] = q0.sigma();
  switch (q0.decay().kind) {
    case DecayKind::compact_support: j["decay"] = "compact_support"; break;
    case DecayKind::exponential:
      j["decay"] = {{"kind", "exponential"},
                    {"rate", std::isfinite(q0.decay().rate) ? json(q0.decay().rate) : json("inf")}};
      break;
    case DecayKind::generic: j["decay"] = "generic"; break;
  }
  j["l1_norm"] = q0.l1_norm();
  j["l11_norm"] = q0.l11_norm();
  j["l2_half_norm"] = q0.l2_half_norm();
  return j;
}

}  // namespace nnls
