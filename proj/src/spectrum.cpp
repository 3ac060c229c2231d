#include "nnls/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nnls/errors.hpp"
#include "nnls/io.hpp"

namespace nnls {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct BoundaryWalker {
  const std::function<cplx(cplx)>& f;
  double tol;
  const ZeroSearchOptions& opt;

  cplx eval(cplx z) const {
    const cplx v = f(z);
    if (!(std::abs(v) > 1e-300) || !std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "f vanishes or is not finite on the contour at " << z;
      throw Error(ErrorKind::BoundaryZero, os.str());
    }
    return v;
  }

  // accumulated arg change of f from z0 to z1, bisecting until each step is below max_arg_step
  double segment(cplx z0, cplx z1, cplx f0, cplx f1) const {
    const double d = std::arg(f1 / f0);
    if (std::abs(d) < opt.max_arg_step) return d;
    if (std::abs(z1 - z0) < tol) {
      std::ostringstream os;
      os << "argument of f cannot be resolved near " << 0.5 * (z0 + z1) << " (zero within " << tol
         << " of the contour)";
      throw Error(ErrorKind::BoundaryZero, os.str());
    }
    const cplx zm = 0.5 * (z0 + z1);
    const cplx fm = eval(zm);
    return segment(z0, zm, f0, fm) + segment(zm, z1, fm, f1);
  }

  double edge(cplx a, cplx b) const {
    const int n = std::max(2, opt.initial_edge_samples);
    double total = 0.0;
    cplx zp = a, fp = eval(a);
    for (int i = 1; i <= n; ++i) {
      const cplx z = a + (b - a) * (double(i) / n);
      const cplx fz = eval(z);
      total += segment(zp, z, fp, fz);
      zp = z;
      fp = fz;
    }
    return total;
  }
};

}  // namespace

int winding_number(const std::function<cplx(cplx)>& f, const Rect& r, double tol, const ZeroSearchOptions& opt) {
  if (!(r.re_min < r.re_max && r.im_min < r.im_max)) throw Error(ErrorKind::InvalidArgument, "degenerate rectangle");
  BoundaryWalker w{f, tol, opt};
  const cplx z00(r.re_min, r.im_min), z10(r.re_max, r.im_min), z11(r.re_max, r.im_max), z01(r.re_min, r.im_max);
  const double total = w.edge(z00, z10) + w.edge(z10, z11) + w.edge(z11, z01) + w.edge(z01, z00);
  const double turns = total / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.1) {
    std::ostringstream os;
    os << "winding integral " << turns << " is not close to an integer";
    throw Error(ErrorKind::BoundaryZero, os.str());
  }
  return static_cast<int>(rounded);
}

namespace {

bool inside(cplx z, const Rect& r) {
  return z.real() >= r.re_min && z.real() <= r.re_max && z.imag() >= r.im_min && z.imag() <= r.im_max;
}

struct Newton {
  bool converged = false;
  cplx z;
};

Newton newton(const std::function<cplx(cplx)>& f, cplx z, const Rect& cell, const ZeroSearchOptions& opt,
              int max_iter) {
  Newton out;
  cplx fz = f(z);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fz) <= opt.residual_tol) {
      out.converged = true;
      break;
    }
    const double h = opt.diff_step;
    const cplx df = (f(z + h) - f(z - h)) / (2.0 * h);
    if (std::abs(df) == 0.0) break;
    const cplx step = fz / df;
    z -= step;
    if (!inside(z, cell)) break;  // poor basin: let the caller subdivide
    fz = f(z);
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) {
      out.converged = std::abs(fz) <= opt.residual_tol;
      break;
    }
  }
  out.z = z;
  return out;
}

void search(const std::function<cplx(cplx)>& f, const Rect& r, int count, double tol, const ZeroSearchOptions& opt,
            std::vector<cplx>& out, int depth) {
  if (count <= 0) return;
  const double w = r.re_max - r.re_min, h = r.im_max - r.im_min;
  if (count == 1) {
    const Newton nw = newton(f, cplx(r.re_min + 0.5 * w, r.im_min + 0.5 * h), r, opt, depth > 3 ? opt.max_newton : 12);
    if (nw.converged && inside(nw.z, r)) {
      out.push_back(nw.z);
      return;
    }
  }
  if (std::max(w, h) < opt.min_cell) {
    std::ostringstream os;
    if (count >= 2) {
      os << count << " zeros inside a cell of size " << std::max(w, h) << " near "
         << cplx(r.re_min + 0.5 * w, r.im_min + 0.5 * h) << " (non-simple or clustered zeros)";
      throw Error(ErrorKind::MultiplicityError, os.str());
    }
    os << "Newton refinement failed to reach |f| <= " << opt.residual_tol << " near "
       << cplx(r.re_min + 0.5 * w, r.im_min + 0.5 * h);
    throw Error(ErrorKind::NoConvergence, os.str());
  }
  // off-centre split so that symmetric configurations do not put zeros on the cut lines
  const double offsets[] = {0.5137, 0.4711, 0.5523};
  for (double s : offsets) {
    const double xm = r.re_min + s * w, ym = r.im_min + (1.0 - s + 0.0031) * h;
    const Rect kids[4] = {{r.re_min, xm, r.im_min, ym},
                          {xm, r.re_max, r.im_min, ym},
                          {r.re_min, xm, ym, r.im_max},
                          {xm, r.re_max, ym, r.im_max}};
    int counts[4];
    try {
      int sum = 0;
      for (int i = 0; i < 4; ++i) sum += counts[i] = winding_number(f, kids[i], tol, opt);
      if (sum != count) continue;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BoundaryZero) continue;
      throw;
    }
    for (int i = 0; i < 4; ++i) search(f, kids[i], counts[i], tol, opt, out, depth + 1);
    return;
  }
  throw Error(ErrorKind::BoundaryZero, "could not place subdivision lines away from the zeros");
}

}  // namespace

std::vector<cplx> locate_zeros(const std::function<cplx(cplx)>& f, const Rect& region, double tol,
                               const ZeroSearchOptions& opt) {
  std::vector<cplx> out;
  const int count = winding_number(f, region, tol, opt);
  if (count < 0) throw Error(ErrorKind::InvalidArgument, "negative winding number: f has poles in the region");
  search(f, region, count, tol, opt, out, 0);
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return out;
}

namespace {

void add_with_mirror(std::vector<cplx>& v, cplx z) {
  auto present = [&](cplx w) {
    return std::any_of(v.begin(), v.end(), [&](cplx u) { return std::abs(u - w) < 1e-8; });
  };
  if (!present(z)) v.push_back(z);
  const cplx m = -std::conj(z);
  if (!present(m)) v.push_back(m);
}

}  // namespace

DiscreteSpectrum norming_constants(const Potential& q0, const std::vector<cplx>& zeros, const VolterraOptions& opt) {
  DiscreteSpectrum s;
  s.sigma = q0.sigma();
  for (cplx z : zeros) {
    if (z.imag() > 0) add_with_mirror(s.omegas, z);
    else if (z.imag() < 0) add_with_mirror(s.gammas, z);
    else throw Error(ErrorKind::InvalidArgument, "real zero passed to norming_constants");
  }
  auto by_re = [](cplx a, cplx b) { return a.real() < b.real(); };
  std::sort(s.omegas.begin(), s.omegas.end(), by_re);
  std::sort(s.gammas.begin(), s.gammas.end(), by_re);

  auto check_derivative = [](cplx d, cplx z) {
    if (std::abs(d) < 1e-6) {
      std::ostringstream os;
      os << "derivative " << std::abs(d) << " at zero " << z << " is below 1e-6";
      throw Error(ErrorKind::NearDegenerateDerivative, os.str());
    }
  };
  for (cplx w : s.omegas) {
    const Proportionality p = proportionality_upper(q0, w, opt);
    const cplx d = a1_derivative(q0, w, opt);
    check_derivative(d, w);
    s.b_omega.push_back(p.constant);
    s.a1_prime.push_back(d);
    s.c.push_back(p.constant / d);
    s.proportionality_residual.push_back(p.residual);
  }
  for (cplx g : s.gammas) {
    const Proportionality p = proportionality_lower(q0, g, opt);
    const cplx d = a2_derivative(q0, g, opt);
    check_derivative(d, g);
    s.btilde_gamma.push_back(p.constant);
    s.a2_prime.push_back(d);
    s.d.push_back(p.constant / d);
    s.proportionality_residual.push_back(p.residual);
  }
  return s;
}

SpectrumResult find_spectrum(const Potential& q0, const SpectrumSearch& cfg) {
  SpectrumResult res;
  auto a1 = [&](cplx k) { return a1_upper(q0, k, cfg.volterra); };
  auto a2 = [&](cplx k) { return a2_lower(q0, k, cfg.volterra); };
  const Rect up{cfg.edge, cfg.kmax, cfg.edge, cfg.kmax};
  const Rect lo{cfg.edge, cfg.kmax, -cfg.kmax, -cfg.edge};
  std::vector<cplx> zu = locate_zeros(a1, up, cfg.tol, cfg.zero);
  std::vector<cplx> zl = locate_zeros(a2, lo, cfg.tol, cfg.zero);
  res.winding_upper = static_cast<int>(zu.size());
  res.winding_lower = static_cast<int>(zl.size());
  std::vector<cplx> keep;
  for (cplx z : zu) (z.imag() < cfg.min_imag ? res.rejected : keep).push_back(z);
  for (cplx z : zl) (-z.imag() < cfg.min_imag ? res.rejected : keep).push_back(z);
  res.spectrum = norming_constants(q0, keep, cfg.volterra);
  return res;
}

DeltaPartition classify(const DiscreteSpectrum& spec, double xi) {
  DeltaPartition p;
  p.xi = xi;
  auto check = [&](cplx z) {
    if (std::abs(z.real() + xi) < 1e-9) {
      std::ostringstream os;
      os << "pole " << z << " has real part at the stationary point -xi = " << -xi;
      throw Error(ErrorKind::OnThresholdError, os.str());
    }
  };
  for (cplx z : spec.omegas) {
    check(z);
    if (z.real() > -xi) p.delta1.push_back(z);
  }
  for (cplx z : spec.gammas) {
    check(z);
    if (z.real() > -xi) p.delta2.push_back(z);
  }
  auto by_re = [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); };
  std::sort(p.delta1.begin(), p.delta1.end(), by_re);
  std::sort(p.delta2.begin(), p.delta2.end(), by_re);
  for (cplx z : p.delta1) {
    if (z.real() > 0) p.delta1_plus.push_back(z);
    if (z.real() < 0) p.delta1_minus.push_back(z);
  }
  for (cplx z : p.delta2) {
    if (z.real() > 0) p.delta2_plus.push_back(z);
    if (z.real() < 0) p.delta2_minus.push_back(z);
  }
  const int n1p = static_cast<int>(p.delta1_plus.size()), n1m = static_cast<int>(p.delta1_minus.size());
  const int n2p = static_cast<int>(p.delta2_plus.size()), n2m = static_cast<int>(p.delta2_minus.size());
  p.ordering_assumption_holds = (n1p - n1m > n2p - n2m) && (n1m > n2m);

  const int first = n2m + 1, last = n1p - n2p + n2m;
  for (int n = first; n <= last; ++n) {
    if (n < 1 || n > n1p) {
      std::ostringstream os;
      os << "index " << n << " into Delta1+ (size " << n1p << ") is out of range";
      throw Error(ErrorKind::PartitionIndex, os.str());
    }
    const cplx w = p.delta1_plus[n - 1];
    p.delta.push_back(w);
    p.delta.push_back(-std::conj(w));
  }
  std::sort(p.delta.begin(), p.delta.end(), by_re);
  return p;
}

cplx blaschke_T(cplx z, const DeltaPartition& part) {
  const int n1p = static_cast<int>(part.delta1_plus.size());
  const int n2p = static_cast<int>(part.delta2_plus.size()), n2m = static_cast<int>(part.delta2_minus.size());
  auto pick = [](const std::vector<cplx>& v, int j, const char* name) {
    if (j < 1 || j > static_cast<int>(v.size())) {
      std::ostringstream os;
      os << "index " << j << " into " << name << " (size " << v.size() << ") is out of range";
      throw Error(ErrorKind::PartitionIndex, os.str());
    }
    return v[j - 1];
  };
  auto denom = [&](cplx root) {
    if (std::abs(z - root) < 1e-12) {
      std::ostringstream os;
      os << "T evaluated at its pole " << root;
      throw Error(ErrorKind::PoleHit, os.str());
    }
    return z - root;
  };
  cplx T = 1.0;
  for (int n = 0; n <= n2p - n2m - 1; ++n) {
    const cplx s = pick(part.delta1_plus, n1p - n, "Delta1+");
    const cplx t = pick(part.delta2_plus, n2p - n, "Delta2+");
    T *= (z - s) / denom(t);
  }
  for (int n = 1; n <= n2m; ++n) {
    const cplx w = pick(part.delta1_plus, n, "Delta1+");
    const cplx g = pick(part.delta2_plus, n, "Delta2+");
    T *= (z - w) * (z + std::conj(w)) / (denom(g) * denom(-std::conj(g)));
  }
  return T;
}

nlohmann::json spectrum_to_json(const DiscreteSpectrum& s) {
  nlohmann::json j;
  j["sigma"] = s.sigma;
  j["omegas"] = complex_list_to_json(s.omegas);
  j["c"] = complex_list_to_json(s.c);
  j["gammas"] = complex_list_to_json(s.gammas);
  j["d"] = complex_list_to_json(s.d);
  if (!s.b_omega.empty() || !s.btilde_gamma.empty()) {
    j["diagnostics"] = {{"b_omega", complex_list_to_json(s.b_omega)},
                        {"a1_prime", complex_list_to_json(s.a1_prime)},
                        {"btilde_gamma", complex_list_to_json(s.btilde_gamma)},
                        {"a2_prime", complex_list_to_json(s.a2_prime)},
                        {"proportionality_residual", s.proportionality_residual}};
  }
  return j;
}

DiscreteSpectrum spectrum_from_json(const nlohmann::json& j) {
  DiscreteSpectrum s;
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "key 'spectrum': expected an object");
  if (j.contains("sigma")) {
    if (!j["sigma"].is_number_integer() || (j["sigma"] != 1 && j["sigma"] != -1))
      throw Error(ErrorKind::ConfigError, "key 'sigma': must be +1 or -1");
    s.sigma = j["sigma"].get<int>();
  }
  s.omegas = complex_list_from_json(j, "omegas");
  s.c = complex_list_from_json(j, "c");
  s.gammas = complex_list_from_json(j, "gammas");
  s.d = complex_list_from_json(j, "d");
  if (s.omegas.size() != s.c.size()) throw Error(ErrorKind::ConfigError, "key 'c': length differs from 'omegas'");
  if (s.gammas.size() != s.d.size()) throw Error(ErrorKind::ConfigError, "key 'd': length differs from 'gammas'");
  for (cplx w : s.omegas)
    if (!(w.imag() > 0)) throw Error(ErrorKind::ConfigError, "key 'omegas': entries must lie in the upper half plane");
  for (cplx g : s.gammas)
    if (!(g.imag() < 0)) throw Error(ErrorKind::ConfigError, "key 'gammas': entries must lie in the lower half plane");
  return s;
}

nlohmann::json partition_to_json(const DeltaPartition& p) {
  return {{"xi", p.xi},
          {"delta1_plus", complex_list_to_json(p.delta1_plus)},
          {"delta1_minus", complex_list_to_json(p.delta1_minus)},
          {"delta2_plus", complex_list_to_json(p.delta2_plus)},
          {"delta2_minus", complex_list_to_json(p.delta2_minus)},
          {"delta", complex_list_to_json(p.delta)},
          {"ordering_assumption_holds", p.ordering_assumption_holds}};
}

}  // namespace nnls
