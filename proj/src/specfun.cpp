#include "nnls/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nnls/errors.hpp"

namespace nnls {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(z) for Re z >= 1/2
cplx lanczos_log_gamma(cplx z) {
  z -= 1.0;
  cplx acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (z + double(i));
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

cplx complex_gamma(cplx z) {
  const double nearest = std::round(z.real());
  if (nearest <= 0.0 && std::abs(z - cplx(nearest, 0.0)) < 1e-12) {
    std::ostringstream os;
    os << "Gamma has a pole at z = " << nearest;
    throw Error(ErrorKind::PoleError, os.str());
  }
  if (z.real() < 0.5) {
    // sin(pi z) computed with the argument reduced by the nearest integer to keep it exact near poles
    const double n = std::round(z.real());
    const cplx s = std::sin(kPi * (z - n)) * ((static_cast<long long>(n) % 2 == 0) ? 1.0 : -1.0);
    return kPi / (s * std::exp(lanczos_log_gamma(1.0 - z)));
  }
  return std::exp(lanczos_log_gamma(z));
}

cplx complex_log_principal(cplx w) {
  if (std::abs(w) < 1e-300) throw Error(ErrorKind::ZeroArgument, "logarithm of zero");
  cplx l = std::log(w);
  if (l.imag() <= -kPi) l.imag(kPi);
  return l;
}

cplx branch_power(cplx w, cplx a, const BranchSpec& spec) {
  const double dn = std::abs(spec.cut_direction);
  if (std::abs(dn - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "cut_direction must have unit modulus");
  const cplx d = spec.cut_direction;
  const cplx z = w - spec.cut_anchor;
  // rotate so the cut lands on the negative real axis
  const cplx u = -z * std::conj(d);
  if (std::abs(u) == 0.0 || (u.real() < 0.0 && std::abs(u.imag()) <= 1e-14 * std::abs(u))) {
    std::ostringstream os;
    os << "point " << w << " lies on the branch cut";
    throw Error(ErrorKind::OnCutError, os.str());
  }
  const double arg = std::arg(u) + std::arg(d) - kPi;
  const cplx logz(std::log(std::abs(z)), arg);
  return std::exp(a * logz);
}

}  // namespace nnls
