#include "nnls/dispersive.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nnls/errors.hpp"
#include "nnls/io.hpp"
#include "nnls/soliton.hpp"
#include "nnls/specfun.hpp"

namespace nnls {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

cplx positive_power(double base, cplx a) { return branch_power(base, a, BranchSpec{}); }
}  // namespace

Modulation modulation(const PhaseContext& ctx, cplx r1_at, cplx r2_at, int sigma, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "modulation needs t > 0");
  const double xi = ctx.xi();
  const cplx nu0 = ctx.nu_at_xi();
  const cplx d0 = ctx.delta0();
  const cplx p = positive_power(8.0 * t, I * nu0);
  const cplx ph = std::exp(-4.0 * I * t * xi * xi);
  Modulation m;
  m.r_xi = r1_at / (d0 * d0) * p * ph;
  m.r_xi_check = double(sigma) * r2_at * d0 * d0 / p / ph;
  return m;
}

BetaTilde beta_tilde(const PhaseContext& ctx, const Modulation& mod, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta_tilde needs t > 0");
  if (std::abs(mod.r_xi) < 1e-13 || std::abs(mod.r_xi_check) < 1e-13)
    throw Error(ErrorKind::ZeroReflection, "reflection vanishes at the stationary point");
  const cplx nu0 = ctx.nu_at_xi();
  const cplx pre = std::sqrt(2.0 * kPi) * std::exp(-0.5 * kPi * nu0);
  BetaTilde b;
  b.beta12 = pre * std::exp(I * kPi / 4.0) / (mod.r_xi * complex_gamma(-I * nu0));
  b.beta21 = -pre * std::exp(-I * kPi / 4.0) / (mod.r_xi_check * complex_gamma(I * nu0));
  const double s = std::pow(t, nu0.imag());
  b.beta12_tilde = b.beta12 / s;
  b.beta21_tilde = b.beta21 * s;
  return b;
}

double error_order(double nu_im) {
  if (!(nu_im > -0.25 && nu_im < 0.5)) {
    std::ostringstream os;
    os << "Im nu = " << nu_im << " outside (-1/4, 1/2)";
    throw Error(ErrorKind::AssumptionViolation, os.str());
  }
  if (nu_im > 1.0 / 6.0) return -1.0 + 2.0 * nu_im;
  if (nu_im > 0.0) return -0.75 + 0.5 * nu_im;
  return -0.75;
}

DispersiveTerm dispersive_term(const PhaseContext& ctx, cplx r1_at, cplx r2_at, int sigma, double t) {
  DispersiveTerm d;
  d.declared_order = error_order(ctx.nu_at_xi().imag());
  d.mod = modulation(ctx, r1_at, r2_at, sigma, t);
  try {
    d.beta = beta_tilde(ctx, d.mod, t);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroReflection) throw;
    if (std::abs(ctx.nu_at_xi()) >= 1e-10) {
      std::ostringstream os;
      os << "reflection vanishes at k = " << -ctx.xi() << " but |nu(-xi)| = " << std::abs(ctx.nu_at_xi());
      throw Error(ErrorKind::InconsistentData, os.str());
    }
    d.zero_reflection = true;
    d.beta = BetaTilde{};
    d.value = 0.0;
    return d;
  }
  d.value = std::pow(t, ctx.nu_at_xi().imag()) * d.beta.beta12_tilde / std::sqrt(2.0 * t);
  return d;
}

AsymptoticField asymptotic_q(const DiscreteSpectrum& spec, const DeltaPartition& part, const PhaseContext& ctx,
                             const ScatteringSample& at_stationary, double x, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "asymptotic_q needs t > 0");
  const double xi = x / (4.0 * t);
  if (std::abs(xi - ctx.xi()) > 1e-12 * std::max(1.0, std::abs(xi))) {
    std::ostringstream os;
    os << "(x, t) lies on ray xi = " << xi << " but the phase context is for xi = " << ctx.xi();
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  if (std::abs(at_stationary.k - cplx(-ctx.xi(), 0.0)) > 1e-12 * std::max(1.0, std::abs(xi)))
    throw Error(ErrorKind::InvalidArgument, "scattering sample is not taken at k = -xi");
  AsymptoticField f;
  f.x = x;
  f.t = t;
  f.xi = xi;
  f.q_sol = q_sol(delta_modified(spec, ctx), x, t);
  f.q_delta = q_delta(spec, part, ctx, x, t);
  f.dispersive = dispersive_term(ctx, at_stationary.r1, at_stationary.r2, spec.sigma, t);
  f.value = f.q_sol + f.dispersive.value;
  f.declared_order = f.dispersive.declared_order;
  return f;
}

nlohmann::json dispersive_to_json(const DispersiveTerm& d) {
  return {{"r_xi", complex_to_json(d.mod.r_xi)},
          {"r_xi_check", complex_to_json(d.mod.r_xi_check)},
          {"beta12", complex_to_json(d.beta.beta12)},
          {"beta21", complex_to_json(d.beta.beta21)},
          {"beta12_tilde", complex_to_json(d.beta.beta12_tilde)},
          {"beta21_tilde", complex_to_json(d.beta.beta21_tilde)},
          {"value", complex_to_json(d.value)},
          {"declared_order", d.declared_order},
          {"zero_reflection", d.zero_reflection}};
}

}  // namespace nnls
