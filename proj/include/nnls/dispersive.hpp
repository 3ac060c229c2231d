#pragma once

#include <complex>

#include <json.hpp>

#include "nnls/phase.hpp"
#include "nnls/spectrum.hpp"

namespace nnls {

/// Parameters of the local parabolic-cylinder model at k = -xi.
struct Modulation {
  cplx r_xi;        // r1(-xi) delta0^{-2} (8t)^{i nu} e^{-4it xi^2}
  cplx r_xi_check;  // sigma r2(-xi) delta0^{2} (8t)^{-i nu} e^{4it xi^2}
};

Modulation modulation(const PhaseContext& ctx, cplx r1_at, cplx r2_at, int sigma, double t);

struct BetaTilde {
  cplx beta12, beta21;              // large-z coefficients of the model
  cplx beta12_tilde, beta21_tilde;  // with the t^{Im nu} growth factored out
};

/// Throws ZeroReflection when |r_xi| or |r_xi_check| is below 1e-13.
BetaTilde beta_tilde(const PhaseContext& ctx, const Modulation& mod, double t);

/// Exponent of the remainder after the soliton and dispersive terms:
/// -1 + 2 Im nu on (1/6, 1/2), -3/4 + Im nu / 2 on (0, 1/6], -3/4 on (-1/4, 0].
double error_order(double nu_im);

struct DispersiveTerm {
  Modulation mod{};
  BetaTilde beta{};
  cplx value;  // t^{Im nu} beta12_tilde / sqrt(2t)
  double declared_order = 0.0;
  bool zero_reflection = false;
};

/// The leading dispersive contribution at time t on the ray of ctx. Zero reflection at
/// the stationary point gives 0 when nu(-xi) is also negligible, InconsistentData otherwise.
DispersiveTerm dispersive_term(const PhaseContext& ctx, cplx r1_at, cplx r2_at, int sigma, double t);

struct AsymptoticField {
  double x = 0.0, t = 0.0, xi = 0.0;
  cplx q_sol;       // reflectionless field with delta-modified constants
  cplx q_delta;     // the same reduced to the poles in Delta
  DispersiveTerm dispersive;
  cplx value;       // q_sol + dispersive.value
  double declared_order = 0.0;
};

/// Long-time approximation q_sol + t^{Im nu} beta12_tilde / sqrt(2t) at (x, t), with the
/// scattering data at the stationary point supplied by the caller.
AsymptoticField asymptotic_q(const DiscreteSpectrum& spec, const DeltaPartition& part, const PhaseContext& ctx,
                             const ScatteringSample& at_stationary, double x, double t);

nlohmann::json dispersive_to_json(const DispersiveTerm& d);

}  // namespace nnls
