#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "nnls/phase.hpp"
#include "nnls/spectrum.hpp"

namespace nnls {

/// Poles omega (upper half plane) with constants c and gamma (lower half plane) with
/// constants d, zero reflection. The sets are expected to be closed under z -> -conj(z).
struct ReflectionlessData {
  std::vector<cplx> omegas, c;
  std::vector<cplx> gammas, d;
  int sigma = 1;
};

ReflectionlessData from_spectrum(const DiscreteSpectrum& s);

/// Reflectionless data whose transmission is a1(k) = prod(k - omega)/prod(k - gamma).
/// omegas/gammas are given without mirrors together with the proportionality constants
/// b(omega), btilde(gamma); mirrors get sigma/conj(b) and c = b/a1', d = btilde/a2'.
ReflectionlessData synthesize(const std::vector<cplx>& omegas, const std::vector<cplx>& b,
                              const std::vector<cplx>& gammas, const std::vector<cplx>& btilde, int sigma);

/// Transmission coefficient a1 of reflectionless data (ratio of the pole products).
cplx reflectionless_a1(const ReflectionlessData& data, cplx k);

struct ResidueSolution {
  Eigen::VectorXcd alpha1, alpha2;  // residues of column 1 at the omegas
  Eigen::VectorXcd beta1, beta2;    // residues of column 2 at the gammas
  Eigen::VectorXcd c_t, d_t;        // time-dependent constants c e^{2it theta}, d e^{-2it theta}
  double condition = 1.0;           // 1-norm condition estimate of the row-equilibrated system
};

/// Solve the residue system at (x, t). Throws OverflowRegime when an exponent exceeds
/// 700 and SingularSystem when the condition estimate exceeds 1e12.
ResidueSolution solve_residues(const ReflectionlessData& data, double x, double t);

/// M_sol(k) = I + sum alpha/(k - omega) (first column) + sum beta/(k - gamma) (second column).
Eigen::Matrix2cd msol(const ReflectionlessData& data, const ResidueSolution& res, cplx k);
/// Coefficient of 1/k in the large-k expansion of M_sol.
Eigen::Matrix2cd msol_first_moment(const ResidueSolution& res);

/// q_sol = 2i sum beta1.
cplx q_sol(const ReflectionlessData& data, double x, double t);

/// Data with constants c delta(omega)^{-2}, d delta(gamma)^2.
ReflectionlessData delta_modified(const DiscreteSpectrum& spec, const PhaseContext& ctx);

/// Field of the reduced data {omega in Delta, c T(omega)^2 delta(omega)^{-2}} (omega-type poles only).
cplx q_delta(const DiscreteSpectrum& spec, const DeltaPartition& part, const PhaseContext& ctx, double x,
             double t);

nlohmann::json reflectionless_to_json(const ReflectionlessData& d);

}  // namespace nnls
