#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <json.hpp>

#include "nnls/potential.hpp"
#include "nnls/scattering.hpp"

namespace nnls {

/// theta(k) = 4 k xi + 2 k^2 with xi = x/(4t); stationary at k = -xi.
cplx theta(cplx k, double xi);

/// nu = -log(1 + sigma r1 r2)/(2 pi), principal branch.
/// Throws VanishingJump when |1 + sigma r1 r2| <= 1e-12 and AssumptionViolation when
/// Im nu falls outside (-1/4, 1/2).
cplx nu(cplx r1, cplx r2, int sigma);

struct PhaseOptions {
  double spacing = 0.01;         // nu sample spacing on (-inf, -xi]
  double tail_threshold = 1e-12; // truncate once |nu| stays below this
  double tail_run = 1.0;         // ... over a window of this length
  double max_window = 100.0;     // hard cap on the sampled window length
  double quad_tol = 1e-10;       // absolute tolerance of each chi integral
  int max_depth = 4;             // bisection depth per panel; panels are already one sample wide
};

/// Everything tied to one ray: xi, sampled nu on [-xi - W, -xi], nu(-xi) and delta0.
class PhaseContext {
 public:
  /// nu_of_s is sampled at s_j = -xi - j*spacing until the tail criterion holds.
  static PhaseContext from_function(double xi, const std::function<cplx(double)>& nu_of_s,
                                    const PhaseOptions& opt = {});
  /// nu(s) from the scattering data of q0 at each node.
  static PhaseContext from_potential(const Potential& q0, double xi, const PhaseOptions& opt = {},
                                     const VolterraOptions& vopt = {});

  double xi() const { return xi_; }
  cplx nu_at_xi() const { return samples_.front(); }
  cplx delta0() const { return delta0_; }
  double spacing() const { return h_; }
  double s_min() const { return -xi_ - h_ * double(samples_.size() - 1); }
  bool tail_truncated() const { return truncated_; }
  const std::vector<cplx>& nu_samples() const { return samples_; }
  const PhaseOptions& options() const { return opt_; }

  /// Cubic Lagrange interpolant of the samples; zero left of s_min. Requires s <= -xi.
  cplx nu_interp(double s) const;

 private:
  PhaseContext(double xi, std::vector<cplx> samples, bool truncated, const PhaseOptions& opt);
  double xi_;
  double h_;
  std::vector<cplx> samples_;
  bool truncated_;
  PhaseOptions opt_;
  cplx delta0_;
};

/// chi(k) = -i nu(-xi) log(xi+k+1) + i int_{-xi-1}^{-xi} (nu(s)-nu(-xi))/(s-k) ds
///          + i int_{-inf}^{-xi-1} nu(s)/(s-k) ds.
/// Throws OnCutError for real k < -xi and QuadratureFailure if the tolerance is missed.
cplx chi(cplx k, const PhaseContext& ctx);

/// delta(k) = (xi + k)^{i nu(-xi)} exp(chi(k)), cut along (-inf, -xi].
cplx delta(cplx k, const PhaseContext& ctx);

nlohmann::json phase_to_json(const PhaseContext& ctx);

}  // namespace nnls
