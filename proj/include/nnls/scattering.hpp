#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "nnls/potential.hpp"

namespace nnls {

enum class JostSide { left, right };

struct VolterraOptions {
  double picard_tol = 1e-12;
  int max_iterations = 200;
  /// Combine the h and 2h trapezoid solutions (h^2 error cancellation) when the grid allows it.
  bool richardson = true;
};

/// Psi_j(x; k) = Phi_j(x; k) e^{ikx sigma3}; left is normalized at -inf, right at +inf.
struct JostMatrix {
  Eigen::Matrix2cd value;
  JostSide side = JostSide::left;
  cplx k;
  double x = 0.0;
  int iterations = 0;     // Picard sweeps of the slowest column
  double sup_norm = 0.0;  // max entry modulus along the sweep
  double bound = 0.0;     // exp(||q0||_L1)
  bool extrapolated = false;
};

JostMatrix jost_left(const Potential& q0, cplx k, double x, const VolterraOptions& opt = {});
JostMatrix jost_right(const Potential& q0, cplx k, double x, const VolterraOptions& opt = {});

/// Columns analytic in the upper half plane: first column of Psi_1, second of Psi_2 (and
/// the complementary pair for the lower half plane). These never need continuation gating.
struct AnalyticColumns {
  Eigen::Vector2cd left;
  Eigen::Vector2cd right;
};
AnalyticColumns upper_columns(const Potential& q0, cplx k, const VolterraOptions& opt = {});
AnalyticColumns lower_columns(const Potential& q0, cplx k, const VolterraOptions& opt = {});

struct ScatteringSample {
  cplx k;
  cplx a1, a2, b, btilde;
  cplx r1, r2;
};

ScatteringSample scattering_sample(const Potential& q0, cplx k, const VolterraOptions& opt = {});

struct ReflectionGrid {
  std::vector<ScatteringSample> samples;
  double r1_h1_norm = 0.0;
  double r2_h1_norm = 0.0;
  double max_abs_r1 = 0.0;
  double max_abs_r2 = 0.0;
  double min_abs_jump = 0.0;  // min |1 + sigma r1 r2|
};

ReflectionGrid reflection_grid(const Potential& q0, double kmin, double kmax, int n,
                               const VolterraOptions& opt = {}, int threads = 1);

/// a1 on the closed upper half plane, a2 on the closed lower half plane.
cplx a1_upper(const Potential& q0, cplx k, const VolterraOptions& opt = {});
cplx a2_lower(const Potential& q0, cplx k, const VolterraOptions& opt = {});

/// Central differences with step 1e-6.
cplx a1_derivative(const Potential& q0, cplx k, const VolterraOptions& opt = {});
cplx a2_derivative(const Potential& q0, cplx k, const VolterraOptions& opt = {});

/// At a zero omega of a1 the analytic columns are parallel: Psi_1^(1) = b(omega) Psi_2^(2).
/// At a zero gamma of a2: Psi_1^(2) = btilde(gamma) Psi_2^(1). Least-squares constant and
/// the residual of the fit.
struct Proportionality {
  cplx constant;
  double residual = 0.0;
};
Proportionality proportionality_upper(const Potential& q0, cplx omega, const VolterraOptions& opt = {});
Proportionality proportionality_lower(const Potential& q0, cplx gamma, const VolterraOptions& opt = {});

}  // namespace nnls
