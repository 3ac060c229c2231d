#pragma once
// Adaptive Runge-Kutta-Fehlberg 7(8) integration of the x-part of the Lax pair, used as an
// independent reference for the Volterra solver. State: Psi = Phi e^{ikx sigma3}, which obeys
// Psi' = -ik[sigma3, Psi] + Q Psi.

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <complex>
#include <Eigen/Core>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using State = std::array<cplx, 4>;  // Psi11, Psi12, Psi21, Psi22

/// Integrate Psi from x_start (Psi = I there) to x_end, restarting at each breakpoint so
/// that jumps of q are never stepped over; inside a piece q and r are sampled strictly
/// in its interior, which selects the correct one-sided values.
inline Eigen::Matrix2cd integrate_lax(cplx k, const std::function<cplx(double)>& q,
                                      const std::function<cplx(double)>& r, double x_start, double x_end,
                                      std::vector<double> breaks, double tol = 1e-13,
                                      double max_step = 0.05) {
  namespace ode = boost::numeric::odeint;
  State s = {1.0, 0.0, 0.0, 1.0};
  const cplx ik = cplx(0.0, 1.0) * k;
  std::vector<double> pts{x_start};
  std::sort(breaks.begin(), breaks.end());
  if (x_end < x_start) std::reverse(breaks.begin(), breaks.end());
  for (double b : breaks)
    if ((b - x_start) * (x_end - b) > 0) pts.push_back(b);
  pts.push_back(x_end);
  // integrate in u = dir * x so the independent variable always increases
  const double dir = x_end < x_start ? -1.0 : 1.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = std::min(pts[i], pts[i + 1]) + 1e-13, hi = std::max(pts[i], pts[i + 1]) - 1e-13;
    auto rhs = [&](const State& y, State& dy, double u) {
      const double xc = std::clamp(dir * u, lo, hi);
      const cplx qx = q(xc), rx = r(xc);
      dy[0] = dir * (qx * y[2]);
      dy[1] = dir * (-2.0 * ik * y[1] + qx * y[3]);
      dy[2] = dir * (2.0 * ik * y[2] + rx * y[0]);
      dy[3] = dir * (rx * y[1]);
    };
    // the step cap keeps the error estimator from striding over features of q
    auto stepper = ode::make_controlled(tol, tol, max_step, ode::runge_kutta_fehlberg78<State>());
    const double u0 = dir * pts[i], u1 = dir * pts[i + 1];
    ode::integrate_adaptive(stepper, rhs, s, u0, u1, (u1 - u0) * 1e-3);
  }
  Eigen::Matrix2cd M;
  M << s[0], s[1], s[2], s[3];
  return M;
}

}  // namespace oracle
