#include "nnls/phase.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nnls/errors.hpp"
#include "nnls/io.hpp"
#include "nnls/specfun.hpp"

namespace nnls {

namespace {
constexpr double kPi = std::numbers::pi;
}

cplx theta(cplx k, double xi) { return 4.0 * k * xi + 2.0 * k * k; }

cplx nu(cplx r1, cplx r2, int sigma) {
  const cplx w = 1.0 + double(sigma) * r1 * r2;
  if (std::abs(w) <= 1e-12) throw Error(ErrorKind::VanishingJump, "1 + sigma r1 r2 vanishes");
  const cplx v = -complex_log_principal(w) / (2.0 * kPi);
  if (!(v.imag() > -0.25 && v.imag() < 0.5)) {
    std::ostringstream os;
    os << "Im nu = " << v.imag() << " outside (-1/4, 1/2)";
    throw Error(ErrorKind::AssumptionViolation, os.str());
  }
  return v;
}

PhaseContext::PhaseContext(double xi, std::vector<cplx> samples, bool truncated, const PhaseOptions& opt)
    : xi_(xi), h_(opt.spacing), samples_(std::move(samples)), truncated_(truncated), opt_(opt), delta0_(1.0) {
  delta0_ = std::exp(chi(cplx(-xi_, 0.0), *this));
}

PhaseContext PhaseContext::from_function(double xi, const std::function<cplx(double)>& nu_of_s,
                                         const PhaseOptions& opt) {
  if (!(opt.spacing > 0.0) || opt.spacing > 0.01)
    throw Error(ErrorKind::InvalidArgument, "nu spacing must be in (0, 0.01]");
  const int min_nodes = static_cast<int>(std::ceil(1.0 / opt.spacing)) + 4;
  const int run = std::max(4, static_cast<int>(std::ceil(opt.tail_run / opt.spacing)));
  const int cap = static_cast<int>(std::ceil(opt.max_window / opt.spacing)) + 1;
  std::vector<cplx> v;
  int quiet = 0;
  bool truncated = false;
  for (int j = 0;; ++j) {
    const cplx value = nu_of_s(-xi - opt.spacing * j);
    v.push_back(value);
    quiet = std::abs(value) < opt.tail_threshold ? quiet + 1 : 0;
    if (j + 1 >= min_nodes && quiet >= run) break;
    if (j + 1 >= cap) {
      truncated = true;
      break;
    }
  }
  return PhaseContext(xi, std::move(v), truncated, opt);
}

PhaseContext PhaseContext::from_potential(const Potential& q0, double xi, const PhaseOptions& opt,
                                          const VolterraOptions& vopt) {
  const int sigma = q0.sigma();
  return from_function(
      xi,
      [&](double s) {
        const ScatteringSample smp = scattering_sample(q0, s, vopt);
        return nu(smp.r1, smp.r2, sigma);
      },
      opt);
}

cplx PhaseContext::nu_interp(double s) const {
  const double u = (-xi_ - s) / h_;
  if (u < -1e-9) throw Error(ErrorKind::InvalidArgument, "nu is only sampled on (-inf, -xi]");
  const int m = static_cast<int>(samples_.size());
  if (u > m - 1) return 0.0;
  if (m < 4) return samples_[std::min(m - 1, static_cast<int>(std::lround(u)))];
  const int i = static_cast<int>(std::floor(u));
  const int j0 = std::clamp(i - 1, 0, m - 4);
  cplx acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) w *= (u - (j0 + b)) / double(a - b);
    acc += w * samples_[j0 + a];
  }
  return acc;
}

namespace {

// int_lo^hi g(s)/(s-k) ds on node-aligned panels; when k is close to the segment the
// linear Taylor part of g at kappa = clamp(Re k) is subtracted and integrated in closed form,
// leaving an integrand that stays smooth as k approaches the real axis.
cplx cauchy_integral(const std::function<cplx(double)>& g, double lo, double hi, cplx k, double h,
                     const PhaseOptions& opt, double& err_total) {
  if (!(hi > lo)) return 0.0;
  const bool near = std::abs(k.imag()) < 1.0 && k.real() > lo - 1.0 && k.real() < hi + 1.0;
  const double kappa = std::clamp(k.real(), lo, hi);
  const cplx c = near ? g(kappa) : cplx(0.0);
  cplx slope = 0.0;
  if (near) {
    const double eta = 1e-6 * std::max(1.0, h / 0.01);
    const double a = std::max(lo, kappa - eta), b = std::min(hi, kappa + eta);
    slope = (g(b) - g(a)) / (b - a);
  }
  auto f = [&](double s) { return (g(s) - c - slope * (s - kappa)) / (s - k); };

  std::vector<double> pts;
  const int panels = std::max(1, static_cast<int>(std::lround((hi - lo) / h)));
  for (int i = 0; i <= panels; ++i) pts.push_back(lo + (hi - lo) * double(i) / panels);
  if (near && kappa > lo && kappa < hi) pts.push_back(kappa);
  if (near && k.imag() != 0.0) {
    // graded breakpoints resolve the layer of width |Im k| around kappa
    for (double d = std::abs(k.imag()); d < h; d *= 8.0) {
      if (kappa - d > lo) pts.push_back(kappa - d);
      if (kappa + d < hi) pts.push_back(kappa + d);
    }
  }
  std::sort(pts.begin(), pts.end());

  cplx total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] - pts[i] <= 0.0) continue;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, pts[i], pts[i + 1], opt.max_depth, 1e-10, &err);
    err_total += err;
  }
  if (near && (c != 0.0 || k != cplx(kappa, 0.0))) {
    const cplx logs = complex_log_principal(hi - k) - complex_log_principal(lo - k);
    total += c * logs + slope * ((hi - lo) + (k - kappa) * logs);
  } else if (near) {
    total += slope * (hi - lo);
  }
  return total;
}

}  // namespace

cplx chi(cplx k, const PhaseContext& ctx) {
  const double xi = ctx.xi();
  if (k.imag() == 0.0 && k.real() < -xi) {
    std::ostringstream os;
    os << "k = " << k.real() << " lies on the cut (-inf, " << -xi << "]";
    throw Error(ErrorKind::OnCutError, os.str());
  }
  const cplx nu0 = ctx.nu_at_xi();
  const double b = -xi, a = -xi - 1.0;
  const double smin = ctx.s_min();
  double err = 0.0;
  cplx value = 0.0;
  if (nu0 != 0.0) value += -cplx(0.0, 1.0) * nu0 * complex_log_principal(xi + k + 1.0);
  const cplx mid = cauchy_integral([&](double s) { return ctx.nu_interp(s) - nu0; }, std::max(a, smin), b, k,
                                   ctx.spacing(), ctx.options(), err);
  const cplx tail = cauchy_integral([&](double s) { return ctx.nu_interp(s); }, smin, a, k, ctx.spacing(),
                                    ctx.options(), err);
  if (err > ctx.options().quad_tol) {
    std::ostringstream os;
    os << "chi quadrature error estimate " << err << " exceeds " << ctx.options().quad_tol << " at k = " << k;
    throw Error(ErrorKind::QuadratureFailure, os.str());
  }
  return value + cplx(0.0, 1.0) * (mid + tail);
}

cplx delta(cplx k, const PhaseContext& ctx) {
  const BranchSpec cut{cplx(-ctx.xi(), 0.0), cplx(-1.0, 0.0)};
  const cplx power = ctx.nu_at_xi() == 0.0 && k != cplx(-ctx.xi(), 0.0)
                         ? cplx(1.0)
                         : branch_power(k, cplx(0.0, 1.0) * ctx.nu_at_xi(), cut);
  return power * std::exp(chi(k, ctx));
}

nlohmann::json phase_to_json(const PhaseContext& ctx) {
  return {{"xi", ctx.xi()},
          {"nu_at_stationary_point", complex_to_json(ctx.nu_at_xi())},
          {"delta0", complex_to_json(ctx.delta0())},
          {"window", {ctx.s_min(), -ctx.xi()}},
          {"spacing", ctx.spacing()},
          {"samples", ctx.nu_samples().size()},
          {"tail_truncated", ctx.tail_truncated()},
          {"tail_threshold", ctx.options().tail_threshold},
          {"quad_tol", ctx.options().quad_tol}};
}

}  // namespace nnls
