#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nnls/errors.hpp"
#include "nnls/phase.hpp"
#include "nnls/potential.hpp"
#include "nnls/specfun.hpp"

using nnls::cplx;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

nnls::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const nnls::Error& e) {
    return e.kind();
  }
  FAIL("expected an nnls::Error");
  return nnls::ErrorKind::InvalidArgument;
}

// i * int_{s_min}^{-xi} nu(s)/(s-k) ds by composite Simpson on a uniform fine grid.
cplx unsplit_integral(const std::function<cplx(double)>& nu, double lo, double hi, cplx k, int panels) {
  const double h = (hi - lo) / panels;
  cplx acc = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double s = lo + h * i;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * nu(s) / (s - k);
  }
  return I * acc * h / 3.0;
}

// chi without the branch factor: delta(k) = exp(unsplit), so chi = unsplit - i nu0 log(xi + k).
cplx chi_oracle(const nnls::PhaseContext& ctx, cplx k, int panels) {
  const cplx u = unsplit_integral([&](double s) { return ctx.nu_interp(s); }, ctx.s_min(), -ctx.xi(), k, panels);
  return u - I * ctx.nu_at_xi() * std::log(ctx.xi() + k);
}

const nnls::PhaseContext& gaussian_ctx() {
  static const nnls::PhaseContext ctx = nnls::PhaseContext::from_potential(
      nnls::gaussian_potential(cplx(0.25, 0.15), 1.0, 0.2, 10.0, 2001, -1), 0.5);
  return ctx;
}

}  // namespace

TEST_CASE("theta and nu") {
  CHECK(std::abs(nnls::theta(cplx(-0.7), 0.7) + 2 * 0.49) < 1e-15);
  CHECK(nnls::theta(cplx(0.0), 0.3) == cplx(0.0));
  const double h = 1e-5, xi = 0.37;
  CHECK(std::abs((nnls::theta(-xi + h, xi) - nnls::theta(-xi - h, xi)) / (2 * h)) < 1e-10);

  CHECK(nnls::nu(0.0, 0.3, 1) == cplx(0.0));
  const cplx v = nnls::nu(0.1, 0.1, 1);
  CHECK(v.imag() == 0.0);
  CHECK(v.real() == doctest::Approx(-std::log(1.01) / (2 * pi)).epsilon(1e-14));
  CHECK(nnls::nu(cplx(0, 0.1), 0.1, 1).imag() == doctest::Approx(-std::atan(0.01) / (2 * pi)).epsilon(1e-13));
  CHECK(kind_of([] { nnls::nu(1.0, 1.0, -1); }) == nnls::ErrorKind::VanishingJump);
  // 1 + r1 r2 = -0.5 + 0.001i: Im nu near -1/2
  CHECK(kind_of([] { nnls::nu(cplx(-1.5, 1e-3), 1.0, 1); }) == nnls::ErrorKind::AssumptionViolation);
}

TEST_CASE("vanishing and constant nu") {
  const auto zero = nnls::PhaseContext::from_function(0.3, [](double) { return cplx(0.0); });
  for (cplx k : {cplx(0.1, 0.5), cplx(-3.0, -0.2), cplx(2.0, 0.0)}) {
    CHECK(std::abs(nnls::chi(k, zero)) == 0.0);
    CHECK(nnls::delta(k, zero) == cplx(1.0));
  }
  CHECK(zero.delta0() == cplx(1.0));

  const double xi = -0.4;
  const cplx c(0.03, 0.02);
  const auto box = nnls::PhaseContext::from_function(
      xi, [&](double s) { return s >= -xi - 1.0 - 1e-12 ? c : cplx(0.0); });
  for (cplx k : {cplx(0.1, 0.5), cplx(1.3, -0.7), cplx(0.6, 0.0)}) {
    const cplx expect = -I * c * std::log(xi + k + 1.0);
    // the step at -xi-1 is resolved only to the interpolation width
    CHECK(std::abs(nnls::chi(k, box) - expect) < 5e-4);
  }
}

TEST_CASE("chi agrees with the unsplit Cauchy integral") {
  const double xi = 0.2;
  auto nu_fn = [](double s) { return cplx(0.04, 0.01) * std::exp(-(s + 0.5) * (s + 0.5)) + cplx(0.0, 0.005) * std::exp(-s * s / 0.5); };
  const auto ctx = nnls::PhaseContext::from_function(xi, nu_fn);
  CHECK_FALSE(ctx.tail_truncated());
  for (cplx k : {cplx(1, 1), cplx(-0.5, 0.3), cplx(-2.0, -0.4), cplx(0.3, 0.0), cplx(-0.1, 0.05), cplx(4.0, -2.0)}) {
    const cplx direct = unsplit_integral(nu_fn, -xi - 12.0, -xi, k, 400000) - I * nu_fn(-xi) * std::log(xi + k);
    CHECK(std::abs(nnls::chi(k, ctx) - direct) < 1e-8);
  }

  const auto& g = gaussian_ctx();
  CHECK(std::abs(g.nu_at_xi().imag()) > 1e-4);
  const cplx k(1.0, 1.0);
  CHECK(std::abs(nnls::chi(k, g) - chi_oracle(g, k, 200000)) < 1e-8);
  CHECK(std::abs(g.delta0() - std::exp(nnls::chi(cplx(-g.xi()), g))) < 1e-15);
  CHECK(nnls::phase_to_json(g)["xi"] == 0.5);
}

TEST_CASE("delta jump across the cut matches 1 + sigma r1 r2") {
  const auto q0 = nnls::gaussian_potential(cplx(0.25, 0.15), 1.0, 0.2, 10.0, 2001, -1);
  const auto& ctx = gaussian_ctx();
  const double eps = 1e-5;
  double worst = 0.0;
  for (int j = 0; j < 20; ++j) {
    const double s = -ctx.xi() - 0.05 - 0.15 * j;
    auto ratio = [&](double e) { return nnls::delta(cplx(s, e), ctx) / nnls::delta(cplx(s, -e), ctx); };
    const cplx extrapolated = 2.0 * ratio(eps / 2) - ratio(eps);
    const auto smp = nnls::scattering_sample(q0, s);
    worst = std::max(worst, std::abs(extrapolated - (1.0 - smp.r1 * smp.r2)));
  }
  CHECK(worst <= 1e-6);
  CHECK(kind_of([&] { nnls::chi(cplx(-ctx.xi() - 1.0), ctx); }) == nnls::ErrorKind::OnCutError);
  CHECK(kind_of([&] { nnls::delta(cplx(-ctx.xi() - 0.3), ctx); }) == nnls::ErrorKind::OnCutError);
}

TEST_CASE("delta tends to one like 1/k") {
  const auto& ctx = gaussian_ctx();
  for (double phi : {pi / 4, pi / 2, 3 * pi / 4}) {
    double prev = 0.0;
    for (double R : {1e2, 2e2, 1e3, 2e3, 1e4, 2e4}) {
      const double d = std::abs(nnls::delta(std::polar(R, phi), ctx) - 1.0);
      if (prev > 0.0 && R != 1e3 && R != 1e4) CHECK(prev / d == doctest::Approx(2.0).epsilon(0.02));
      prev = d;
    }
  }
}

TEST_CASE("Holder estimate near the stationary point") {
  const auto& ctx = gaussian_ctx();
  const cplx nu0 = ctx.nu_at_xi();
  const nnls::BranchSpec cut{cplx(-ctx.xi()), cplx(-1.0)};
  double lo = 1e300, hi = 0.0;
  for (double phi : {-pi / 4, 0.0, pi / 4}) {
    for (int i = 0; i <= 30; ++i) {
      const double r = std::pow(10.0, -3.0 + 0.1 * i);
      const cplx k = -ctx.xi() + std::polar(r, phi);
      const double num = std::abs(nnls::delta(k, ctx) - ctx.delta0() * nnls::branch_power(k, I * nu0, cut));
      const double ratio = num / std::pow(r, 0.5 - nu0.imag());
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo <= 100.0);
}

TEST_CASE("delta is analytic off the cut") {
  const auto& ctx = gaussian_ctx();
  const double h = 1e-4;
  for (cplx k : {cplx(0.5, 0.4), cplx(-2.0, 0.1), cplx(-1.0, -0.5), cplx(1.5, -0.1)}) {
    const cplx dx = (nnls::delta(k + h, ctx) - nnls::delta(k - h, ctx)) / (2 * h);
    const cplx dy = (nnls::delta(k + I * h, ctx) - nnls::delta(k - I * h, ctx)) / (2 * h);
    CHECK(std::abs(dy - I * dx) <= 1e-6);
  }
}

TEST_CASE("invalid phase options") {
  nnls::PhaseOptions o;
  o.spacing = 0.05;
  CHECK(kind_of([&] { nnls::PhaseContext::from_function(0.0, [](double) { return cplx(0.0); }, o); }) ==
        nnls::ErrorKind::InvalidArgument);
  o.spacing = 0.01;
  o.max_window = 2.0;
  const auto t = nnls::PhaseContext::from_function(0.0, [](double) { return cplx(1e-3); }, o);
  CHECK(t.tail_truncated());
}
