#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "benchmark.hpp"
#include "nnls/errors.hpp"
#include "nnls/spectrum.hpp"

using nnls::cplx;
using nnls::Rect;

namespace {

double nearest(const std::vector<cplx>& v, cplx z) {
  double best = 1e300;
  for (cplx w : v) best = std::min(best, std::abs(w - z));
  return best;
}

nnls::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const nnls::Error& e) {
    return e.kind();
  }
  FAIL("expected an nnls::Error");
  return nnls::ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("constant function has no zeros") {
  const auto z = nnls::locate_zeros([](cplx) { return cplx(1.0); }, Rect{0.01, 4, 0.01, 4}, 1e-8);
  CHECK(z.empty());
  CHECK(nnls::winding_number([](cplx) { return cplx(1.0); }, Rect{-1, 1, -1, 1}, 1e-8) == 0);
}

TEST_CASE("planted simple zeros are recovered") {
  const cplx z0(1.0, 0.5);
  auto f = [&](cplx z) { return (z - z0) * std::exp(z); };
  const auto found = nnls::locate_zeros(f, Rect{0.01, 4, 0.01, 4}, 1e-8);
  REQUIRE(found.size() == 1);
  CHECK(std::abs(found[0] - z0) < 1e-10);

  const std::vector<cplx> planted{{0.3, 0.2}, {0.31, 0.25}, {2.5, 3.1}, {1.7, 0.9}};
  auto g = [&](cplx z) {
    cplx p = 2.0 + 0.1 * z;
    for (cplx w : planted) p *= (z - w);
    return p;
  };
  const Rect r{0.01, 4, 0.01, 4};
  CHECK(nnls::winding_number(g, r, 1e-8) == 4);
  const auto many = nnls::locate_zeros(g, r, 1e-8);
  REQUIRE(many.size() == planted.size());
  for (cplx w : planted) CHECK(nearest(many, w) < 1e-10);
  for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i - 1].real() <= many[i].real());
  for (cplx w : many) CHECK(std::abs(g(w)) <= 1e-10);
}

TEST_CASE("zero on the contour and double zeros are reported") {
  auto on_edge = [](cplx z) { return z - cplx(1.0, 0.01); };
  CHECK(kind_of([&] { nnls::winding_number(on_edge, Rect{0.01, 4, 0.01, 4}, 1e-8); }) ==
        nnls::ErrorKind::BoundaryZero);
  auto dbl = [](cplx z) { return (z - cplx(1.3, 0.7)) * (z - cplx(1.3, 0.7)); };
  CHECK(kind_of([&] { nnls::locate_zeros(dbl, Rect{0.01, 4, 0.01, 4}, 1e-8); }) ==
        nnls::ErrorKind::MultiplicityError);
}

TEST_CASE("zero and small potentials have no discrete spectrum") {
  nnls::SpectrumSearch s;
  s.kmax = 2.0;
  const auto z = nnls::find_spectrum(nnls::zero_potential(4.0, 201, 1), s);
  CHECK(z.spectrum.omegas.empty());
  CHECK(z.spectrum.gammas.empty());
  const auto g = nnls::find_spectrum(nnls::gaussian_potential(0.1, 1.0, 0.0, 8.0, 801, 1), s);
  CHECK(g.winding_upper == 0);
  CHECK(g.winding_lower == 0);
  const auto e = nnls::norming_constants(nnls::zero_potential(4.0, 201, 1), {});
  CHECK(e.omegas.empty());
  CHECK(e.c.empty());
}

TEST_CASE("direct scattering of a synthesized soliton recovers its poles and constants") {
  const auto q0 = bench::soliton_potential();
  nnls::SpectrumSearch s;
  s.kmax = 1.5;
  const auto r = nnls::find_spectrum(q0, s);
  const auto planted = bench::soliton();
  CHECK(r.winding_upper == 1);
  CHECK(r.winding_lower == 1);
  REQUIRE(r.spectrum.omegas.size() == 2);
  REQUIRE(r.spectrum.gammas.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(nearest(r.spectrum.omegas, planted.omegas[i]) < 1e-6);
    CHECK(nearest(r.spectrum.gammas, planted.gammas[i]) < 1e-6);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    const auto j = std::min_element(planted.omegas.begin(), planted.omegas.end(), [&](cplx a, cplx b) {
                     return std::abs(a - r.spectrum.omegas[i]) < std::abs(b - r.spectrum.omegas[i]);
                   }) - planted.omegas.begin();
    CHECK(std::abs(r.spectrum.c[i] - planted.c[j]) < 1e-4 * std::abs(planted.c[j]));
    const auto m = std::min_element(planted.gammas.begin(), planted.gammas.end(), [&](cplx a, cplx b) {
                     return std::abs(a - r.spectrum.gammas[i]) < std::abs(b - r.spectrum.gammas[i]);
                   }) - planted.gammas.begin();
    CHECK(std::abs(r.spectrum.d[i] - planted.d[m]) < 1e-4 * std::abs(planted.d[m]));
  }
  // mirror pairs are exact and the proportionality constants obey b(-conj w) = sigma / conj(b(w))
  CHECK(std::abs(r.spectrum.omegas[0] + std::conj(r.spectrum.omegas[1])) < 1e-8);
  CHECK(std::abs(r.spectrum.b_omega[0] - 1.0 / std::conj(r.spectrum.b_omega[1])) < 1e-6);
  for (double res : r.spectrum.proportionality_residual) CHECK(res < 1e-6);
}

TEST_CASE("spectrum JSON round trip and validation") {
  nnls::DiscreteSpectrum s;
  s.sigma = -1;
  s.omegas = {{0.5, 1.0}};
  s.c = {{1.0, 2.0}};
  s.gammas = {{0.2, -0.3}};
  s.d = {{-1.0, 0.5}};
  const auto back = nnls::spectrum_from_json(nnls::spectrum_to_json(s));
  CHECK(back.sigma == -1);
  CHECK(back.omegas == s.omegas);
  CHECK(back.c == s.c);
  CHECK(back.gammas == s.gammas);
  CHECK(back.d == s.d);
  auto j = nnls::spectrum_to_json(s);
  j["omegas"] = nlohmann::json::array({nlohmann::json::array({0.5, -1.0})});
  CHECK(kind_of([&] { nnls::spectrum_from_json(j); }) == nnls::ErrorKind::ConfigError);
}

TEST_CASE("delta partition") {
  nnls::DiscreteSpectrum empty;
  const auto p0 = nnls::classify(empty, 0.3);
  CHECK(p0.delta1.empty());
  CHECK(p0.delta.empty());

  nnls::DiscreteSpectrum pair;
  pair.omegas = {{1, 1}, {-1, 1}};
  pair.c = {1.0, 1.0};
  CHECK(nnls::classify(pair, -2.0).delta1.empty());

  // no gamma poles to the right of the stationary point: Delta equals Delta1
  nnls::DiscreteSpectrum s;
  s.omegas = {{-0.5, 1}, {0.5, 1}, {-1.5, 0.5}, {1.5, 0.5}};
  s.c = {1.0, 1.0, 1.0, 1.0};
  s.gammas = {{-0.7, -1}, {0.7, -1}};
  s.d = {1.0, 1.0};
  const auto p = nnls::classify(s, -1.0);
  CHECK(p.delta2.empty());
  CHECK(p.delta1 == std::vector<cplx>{{1.5, 0.5}});
  CHECK(p.delta == std::vector<cplx>{{-1.5, 0.5}, {1.5, 0.5}});

  // set semantics: input order does not matter
  nnls::DiscreteSpectrum shuffled = s;
  std::reverse(shuffled.omegas.begin(), shuffled.omegas.end());
  std::rotate(shuffled.gammas.begin(), shuffled.gammas.begin() + 1, shuffled.gammas.end());
  for (double xi : {-1.0, -0.2, 0.1, 0.9, 2.0}) {
    const auto a = nnls::classify(s, xi), b = nnls::classify(shuffled, xi);
    CHECK(a.delta1 == b.delta1);
    CHECK(a.delta2 == b.delta2);
    CHECK(a.delta == b.delta);
  }
  CHECK(kind_of([&] { nnls::classify(s, 0.5); }) == nnls::ErrorKind::OnThresholdError);
}

TEST_CASE("Blaschke-type factor T") {
  nnls::DeltaPartition none;
  CHECK(nnls::blaschke_T(cplx(0.3, 0.2), none) == cplx(1.0));

  const cplx w(1, 1), g(1, -1);
  nnls::DeltaPartition p;
  p.delta1_plus = {w};
  p.delta2_plus = {g};
  p.delta2_minus = {-std::conj(g)};
  const cplx z = 0.0;
  const cplx expect = ((z - w) * (z + std::conj(w))) / ((z - g) * (z + std::conj(g)));
  CHECK(std::abs(nnls::blaschke_T(z, p) - expect) < 1e-15);
  CHECK(std::abs(nnls::blaschke_T(cplx(1e6, 3e5), p) - 1.0) < 1e-5);
  CHECK(kind_of([&] { nnls::blaschke_T(g, p); }) == nnls::ErrorKind::PoleHit);

  // the product is the only definition: compare |T(z)| / |T(-conj z)| with the direct products
  const cplx z2(0.4, 0.7);
  auto direct = [&](cplx u) { return ((u - w) * (u + std::conj(w))) / ((u - g) * (u + std::conj(g))); };
  CHECK(std::abs(std::abs(nnls::blaschke_T(z2, p)) / std::abs(nnls::blaschke_T(-std::conj(z2), p)) -
                 std::abs(direct(z2)) / std::abs(direct(-std::conj(z2)))) < 1e-12);
}
