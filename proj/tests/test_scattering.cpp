#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <Eigen/LU>

#include "lax_oracle.hpp"
#include "nnls/errors.hpp"
#include "nnls/potential.hpp"
#include "nnls/scattering.hpp"

using nnls::cplx;
using nnls::Potential;
using Eigen::Matrix2cd;

namespace {

// Box of height 0.3 on [-1, 0], h = 0.0025.
Potential test_box(int sigma = 1) { return nnls::box_potential(0.3, -1.0, 0.0, 2.0, 1601, sigma); }

std::function<cplx(double)> mirror_of(const std::function<cplx(double)>& q, int sigma) {
  return [q, sigma](double x) { return -double(sigma) * std::conj(q(-x)); };
}

double max_entry(const Matrix2cd& m) { return m.cwiseAbs().maxCoeff(); }

Matrix2cd oracle_left(const std::function<cplx(double)>& q, int sigma, double L, cplx k, double x,
                      std::vector<double> breaks = {}) {
  return oracle::integrate_lax(k, q, mirror_of(q, sigma), -L, x, breaks);
}

Matrix2cd oracle_right(const std::function<cplx(double)>& q, int sigma, double L, cplx k, double x,
                       std::vector<double> breaks = {}) {
  return oracle::integrate_lax(k, q, mirror_of(q, sigma), L, x, breaks);
}

struct Identities {
  double det = 0, btilde = 0, a1 = 0, a2 = 0, jump = 0;
};

Identities identity_residuals(const Potential& q0, const std::vector<double>& ks) {
  Identities r;
  const double s = q0.sigma();
  for (double k : ks) {
    const auto p = nnls::scattering_sample(q0, k);
    const auto m = nnls::scattering_sample(q0, -k);
    r.det = std::max(r.det, std::abs(p.a1 * p.a2 - p.b * p.btilde - 1.0));
    r.btilde = std::max(r.btilde, std::abs(p.btilde + s * std::conj(m.b)));
    r.a1 = std::max(r.a1, std::abs(p.a1 - std::conj(m.a1)));
    r.a2 = std::max(r.a2, std::abs(p.a2 - std::conj(m.a2)));
    r.jump = std::max(r.jump, std::abs(1.0 + s * p.r1 * p.r2 - 1.0 / (p.a1 * p.a2)));
  }
  return r;
}

}  // namespace

TEST_CASE("zero potential has identity Jost matrices and trivial scattering data") {
  const Potential z = nnls::zero_potential(3.0, 61, 1);
  for (cplx k : {cplx(0.3), cplx(-2.0), cplx(1.0, 0.5), cplx(0.2, -0.7)}) {
    CHECK(max_entry(nnls::jost_left(z, k, 0.0).value - Matrix2cd::Identity()) < 1e-15);
    CHECK(max_entry(nnls::jost_right(z, k, 1.0).value - Matrix2cd::Identity()) < 1e-15);
  }
  const auto s = nnls::scattering_sample(z, 2.0);
  CHECK(std::abs(s.a1 - 1.0) < 1e-15);
  CHECK(std::abs(s.a2 - 1.0) < 1e-15);
  CHECK(std::abs(s.b) < 1e-15);
  CHECK(std::abs(s.r1) < 1e-15);
  CHECK(std::abs(s.r2) < 1e-15);
}

TEST_CASE("box potential Jost matrices agree with the Runge-Kutta oracle") {
  const Potential q0 = test_box();
  auto q = [](double x) { return (x > -1.0 && x < 0.0) ? cplx(0.3) : cplx(0.0); };
  const std::vector<double> breaks{-1.0, 0.0, 1.0};
  for (double k : {-4.3, -1.0, 0.0, 0.7, 1.0, 2.5, 5.0})
    for (double x : {0.0, -0.5, 1.0}) {
      CAPTURE(k);
      CAPTURE(x);
      CHECK(max_entry(nnls::jost_left(q0, k, x).value - oracle_left(q, 1, 2.0, k, x, breaks)) < 1e-8);
      CHECK(max_entry(nnls::jost_right(q0, k, x).value - oracle_right(q, 1, 2.0, k, x, breaks)) < 1e-8);
    }
}

TEST_CASE("box potential at complex k agrees with the oracle") {
  const Potential q0 = test_box(-1);
  auto q = [](double x) { return (x > -1.0 && x < 0.0) ? cplx(0.3) : cplx(0.0); };
  for (cplx k : {cplx(0.5, 0.8), cplx(-1.2, -0.4)}) {
    CAPTURE(k);
    const Matrix2cd ref = oracle_left(q, -1, 2.0, k, 0.0, {-1.0, 0.0, 1.0});
    CHECK(max_entry(nnls::jost_left(q0, k, 0.0).value - ref) < 1e-8 * std::max(1.0, max_entry(ref)));
  }
}

TEST_CASE("complex Gaussian Jost matrices agree with the oracle") {
  const cplx amp(0.6, 0.2);
  const Potential q0 = nnls::gaussian_potential(amp, 1.0, 0.0, 8.0, 3201, 1);
  auto q = [amp](double x) { return amp * std::exp(-x * x); };
  for (double k : {-3.0, -0.5, 0.0, 0.8, 2.0})
    for (double x : {0.0, 1.5}) {
      CAPTURE(k);
      CAPTURE(x);
      CHECK(max_entry(nnls::jost_left(q0, k, x).value - oracle_left(q, 1, 8.0, k, x)) < 5e-9);
      CHECK(max_entry(nnls::jost_right(q0, k, x).value - oracle_right(q, 1, 8.0, k, x)) < 5e-9);
    }
}

TEST_CASE("Richardson extrapolation improves on plain trapezoid sweeps") {
  const cplx amp(0.6, 0.2);
  const Potential q0 = nnls::gaussian_potential(amp, 1.0, 0.0, 8.0, 801, 1);
  auto q = [amp](double x) { return amp * std::exp(-x * x); };
  const Matrix2cd ref = oracle_left(q, 1, 8.0, 1.3, 0.0);
  nnls::VolterraOptions plain;
  plain.richardson = false;
  const auto with = nnls::jost_left(q0, 1.3, 0.0);
  const auto without = nnls::jost_left(q0, 1.3, 0.0, plain);
  CHECK(with.extrapolated);
  CHECK_FALSE(without.extrapolated);
  CHECK(max_entry(with.value - ref) * 10 < max_entry(without.value - ref));
}

TEST_CASE("Jost matrices are unimodular and obey the growth bound") {
  const Potential g = nnls::gaussian_potential(0.2, 1.0, 0.0, 8.0, 1601, 1);
  for (double k : {0.5, -0.5}) {
    const auto l = nnls::jost_left(g, k, 0.0);
    const auto r = nnls::jost_right(g, k, 0.0);
    CHECK(std::abs(l.value.determinant() - 1.0) < 1e-9);
    CHECK(std::abs(r.value.determinant() - 1.0) < 1e-9);
    CHECK(l.sup_norm <= 1.1 * l.bound);
    CHECK(r.sup_norm <= 1.1 * r.bound);
  }
}

TEST_CASE("right Jost matrix is the reflected conjugate of the left one") {
  for (int sigma : {1, -1}) {
    const Potential q0 = nnls::box_potential(cplx(0.3, 0.1), -1.0, 0.0, 2.0, 1601, sigma);
    for (double x : {0.0, 0.5, -0.75})
      for (cplx k : {cplx(0.7), cplx(-2.0), cplx(0.4, 0.3)}) {
        const Matrix2cd m = nnls::jost_left(q0, -std::conj(k), -x).value.conjugate();
        Matrix2cd expect;
        expect << m(1, 1), double(sigma) * m(1, 0), double(sigma) * m(0, 1), m(0, 0);
        CAPTURE(sigma);
        CAPTURE(x);
        CAPTURE(k);
        CHECK(max_entry(nnls::jost_right(q0, k, x).value - expect) < 1e-8);
      }
  }
}

TEST_CASE("scattering data identities hold for several potentials") {
  std::vector<double> ks;
  for (int i = 0; i <= 24; ++i) ks.push_back(-4.0 + i / 3.0);
  const std::vector<Potential> pots{test_box(), nnls::gaussian_potential(cplx(0.6, 0.2), 1.0, 0.3, 8.0, 3201, -1),
                                    nnls::sech_potential(cplx(0.35, -0.2), 1.0, 20.0, 8001, 1)};
  for (const Potential& q0 : pots) {
    const Identities r = identity_residuals(q0, ks);
    CHECK(r.det < 1e-8);
    CHECK(r.btilde < 1e-8);
    CHECK(r.a1 < 1e-8);
    CHECK(r.a2 < 1e-8);
    CHECK(r.jump < 1e-8);
  }
}

TEST_CASE("a1 tends to one at large real k") {
  const Potential g = nnls::gaussian_potential(cplx(0.6, 0.2), 1.0, 0.0, 8.0, 3201, 1);
  double prev = 1e9;
  for (double k : {2.0, 4.0, 8.0}) {
    const double d = std::max(std::abs(nnls::scattering_sample(g, k).a1 - 1.0),
                              std::abs(nnls::scattering_sample(g, -k).a1 - 1.0));
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("reflection grid") {
  const auto zero = nnls::reflection_grid(nnls::zero_potential(2.0, 41, 1), -3.0, 3.0, 7);
  for (const auto& s : zero.samples) {
    CHECK(std::abs(s.r1) == 0.0);
    CHECK(std::abs(s.r2) == 0.0);
  }
  const Potential small = nnls::gaussian_potential(0.1, 1.0, 0.0, 8.0, 1601, 1);
  const auto a = nnls::reflection_grid(small, -2.0, 2.0, 5);
  const auto b = nnls::reflection_grid(small, -2.0, 2.0, 9, {}, 2);
  CHECK(a.max_abs_r1 < 0.5);
  CHECK(a.min_abs_jump > 0.5);
  CHECK(a.r1_h1_norm > 0.0);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(a.samples[i].r1 - b.samples[2 * i].r1) <= 1e-9);
    CHECK(std::abs(a.samples[i].r2 - b.samples[2 * i].r2) <= 1e-9);
  }
  CHECK_THROWS_AS(nnls::reflection_grid(small, 1.0, -1.0, 5), nnls::Error);
}

TEST_CASE("continuation to complex k is gated on the decay class") {
  const Potential sech = nnls::sech_potential(0.3, 1.0, 20.0, 2001, 1);  // exponential rate 2
  CHECK_NOTHROW(nnls::jost_left(sech, cplx(0.3, 0.5), 0.0));
  try {
    nnls::jost_left(sech, cplx(0.3, 1.5), 0.0);
    FAIL("expected ContinuationInvalid");
  } catch (const nnls::Error& e) {
    CHECK(e.kind() == nnls::ErrorKind::ContinuationInvalid);
  }
  std::vector<cplx> v(201);
  for (int j = 0; j < 201; ++j) v[j] = 0.2 * std::exp(-std::pow(-2.0 + 0.02 * j, 2));
  const Potential generic(2.0, v, 1, nnls::DecayClass::generic());
  CHECK_THROWS_AS(nnls::jost_right(generic, cplx(0.1, 0.1), 0.0), nnls::Error);
  CHECK_NOTHROW(nnls::upper_columns(generic, cplx(0.1, 2.0)));  // analytic columns need no continuation
  CHECK_NOTHROW(nnls::lower_columns(generic, cplx(0.1, -2.0)));
}

TEST_CASE("iteration cap raises NoConvergence") {
  const Potential g = nnls::gaussian_potential(1.5, 1.0, 0.0, 6.0, 601, 1);
  nnls::VolterraOptions opt;
  opt.max_iterations = 2;
  try {
    nnls::jost_left(g, 0.5, 0.0, opt);
    FAIL("expected NoConvergence");
  } catch (const nnls::Error& e) {
    CHECK(e.kind() == nnls::ErrorKind::NoConvergence);
  }
}

TEST_CASE("analytic columns reproduce a1 and the Jost matrices") {
  const Potential q0 = test_box();
  const cplx k(0.6, 0.4);
  const auto J1 = nnls::jost_left(q0, k, 0.0).value;
  const auto J2 = nnls::jost_right(q0, k, 0.0).value;
  const auto up = nnls::upper_columns(q0, k);
  CHECK((up.left - J1.col(0)).norm() < 1e-12);
  CHECK((up.right - J2.col(1)).norm() < 1e-12);
  const cplx a1 = J2(1, 1) * J1(0, 0) - J2(0, 1) * J1(1, 0);
  CHECK(std::abs(nnls::a1_upper(q0, k) - a1) < 1e-12);
  // a1' against a wide-stencil difference
  const double h = 1e-3;
  const cplx d = (nnls::a1_upper(q0, k + h) - nnls::a1_upper(q0, k - h)) / (2 * h);
  CHECK(std::abs(nnls::a1_derivative(q0, k) - d) < 1e-5);
}

TEST_CASE("potential ingestion") {
  using nlohmann::json;
  auto kind_of_error = [](const json& j) -> std::string {
    try {
      nnls::potential_from_json(j);
    } catch (const nnls::Error& e) {
      CHECK(e.kind() == nnls::ErrorKind::ConfigError);
      return e.what();
    }
    return "";
  };
  CHECK(kind_of_error(json{{"L", 2}, {"n", 5}}).find("'kind'") != std::string::npos);
  CHECK(kind_of_error(json{{"kind", "gaussian"}, {"L", 2}, {"n", 4}, {"amplitude", 1}}).find("'n'") !=
        std::string::npos);
  CHECK(kind_of_error(json{{"kind", "box"}, {"L", 2}, {"n", 5}, {"amplitude", 1}, {"left", 0}}).find("'right'") !=
        std::string::npos);
  CHECK(kind_of_error(json{{"kind", "gaussian"}, {"L", 2}, {"n", 5}, {"amplitude", "x"}}).find("'amplitude'") !=
        std::string::npos);
  CHECK(kind_of_error(json{{"kind", "gaussian"}, {"L", 2}, {"n", 5}, {"amplitude", 1}, {"sigma", 2}})
            .find("'sigma'") != std::string::npos);

  const Potential b = nnls::potential_from_json(
      json{{"kind", "box"}, {"L", 2}, {"n", 9}, {"amplitude", json::array({0.3, 0.1})}, {"left", -1}, {"right", 0}});
  CHECK(b.jump_nodes() == std::vector<int>{2, 4});
  CHECK(b.q_plus()[2] == cplx(0.3, 0.1));
  CHECK(b.q_minus()[2] == cplx(0.0));
  CHECK(b.value(4) == cplx(0.15, 0.05));
  CHECK(std::abs(b.l1_norm() - std::abs(cplx(0.3, 0.1))) < 1e-14);

  const auto dir = std::filesystem::temp_directory_path() / "nnls_test_potential";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "q.csv");
    f << "x,re,im\n-1,0,0\n-0.5,0.25,0.5\n0,1,0\n0.5,0.25,-0.5\n1,0,0\n";
  }
  const Potential s = nnls::potential_from_json(json{{"kind", "samples"}, {"file", "q.csv"}}, dir.string());
  CHECK(s.size() == 5);
  CHECK(s.L() == 1.0);
  CHECK(s.value(1) == cplx(0.25, 0.5));
  CHECK(s.decay().kind == nnls::DecayKind::generic);
  {
    std::ofstream f(dir / "bad.csv");
    f << "-1,0\n-0.4,1\n1,0\n";
  }
  CHECK(kind_of_error(json{{"kind", "samples"}, {"file", (dir / "bad.csv").string()}}).find("'file'") !=
        std::string::npos);
}
