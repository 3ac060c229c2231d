#include "nnls/soliton.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nnls/errors.hpp"
#include "nnls/io.hpp"

namespace nnls {

ReflectionlessData from_spectrum(const DiscreteSpectrum& s) {
  ReflectionlessData d;
  d.omegas = s.omegas;
  d.c = s.c;
  d.gammas = s.gammas;
  d.d = s.d;
  d.sigma = s.sigma;
  return d;
}

cplx reflectionless_a1(const ReflectionlessData& data, cplx k) {
  cplx v = 1.0;
  for (cplx w : data.omegas) v *= k - w;
  for (cplx g : data.gammas) v /= k - g;
  return v;
}

ReflectionlessData synthesize(const std::vector<cplx>& omegas, const std::vector<cplx>& b,
                              const std::vector<cplx>& gammas, const std::vector<cplx>& btilde, int sigma) {
  if (omegas.size() != b.size() || gammas.size() != btilde.size())
    throw Error(ErrorKind::InvalidArgument, "each pole needs one proportionality constant");
  if (omegas.size() != gammas.size())
    throw Error(ErrorKind::InvalidArgument, "a reflectionless a1 needs as many omegas as gammas");
  if (sigma != 1 && sigma != -1) throw Error(ErrorKind::InvalidArgument, "sigma must be +1 or -1");
  ReflectionlessData d;
  d.sigma = sigma;
  std::vector<cplx> bw, bg;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i].imag() > 0 && omegas[i].real() > 0))
      throw Error(ErrorKind::InvalidArgument, "omegas must lie in the open first quadrant");
    if (b[i] == 0.0) throw Error(ErrorKind::InvalidArgument, "proportionality constants must be nonzero");
    d.omegas.push_back(omegas[i]);
    bw.push_back(b[i]);
    d.omegas.push_back(-std::conj(omegas[i]));
    bw.push_back(double(sigma) / std::conj(b[i]));
  }
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i].imag() < 0 && gammas[i].real() > 0))
      throw Error(ErrorKind::InvalidArgument, "gammas must lie in the open fourth quadrant");
    if (btilde[i] == 0.0) throw Error(ErrorKind::InvalidArgument, "proportionality constants must be nonzero");
    d.gammas.push_back(gammas[i]);
    bg.push_back(btilde[i]);
    d.gammas.push_back(-std::conj(gammas[i]));
    bg.push_back(double(sigma) / std::conj(btilde[i]));
  }
  // a1' at a simple zero and a2' = (1/a1)' at a simple pole of a1
  for (std::size_t i = 0; i < d.omegas.size(); ++i) {
    cplx num = 1.0, den = 1.0;
    for (std::size_t j = 0; j < d.omegas.size(); ++j)
      if (j != i) num *= d.omegas[i] - d.omegas[j];
    for (cplx g : d.gammas) den *= d.omegas[i] - g;
    d.c.push_back(bw[i] / (num / den));
  }
  for (std::size_t i = 0; i < d.gammas.size(); ++i) {
    cplx num = 1.0, den = 1.0;
    for (std::size_t j = 0; j < d.gammas.size(); ++j)
      if (j != i) num *= d.gammas[i] - d.gammas[j];
    for (cplx w : d.omegas) den *= d.gammas[i] - w;
    d.d.push_back(bg[i] / (num / den));
  }
  return d;
}

namespace {

cplx checked_exp(cplx exponent) {
  if (exponent.real() > 700.0) {
    std::ostringstream os;
    os << "exponent with real part " << exponent.real() << " exceeds 700";
    throw Error(ErrorKind::OverflowRegime, os.str());
  }
  return std::exp(exponent);
}

}  // namespace

ResidueSolution solve_residues(const ReflectionlessData& data, double x, double t) {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "t must be non-negative");
  if (data.omegas.size() != data.c.size() || data.gammas.size() != data.d.size())
    throw Error(ErrorKind::InvalidArgument, "pole and constant lists differ in length");
  const int n = static_cast<int>(data.omegas.size()), m = static_cast<int>(data.gammas.size());
  ResidueSolution res;
  res.c_t.resize(n);
  res.d_t.resize(m);
  const cplx i2(0.0, 2.0);
  // t*theta(z) = z x + 2 z^2 t
  for (int p = 0; p < n; ++p) {
    const cplx w = data.omegas[p];
    res.c_t(p) = data.c[p] * checked_exp(i2 * (w * x + 2.0 * w * w * t));
  }
  for (int q = 0; q < m; ++q) {
    const cplx g = data.gammas[q];
    res.d_t(q) = data.d[q] * checked_exp(-i2 * (g * x + 2.0 * g * g * t));
  }
  const int N = n + m;
  if (N == 0) return res;

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(N, N);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(N, 2);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < m; ++q) A(p, n + q) = -res.c_t(p) / (data.omegas[p] - data.gammas[q]);
  for (int q = 0; q < m; ++q)
    for (int p = 0; p < n; ++p) A(n + q, p) = -res.d_t(q) / (data.gammas[q] - data.omegas[p]);
  for (int p = 0; p < n; ++p) rhs(p, 1) = res.c_t(p);
  for (int q = 0; q < m; ++q) rhs(n + q, 0) = res.d_t(q);

  // the exponentials make row scales wildly different; equilibrate before judging conditioning
  for (int r = 0; r < N; ++r) {
    const double s = A.row(r).cwiseAbs().maxCoeff();
    A.row(r) /= s;
    rhs.row(r) /= s;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const double rc = lu.rcond();
  res.condition = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (!(res.condition <= 1e12)) {
    std::ostringstream os;
    os << "residue system condition estimate " << res.condition << " exceeds 1e12 at (x, t) = (" << x << ", " << t
       << ")";
    throw Error(ErrorKind::SingularSystem, os.str());
  }
  const Eigen::MatrixXcd sol = lu.solve(rhs);
  res.alpha1 = sol.col(0).head(n);
  res.beta1 = sol.col(0).tail(m);
  res.alpha2 = sol.col(1).head(n);
  res.beta2 = sol.col(1).tail(m);
  return res;
}

Eigen::Matrix2cd msol(const ReflectionlessData& data, const ResidueSolution& res, cplx k) {
  Eigen::Matrix2cd M = Eigen::Matrix2cd::Identity();
  for (int p = 0; p < res.alpha1.size(); ++p) {
    M(0, 0) += res.alpha1(p) / (k - data.omegas[p]);
    M(1, 0) += res.alpha2(p) / (k - data.omegas[p]);
  }
  for (int q = 0; q < res.beta1.size(); ++q) {
    M(0, 1) += res.beta1(q) / (k - data.gammas[q]);
    M(1, 1) += res.beta2(q) / (k - data.gammas[q]);
  }
  return M;
}

Eigen::Matrix2cd msol_first_moment(const ResidueSolution& res) {
  Eigen::Matrix2cd M = Eigen::Matrix2cd::Zero();
  M(0, 0) = res.alpha1.sum();
  M(1, 0) = res.alpha2.sum();
  M(0, 1) = res.beta1.sum();
  M(1, 1) = res.beta2.sum();
  return M;
}

cplx q_sol(const ReflectionlessData& data, double x, double t) {
  const ResidueSolution res = solve_residues(data, x, t);
  return cplx(0.0, 2.0) * res.beta1.sum();
}

ReflectionlessData delta_modified(const DiscreteSpectrum& spec, const PhaseContext& ctx) {
  ReflectionlessData d = from_spectrum(spec);
  for (std::size_t i = 0; i < d.omegas.size(); ++i) {
    const cplx dl = delta(d.omegas[i], ctx);
    d.c[i] /= dl * dl;
  }
  for (std::size_t i = 0; i < d.gammas.size(); ++i) {
    const cplx dl = delta(d.gammas[i], ctx);
    d.d[i] *= dl * dl;
  }
  return d;
}

cplx q_delta(const DiscreteSpectrum& spec, const DeltaPartition& part, const PhaseContext& ctx, double x, double t) {
  ReflectionlessData reduced;
  reduced.sigma = spec.sigma;
  for (cplx w : part.delta) {
    auto it = std::find_if(spec.omegas.begin(), spec.omegas.end(), [&](cplx u) { return std::abs(u - w) < 1e-12; });
    if (it == spec.omegas.end()) throw Error(ErrorKind::InvalidArgument, "partition pole missing from the spectrum");
    const cplx c = spec.c[static_cast<std::size_t>(it - spec.omegas.begin())];
    const cplx T = blaschke_T(w, part);
    const cplx dl = delta(w, ctx);
    reduced.omegas.push_back(w);
    reduced.c.push_back(c * T * T / (dl * dl));
  }
  return q_sol(reduced, x, t);
}

nlohmann::json reflectionless_to_json(const ReflectionlessData& d) {
  return {{"sigma", d.sigma},
          {"omegas", complex_list_to_json(d.omegas)},
          {"c", complex_list_to_json(d.c)},
          {"gammas", complex_list_to_json(d.gammas)},
          {"d", complex_list_to_json(d.d)}};
}

}  // namespace nnls
