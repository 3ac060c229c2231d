#include "nnls/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "nnls/errors.hpp"

namespace nnls {

namespace {

// One-sided limits of the two off-diagonal potentials q(x) and r(x) = -sigma conj(q(-x)).
struct Coefficients {
  int n;
  double h;
  std::vector<cplx> qm, qp, rm, rp;
};

Coefficients coefficients(const Potential& q0) {
  Coefficients c;
  c.n = q0.size();
  c.h = q0.h();
  c.qm = q0.q_minus();
  c.qp = q0.q_plus();
  c.rm.resize(c.n);
  c.rp.resize(c.n);
  const double s = q0.sigma();
  for (int j = 0; j < c.n; ++j) {
    c.rm[j] = -s * std::conj(c.qp[c.n - 1 - j]);
    c.rp[j] = -s * std::conj(c.qm[c.n - 1 - j]);
  }
  return c;
}

struct ColumnSolve {
  cplx U, V;
  int iterations = 0;
  double sup = 0.0;
};

// Picard iteration for U' = a V, V' = p V + b U with U = 1, V = 0 at the starting end,
// composite trapezoid on every s-th node. The exponential factor of the kernel is
// propagated exactly from panel to panel.
ColumnSolve sweep(const Coefficients& c, bool column1, int s, int target, bool from_left, cplx p,
                  const VolterraOptions& opt) {
  const std::vector<cplx>& am = column1 ? c.qm : c.rm;
  const std::vector<cplx>& ap = column1 ? c.qp : c.rp;
  const std::vector<cplx>& bm = column1 ? c.rm : c.qm;
  const std::vector<cplx>& bp = column1 ? c.rp : c.qp;
  // limits on the side of the panel that was already swept / is being reached
  const std::vector<cplx>& a_prev = from_left ? ap : am;
  const std::vector<cplx>& a_cur = from_left ? am : ap;
  const std::vector<cplx>& b_prev = from_left ? bp : bm;
  const std::vector<cplx>& b_cur = from_left ? bm : bp;

  std::vector<int> idx;
  if (from_left)
    for (int j = 0; j <= target; j += s) idx.push_back(j);
  else
    for (int j = c.n - 1; j >= target; j -= s) idx.push_back(j);
  const std::size_t m = idx.size();

  const double h = c.h * s;
  const cplx E = std::exp(from_left ? p * h : -p * h);
  const double w = from_left ? 0.5 * h : -0.5 * h;

  std::vector<cplx> U(m, 1.0), V(m, 0.0), Un(m), Vn(m);
  ColumnSolve out;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Vn[0] = 0.0;
    for (std::size_t i = 1; i < m; ++i)
      Vn[i] = E * Vn[i - 1] + w * (E * b_prev[idx[i - 1]] * U[i - 1] + b_cur[idx[i]] * U[i]);
    Un[0] = 1.0;
    for (std::size_t i = 1; i < m; ++i)
      Un[i] = Un[i - 1] + w * (a_prev[idx[i - 1]] * Vn[i - 1] + a_cur[idx[i]] * Vn[i]);
    double diff = 0.0, sup = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      diff = std::max({diff, std::abs(Un[i] - U[i]), std::abs(Vn[i] - V[i])});
      sup = std::max({sup, std::abs(Un[i]), std::abs(Vn[i])});
    }
    U.swap(Un);
    V.swap(Vn);
    if (diff <= opt.picard_tol * sup) {
      out.U = U[m - 1];
      out.V = V[m - 1];
      out.iterations = it;
      out.sup = sup;
      return out;
    }
  }
  std::ostringstream os;
  os << "Picard iteration did not reach " << opt.picard_tol << " within " << opt.max_iterations << " sweeps";
  throw Error(ErrorKind::NoConvergence, os.str());
}

bool can_extrapolate(const Potential& q0, int target) {
  if (q0.size() < 9 || target % 2 != 0) return false;
  for (int j : q0.jump_nodes())
    if (j % 2 != 0) return false;
  return true;
}

ColumnSolve solve_column(const Potential& q0, const Coefficients& c, bool column1, int target, bool from_left,
                         cplx k, const VolterraOptions& opt, bool& extrapolated) {
  const cplx p = column1 ? cplx(0.0, 2.0) * k : cplx(0.0, -2.0) * k;
  ColumnSolve fine = sweep(c, column1, 1, target, from_left, p, opt);
  extrapolated = opt.richardson && can_extrapolate(q0, target);
  if (!extrapolated) return fine;
  ColumnSolve coarse = sweep(c, column1, 2, target, from_left, p, opt);
  fine.U = (4.0 * fine.U - coarse.U) / 3.0;
  fine.V = (4.0 * fine.V - coarse.V) / 3.0;
  fine.iterations = std::max(fine.iterations, coarse.iterations);
  return fine;
}

// Column 1 of Psi_1 is analytic for Im k > 0, column 2 for Im k < 0; reversed for Psi_2.
void gate(const Potential& q0, JostSide side, bool column1, cplx k) {
  if (k.imag() == 0.0) return;
  const bool upper = k.imag() > 0.0;
  const bool analytic = (side == JostSide::left) == (column1 == upper);
  if (analytic || q0.decay().permits(k.imag())) return;
  std::ostringstream os;
  os << (side == JostSide::left ? "left" : "right") << " Jost column " << (column1 ? 1 : 2)
     << " is not analytic at k = " << k << " and the potential's decay does not justify continuation";
  throw Error(ErrorKind::ContinuationInvalid, os.str());
}

JostMatrix jost(const Potential& q0, cplx k, double x, JostSide side, const VolterraOptions& opt) {
  gate(q0, side, true, k);
  gate(q0, side, false, k);
  const int target = q0.index_of(x);
  const Coefficients c = coefficients(q0);
  const bool left = side == JostSide::left;
  bool e1 = false, e2 = false;
  const ColumnSolve c1 = solve_column(q0, c, true, target, left, k, opt, e1);
  const ColumnSolve c2 = solve_column(q0, c, false, target, left, k, opt, e2);
  JostMatrix J;
  J.value << c1.U, c2.V, c1.V, c2.U;
  J.side = side;
  J.k = k;
  J.x = q0.x(target);
  J.iterations = std::max(c1.iterations, c2.iterations);
  J.sup_norm = std::max(c1.sup, c2.sup);
  J.bound = std::exp(q0.l1_norm());
  J.extrapolated = e1 && e2;
  return J;
}

}  // namespace

JostMatrix jost_left(const Potential& q0, cplx k, double x, const VolterraOptions& opt) {
  return jost(q0, k, x, JostSide::left, opt);
}

JostMatrix jost_right(const Potential& q0, cplx k, double x, const VolterraOptions& opt) {
  return jost(q0, k, x, JostSide::right, opt);
}

namespace {

AnalyticColumns analytic_columns(const Potential& q0, cplx k, bool upper, const VolterraOptions& opt) {
  const int target = q0.index_of(0.0);
  const Coefficients c = coefficients(q0);
  bool e = false;
  // upper: column 1 of Psi_1 and column 2 of Psi_2
  const ColumnSolve l = solve_column(q0, c, upper, target, true, k, opt, e);
  const ColumnSolve r = solve_column(q0, c, !upper, target, false, k, opt, e);
  AnalyticColumns out;
  if (upper) {
    out.left << l.U, l.V;
    out.right << r.V, r.U;
  } else {
    out.left << l.V, l.U;
    out.right << r.U, r.V;
  }
  return out;
}

}  // namespace

AnalyticColumns upper_columns(const Potential& q0, cplx k, const VolterraOptions& opt) {
  if (k.imag() < 0.0) throw Error(ErrorKind::InvalidArgument, "upper_columns needs Im k >= 0");
  return analytic_columns(q0, k, true, opt);
}

AnalyticColumns lower_columns(const Potential& q0, cplx k, const VolterraOptions& opt) {
  if (k.imag() > 0.0) throw Error(ErrorKind::InvalidArgument, "lower_columns needs Im k <= 0");
  return analytic_columns(q0, k, false, opt);
}

cplx a1_upper(const Potential& q0, cplx k, const VolterraOptions& opt) {
  const AnalyticColumns c = upper_columns(q0, k, opt);
  // det [Psi_1^(1), Psi_2^(2)]
  return c.left(0) * c.right(1) - c.left(1) * c.right(0);
}

cplx a2_lower(const Potential& q0, cplx k, const VolterraOptions& opt) {
  const AnalyticColumns c = lower_columns(q0, k, opt);
  // det [Psi_2^(1), Psi_1^(2)]
  return c.right(0) * c.left(1) - c.right(1) * c.left(0);
}

namespace {
constexpr double kDiffStep = 1e-6;
}

cplx a1_derivative(const Potential& q0, cplx k, const VolterraOptions& opt) {
  return (a1_upper(q0, k + kDiffStep, opt) - a1_upper(q0, k - kDiffStep, opt)) / (2.0 * kDiffStep);
}

cplx a2_derivative(const Potential& q0, cplx k, const VolterraOptions& opt) {
  return (a2_lower(q0, k + kDiffStep, opt) - a2_lower(q0, k - kDiffStep, opt)) / (2.0 * kDiffStep);
}

namespace {

Proportionality fit(const Eigen::Vector2cd& v1, const Eigen::Vector2cd& v2) {
  Proportionality p;
  const double nn = v2.squaredNorm();
  if (nn == 0.0) throw Error(ErrorKind::ZeroDenominator, "vanishing Jost column");
  p.constant = v2.dot(v1) / nn;  // dot conjugates the first argument
  p.residual = (v1 - p.constant * v2).norm();
  return p;
}

}  // namespace

Proportionality proportionality_upper(const Potential& q0, cplx omega, const VolterraOptions& opt) {
  const AnalyticColumns c = upper_columns(q0, omega, opt);
  return fit(c.left, c.right);
}

Proportionality proportionality_lower(const Potential& q0, cplx gamma, const VolterraOptions& opt) {
  const AnalyticColumns c = lower_columns(q0, gamma, opt);
  return fit(c.left, c.right);
}

namespace {

struct SEntries {
  cplx a1, a2, b, btilde;
};

SEntries s_matrix(const Potential& q0, cplx k, const VolterraOptions& opt) {
  const Eigen::Matrix2cd P1 = jost_left(q0, k, 0.0, opt).value;
  const Eigen::Matrix2cd P2 = jost_right(q0, k, 0.0, opt).value;
  SEntries s;
  s.a1 = P2(1, 1) * P1(0, 0) - P2(0, 1) * P1(1, 0);
  s.b = P2(0, 0) * P1(1, 0) - P2(1, 0) * P1(0, 0);
  s.btilde = P2(1, 1) * P1(0, 1) - P2(0, 1) * P1(1, 1);
  s.a2 = P2(0, 0) * P1(1, 1) - P2(1, 0) * P1(0, 1);
  return s;
}

}  // namespace

ScatteringSample scattering_sample(const Potential& q0, cplx k, const VolterraOptions& opt) {
  const SEntries s = s_matrix(q0, k, opt);
  const SEntries m = (k == -std::conj(k)) ? s : s_matrix(q0, -std::conj(k), opt);
  if (k.imag() == 0.0 && (std::abs(s.a1) < 1e-12 || std::abs(s.a2) < 1e-12)) {
    std::ostringstream os;
    os << "a1 or a2 vanishes at real k = " << k.real() << " (spectral singularity)";
    throw Error(ErrorKind::ZeroDenominator, os.str());
  }
  ScatteringSample out;
  out.k = k;
  out.a1 = s.a1;
  out.a2 = s.a2;
  out.b = s.b;
  out.btilde = s.btilde;
  out.r1 = s.b / s.a1;
  out.r2 = std::conj(m.b) / s.a2;
  return out;
}

ReflectionGrid reflection_grid(const Potential& q0, double kmin, double kmax, int n, const VolterraOptions& opt,
                               int threads) {
  if (n < 2 || !(kmin < kmax)) throw Error(ErrorKind::InvalidArgument, "reflection_grid needs n >= 2 and kmin < kmax");
  ReflectionGrid g;
  g.samples.resize(n);
  const double dk = (kmax - kmin) / (n - 1);
  auto work = [&](int begin, int stride) {
    for (int i = begin; i < n; i += stride) g.samples[i] = scattering_sample(q0, kmin + dk * i, opt);
  };
  threads = std::clamp(threads, 1, n);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, threads);
        } catch (...) {
          errs[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }

  double l2_1 = 0, l2_2 = 0, d1 = 0, d2 = 0;
  g.min_abs_jump = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const ScatteringSample& s = g.samples[i];
    g.max_abs_r1 = std::max(g.max_abs_r1, std::abs(s.r1));
    g.max_abs_r2 = std::max(g.max_abs_r2, std::abs(s.r2));
    g.min_abs_jump = std::min(g.min_abs_jump, std::abs(1.0 + double(q0.sigma()) * s.r1 * s.r2));
    l2_1 += std::norm(s.r1) * dk;
    l2_2 += std::norm(s.r2) * dk;
    if (i > 0) {
      d1 += std::norm((s.r1 - g.samples[i - 1].r1) / dk) * dk;
      d2 += std::norm((s.r2 - g.samples[i - 1].r2) / dk) * dk;
    }
  }
  g.r1_h1_norm = std::sqrt(l2_1 + d1);
  g.r2_h1_norm = std::sqrt(l2_2 + d2);
  return g;
}

}  // namespace nnls
