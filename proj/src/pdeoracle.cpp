#include "nnls/pdeoracle.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "nnls/errors.hpp"
#include "nnls/io.hpp"

namespace nnls {

namespace {
bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }
const cplx I(0.0, 1.0);
// the FFTW planner is not reentrant; execution of existing plans is
std::mutex planner_mutex;
}  // namespace

EvolutionState make_state(const Potential& q0) {
  const int n = q0.size() - 1;
  if (!power_of_two(n)) throw Error(ErrorKind::InvalidArgument, "potential node count minus one must be a power of two");
  EvolutionState s;
  s.n = n;
  s.L = q0.L();
  s.sigma = q0.sigma();
  s.q.resize(n);
  for (int j = 0; j < n; ++j) s.q[j] = q0.value(j);
  // x = -L and x = L are the same periodic node
  s.q[0] = 0.5 * (q0.value(0) + q0.value(n));
  return s;
}

EvolutionState make_state(const std::function<cplx(double)>& f, double L, int n, int sigma, double t0) {
  if (!power_of_two(n)) throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two");
  if (!(L > 0.0)) throw Error(ErrorKind::InvalidArgument, "L must be positive");
  if (sigma != 1 && sigma != -1) throw Error(ErrorKind::InvalidArgument, "sigma must be +1 or -1");
  EvolutionState s;
  s.n = n;
  s.L = L;
  s.sigma = sigma;
  s.t = t0;
  s.q.resize(n);
  for (int j = 0; j < n; ++j) s.q[j] = f(s.x(j));
  return s;
}

struct SplitStep::Impl {
  int n;
  double L;
  int sigma;
  fftw_complex* buf;
  fftw_plan fwd, bwd;
  std::vector<double> k2;
  double cached_dt = std::numeric_limits<double>::quiet_NaN();
  std::vector<cplx> mult;
};

SplitStep::SplitStep(int n, double L, int sigma) : impl_(std::make_unique<Impl>()) {
  if (!power_of_two(n)) throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two");
  Impl& m = *impl_;
  m.n = n;
  m.L = L;
  m.sigma = sigma;
  std::lock_guard<std::mutex> lock(planner_mutex);
  m.buf = fftw_alloc_complex(static_cast<std::size_t>(n));
  m.fwd = fftw_plan_dft_1d(n, m.buf, m.buf, FFTW_FORWARD, FFTW_ESTIMATE);
  m.bwd = fftw_plan_dft_1d(n, m.buf, m.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  m.k2.resize(n);
  const double dk = std::numbers::pi / L;  // 2 pi / (2L)
  for (int j = 0; j < n; ++j) {
    const int w = j <= n / 2 ? j : j - n;
    m.k2[j] = (dk * w) * (dk * w);
  }
}

SplitStep::~SplitStep() {
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->bwd);
  fftw_free(impl_->buf);
}

void SplitStep::nonlinear_substep(EvolutionState& s, double dt) {
  const int n = s.n;
  std::vector<cplx> P(n);
  for (int j = 0; j < n; ++j) P[j] = s.q[j] * std::conj(s.q[s.mirror(j)]);
  const cplx f = 2.0 * I * double(s.sigma) * dt;
  for (int j = 0; j < n; ++j) s.q[j] *= std::exp(f * P[j]);
}

// i q_t + q_xx = 0: each Fourier mode picks up exp(-i kappa^2 dt)
void SplitStep::linear_substep(EvolutionState& s, double dt) {
  Impl& m = *impl_;
  if (s.n != m.n) throw Error(ErrorKind::InvalidArgument, "state grid does not match the stepper");
  if (dt != m.cached_dt) {
    m.mult.resize(m.n);
    for (int j = 0; j < m.n; ++j) m.mult[j] = std::exp(-I * m.k2[j] * dt) / double(m.n);
    m.cached_dt = dt;
  }
  auto* b = reinterpret_cast<cplx*>(m.buf);
  std::copy(s.q.begin(), s.q.end(), b);
  fftw_execute(m.fwd);
  for (int j = 0; j < m.n; ++j) b[j] *= m.mult[j];
  fftw_execute(m.bwd);
  std::copy(b, b + m.n, s.q.begin());
}

void SplitStep::step(EvolutionState& s, double dt) {
  linear_substep(s, 0.5 * dt);
  nonlinear_substep(s, dt);
  linear_substep(s, 0.5 * dt);
  s.t += dt;
}

void check_boundary(const EvolutionState& s, double threshold) {
  const int band = std::max(1, static_cast<int>(std::ceil(0.05 * s.n)));
  for (int i = 0; i < band; ++i) {
    for (int j : {i, s.n - 1 - i}) {
      if (std::abs(s.q[j]) >= threshold) {
        std::ostringstream os;
        os << "|q| = " << std::abs(s.q[j]) << " at x = " << s.x(j) << ", t = " << s.t
           << " inside the 5% boundary band (threshold " << threshold << ")";
        throw Error(ErrorKind::BoundaryLeak, os.str());
      }
    }
  }
}

EvolutionState step(const EvolutionState& s, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "step needs dt > 0");
  check_boundary(s);
  SplitStep stepper(s.n, s.L, s.sigma);
  EvolutionState out = s;
  stepper.step(out, dt);
  check_boundary(out);
  return out;
}

cplx quasi_power(const EvolutionState& s) {
  cplx acc = 0.0;
  for (int j = 0; j < s.n; ++j) acc += s.q[j] * std::conj(s.q[s.mirror(j)]);
  return acc * s.dx();
}

double l2_mass(const EvolutionState& s) {
  double acc = 0.0;
  for (const cplx& v : s.q) acc += std::norm(v);
  return acc * s.dx();
}

EvolutionResult evolve(const EvolutionState& s0, double t_end, double dt, const EvolveOptions& opt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "dt must be finite and nonzero");
  const double span = t_end - s0.t;
  const double steps_real = span / dt;
  if (steps_real < -1e-9) throw Error(ErrorKind::InvalidArgument, "dt points away from t_end");
  const long steps = std::lround(steps_real);
  if (std::abs(steps_real - double(steps)) > 1e-6)
    throw Error(ErrorKind::InvalidArgument, "t_end - t0 must be an integer multiple of dt");

  EvolutionResult r;
  r.state = s0;
  SplitStep stepper(s0.n, s0.L, s0.sigma);
  if (opt.check_boundary) check_boundary(r.state, opt.boundary_threshold);
  const cplx p0 = quasi_power(r.state);
  const double scale = std::max(std::abs(p0), 1e-300);
  auto log_now = [&](long i) {
    const cplx p = quasi_power(r.state);
    r.log.push_back({i, r.state.t, p, l2_mass(r.state)});
    r.quasi_power_drift = std::max(r.quasi_power_drift, std::abs(p - p0) / scale);
  };
  log_now(0);
  const double t0 = s0.t;
  for (long i = 1; i <= steps; ++i) {
    stepper.step(r.state, dt);
    r.state.t = t0 + dt * double(i);  // avoid accumulated round-off in t
    if (opt.check_boundary) check_boundary(r.state, opt.boundary_threshold);
    if (opt.log_every > 0 && (i % opt.log_every == 0 || i == steps)) log_now(i);
    if (opt.snapshot_every > 0 && opt.on_snapshot && i % opt.snapshot_every == 0) opt.on_snapshot(r.state);
  }
  return r;
}

EvolutionResult evolve(const Potential& q0, double t_end, double dt, const EvolveOptions& opt) {
  return evolve(make_state(q0), t_end, dt, opt);
}

cplx evaluate(const EvolutionState& s, double x) {
  const int n = s.n;
  std::vector<cplx> c(s.q);
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(c.data()),
                                   reinterpret_cast<fftw_complex*>(c.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
  }
  const double dk = std::numbers::pi / s.L;
  const double u = x + s.L;
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double kappa = dk * (j < n / 2 ? j : j - n);
    if (j == n / 2)  // split the Nyquist mode symmetrically so real data stays real
      acc += c[j] * std::cos(kappa * u);
    else
      acc += c[j] * std::exp(I * (kappa * u));
  }
  return acc / double(n);
}

double pde_residual(const std::function<cplx(double, double)>& field, const Patch& p, int sigma, double hx,
                    double ht) {
  if (p.nx < 1 || p.nt < 1) throw Error(ErrorKind::InvalidArgument, "patch needs at least one point per axis");
  double worst = 0.0;
  for (int it = 0; it < p.nt; ++it) {
    const double t = p.nt == 1 ? p.t0 : p.t0 + (p.t1 - p.t0) * it / (p.nt - 1);
    for (int ix = 0; ix < p.nx; ++ix) {
      const double x = p.nx == 1 ? p.x0 : p.x0 + (p.x1 - p.x0) * ix / (p.nx - 1);
      const cplx q = field(x, t);
      const cplx qt = (-field(x, t + 2 * ht) + 8.0 * field(x, t + ht) - 8.0 * field(x, t - ht) + field(x, t - 2 * ht)) /
                      (12.0 * ht);
      const cplx qxx = (-field(x + 2 * hx, t) + 16.0 * field(x + hx, t) - 30.0 * q + 16.0 * field(x - hx, t) -
                        field(x - 2 * hx, t)) /
                       (12.0 * hx * hx);
      const cplx res = I * qt + qxx + 2.0 * double(sigma) * q * q * std::conj(field(-x, t));
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

nlohmann::json evolution_manifest(const EvolutionResult& r, double dt) {
  nlohmann::json log = nlohmann::json::array();
  for (const auto& e : r.log)
    log.push_back({{"step", e.step}, {"t", e.t}, {"quasi_power", complex_to_json(e.quasi_power)}, {"mass", e.mass}});
  return {{"n", r.state.n},
          {"L", r.state.L},
          {"dt", dt},
          {"sigma", r.state.sigma},
          {"t_final", r.state.t},
          {"quasi_power_drift", r.quasi_power_drift},
          {"conserved_log", log}};
}

}  // namespace nnls
