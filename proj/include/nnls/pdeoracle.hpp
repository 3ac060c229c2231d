#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include <json.hpp>

#include "nnls/potential.hpp"

namespace nnls {

/// Periodic grid x_j = -L + j*dx, j = 0..n-1 (dx = 2L/n), n a power of two. The map
/// j -> (n - j) mod n sends x to -x exactly.
struct EvolutionState {
  int n = 0;
  double L = 0.0;
  std::vector<cplx> q;
  double t = 0.0;
  int sigma = 1;

  double dx() const { return 2.0 * L / n; }
  double x(int j) const { return -L + dx() * j; }
  int mirror(int j) const { return (n - j) % n; }
};

/// From a Potential on [-L, L] with size() - 1 a power of two (the node x = L is the periodic image of -L).
EvolutionState make_state(const Potential& q0);
EvolutionState make_state(const std::function<cplx(double)>& f, double L, int n, int sigma, double t0 = 0.0);

/// Owns the FFT plans and buffers for one grid; step() performs one Strang step
/// (half linear, exact nonlinear, half linear). Negative dt runs the scheme backwards.
class SplitStep {
 public:
  SplitStep(int n, double L, int sigma);
  ~SplitStep();
  SplitStep(const SplitStep&) = delete;
  SplitStep& operator=(const SplitStep&) = delete;

  void step(EvolutionState& s, double dt);
  /// q <- q exp(2 i sigma q conj(q(-x)) dt), which leaves the pair product invariant.
  static void nonlinear_substep(EvolutionState& s, double dt);
  void linear_substep(EvolutionState& s, double dt);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Throws BoundaryLeak when |q| >= threshold anywhere in the outer 5% of the domain.
void check_boundary(const EvolutionState& s, double threshold = 1e-8);

EvolutionState step(const EvolutionState& s, double dt);

/// Trapezoid estimate of int q(x) conj(q(-x)) dx on the periodic grid.
cplx quasi_power(const EvolutionState& s);
double l2_mass(const EvolutionState& s);

struct EvolveOptions {
  int log_every = 100;
  bool check_boundary = true;
  double boundary_threshold = 1e-8;
  /// optional snapshot callback every snapshot_every steps (0 = never)
  int snapshot_every = 0;
  std::function<void(const EvolutionState&)> on_snapshot;
};

struct ConservedLogEntry {
  long step;
  double t;
  cplx quasi_power;
  double mass;
};

struct EvolutionResult {
  EvolutionState state;
  std::vector<ConservedLogEntry> log;
  double quasi_power_drift = 0.0;  // max relative deviation from the initial value
};

EvolutionResult evolve(const EvolutionState& s0, double t_end, double dt, const EvolveOptions& opt = {});
EvolutionResult evolve(const Potential& q0, double t_end, double dt, const EvolveOptions& opt = {});

/// Band-limited (trigonometric) interpolation of the periodic field.
cplx evaluate(const EvolutionState& s, double x);

struct Patch {
  double x0, x1;
  int nx;
  double t0, t1;
  int nt;
};

/// max over the patch of |i q_t + q_xx + 2 sigma q^2 conj(q(-x,t))| by 4th-order central differences.
double pde_residual(const std::function<cplx(double, double)>& field, const Patch& patch, int sigma, double hx,
                    double ht);

nlohmann::json evolution_manifest(const EvolutionResult& r, double dt);

}  // namespace nnls
