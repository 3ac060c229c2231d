#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <json.hpp>

#include "nnls/potential.hpp"
#include "nnls/scattering.hpp"

namespace nnls {

struct Rect {
  double re_min, re_max, im_min, im_max;
};

struct ZeroSearchOptions {
  double min_cell = 1e-4;          // below this a multi-zero cell is a MultiplicityError
  double residual_tol = 1e-10;     // Newton polishing target |f(z)|
  double diff_step = 1e-6;         // central-difference step for f'
  int max_newton = 50;
  int initial_edge_samples = 32;
  double max_arg_step = 0.7853981633974483;  // pi/4 between consecutive boundary samples
};

/// Winding number of f around the rectangle; throws BoundaryZero when f vanishes on, or
/// cannot be resolved near, the boundary (segment shorter than tol).
int winding_number(const std::function<cplx(cplx)>& f, const Rect& r, double tol,
                   const ZeroSearchOptions& opt = {});

/// Zeros of an analytic f inside the rectangle by recursive argument-principle
/// subdivision and Newton polishing. The count equals the boundary winding number.
std::vector<cplx> locate_zeros(const std::function<cplx(cplx)>& f, const Rect& region, double tol,
                               const ZeroSearchOptions& opt = {});

/// Zeros omega of a1 (Im > 0) and gamma of a2 (Im < 0), each closed under z -> -conj(z),
/// sorted by ascending real part, with norming constants.
struct DiscreteSpectrum {
  int sigma = 1;
  std::vector<cplx> omegas, c;
  std::vector<cplx> gammas, d;
  // diagnostics: proportionality constants b(omega), btilde(gamma) and a-derivatives
  std::vector<cplx> b_omega, a1_prime;
  std::vector<cplx> btilde_gamma, a2_prime;
  std::vector<double> proportionality_residual;
};

/// Mirror-complete the given zeros (Im > 0 -> omega, Im < 0 -> gamma) and compute
/// c = b(omega)/a1'(omega), d = btilde(gamma)/a2'(gamma), with b and btilde read off as the
/// proportionality constants of the analytic Jost columns at the zero.
DiscreteSpectrum norming_constants(const Potential& q0, const std::vector<cplx>& zeros,
                                   const VolterraOptions& opt = {});

struct SpectrumSearch {
  double kmax = 4.0;
  double edge = 0.01;         // distance of the search rectangles from the axes
  double min_imag = 1e-3;     // zeros closer to the real axis are rejected
  double tol = 1e-8;
  ZeroSearchOptions zero;
  VolterraOptions volterra;
};

struct SpectrumResult {
  DiscreteSpectrum spectrum;
  int winding_upper = 0, winding_lower = 0;
  std::vector<cplx> rejected;  // near-real zeros dropped
};

SpectrumResult find_spectrum(const Potential& q0, const SpectrumSearch& s = {});

struct DeltaPartition {
  double xi = 0.0;
  std::vector<cplx> delta1, delta2;  // poles with Re z > -xi, ascending Re
  std::vector<cplx> delta1_plus, delta1_minus, delta2_plus, delta2_minus;
  std::vector<cplx> delta;           // the dominant subset with mirrors, ascending Re
  /// false when |D1+| - |D1-| > |D2+| - |D2-| and |D1-| > |D2-| does not hold
  bool ordering_assumption_holds = true;
};

DeltaPartition classify(const DiscreteSpectrum& spec, double xi);

/// Finite Blaschke-type product built from the partition; s_j and t_j are the j-th
/// (1-based, ascending Re) elements of Delta1+ and Delta2+.
cplx blaschke_T(cplx z, const DeltaPartition& part);

nlohmann::json spectrum_to_json(const DiscreteSpectrum& s);
DiscreteSpectrum spectrum_from_json(const nlohmann::json& j);
nlohmann::json partition_to_json(const DeltaPartition& p);

}  // namespace nnls
