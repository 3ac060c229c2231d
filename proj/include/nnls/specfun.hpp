#pragma once

#include <complex>

namespace nnls {

using cplx = std::complex<double>;

/// Cut for a multivalued power: the ray cut_anchor + s*cut_direction, s >= 0.
struct BranchSpec {
  cplx cut_anchor{0.0, 0.0};
  cplx cut_direction{-1.0, 0.0};
};

/// Gamma function on the complex plane (Lanczos g=7, reflection for Re z < 1/2).
/// Throws PoleError within 1e-12 of a non-positive integer.
cplx complex_gamma(cplx z);

/// (w - cut_anchor)^a with the argument confined to the sheet bounded by the cut.
/// Throws OnCutError when w sits on the cut (including the anchor itself).
cplx branch_power(cplx w, cplx a, const BranchSpec& spec);

/// Principal logarithm, Im in (-pi, pi]. Throws ZeroArgument for |w| < 1e-300.
cplx complex_log_principal(cplx w);

}  // namespace nnls
