#pragma once
// One-soliton reference data shared by the soliton, spectrum and acceptance checks. The
// pole pair is close to the imaginary axis so the field stays localized over t in [0, 5].

#include <complex>

#include "nnls/potential.hpp"
#include "nnls/soliton.hpp"

namespace bench {

using nnls::cplx;

inline const cplx omega{0.05, 0.4};
inline const cplx b_omega{0.0, 0.2};
inline const cplx gamma{0.05, -0.4};
inline const cplx btilde_gamma{0.0, 0.2};

inline nnls::ReflectionlessData soliton(int sigma = 1) {
  return nnls::synthesize({omega}, {b_omega}, {gamma}, {btilde_gamma}, sigma);
}

/// The t = 0 field sampled as a compactly supported potential on [-L, L].
inline nnls::Potential soliton_potential(double L = 30.0, int n = 6001, int sigma = 1) {
  const nnls::ReflectionlessData d = soliton(sigma);
  return nnls::Potential::from_function([&](double x) { return nnls::q_sol(d, x, 0.0); }, L, n, sigma,
                                        nnls::DecayClass::compact());
}

}  // namespace bench
