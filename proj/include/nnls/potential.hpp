#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nnls {

using cplx = std::complex<double>;

enum class DecayKind { compact_support, exponential, generic };

/// How fast q0 decays at infinity; controls analytic continuation of the
/// non-analytic Jost columns. rate = +inf for super-exponential decay.
struct DecayClass {
  DecayKind kind = DecayKind::generic;
  double rate = 0.0;

  static DecayClass compact() { return {DecayKind::compact_support, 0.0}; }
  static DecayClass exponential(double r) { return {DecayKind::exponential, r}; }
  static DecayClass generic() { return {DecayKind::generic, 0.0}; }

  /// Whether a column that is not analytic in the half-plane of k may be evaluated there.
  bool permits(double im_k) const;
};

/// Initial datum q0 sampled on x_j = -L + j*h, j = 0..n-1, n odd (x = 0 is a node).
/// Each node carries the left and right limits of q0 so that jumps sitting
/// on nodes (box edges) are integrated without O(h) error.
class Potential {
 public:
  Potential(double L, std::vector<cplx> q_minus, std::vector<cplx> q_plus, int sigma,
            DecayClass decay);
  Potential(double L, std::vector<cplx> values, int sigma, DecayClass decay);

  static Potential from_function(const std::function<cplx(double)>& f, double L, int n, int sigma,
                                 DecayClass decay);

  int size() const { return static_cast<int>(qm_.size()); }
  double L() const { return L_; }
  double h() const { return h_; }
  int sigma() const { return sigma_; }
  const DecayClass& decay() const { return decay_; }

  double x(int j) const { return -L_ + h_ * j; }
  /// Grid index of the node at x; throws InvalidArgument if x is not a node.
  int index_of(double x) const;

  cplx value(int j) const { return 0.5 * (qm_[j] + qp_[j]); }
  const std::vector<cplx>& q_minus() const { return qm_; }
  const std::vector<cplx>& q_plus() const { return qp_; }
  bool has_jumps() const;
  std::vector<int> jump_nodes() const;

  /// Trapezoid estimates of the weighted norms used in the small-norm bounds.
  double l1_norm() const;
  double l11_norm() const;   // int (1+|x|)|q|
  double l2_half_norm() const;  // (int (1+|x|)|q|^2)^{1/2}

 private:
  double L_;
  double h_;
  std::vector<cplx> qm_, qp_;
  int sigma_;
  DecayClass decay_;
};

Potential zero_potential(double L, int n, int sigma);
Potential gaussian_potential(cplx amplitude, double width, double center, double L, int n, int sigma);
/// amplitude on [left, right], zero elsewhere; both edges must be nodes.
Potential box_potential(cplx amplitude, double left, double right, double L, int n, int sigma);
Potential sech_potential(cplx amplitude, double width, double L, int n, int sigma);

/// Ingest {"kind": gaussian|box|sech|samples, ..., "sigma", "L", "n"}.
/// Throws ConfigError naming the offending key.
Potential potential_from_json(const nlohmann::json& spec, const std::string& base_dir = ".");
/// CSV rows "x,Re q,Im q" on a symmetric uniform grid.
Potential potential_from_csv(const std::string& path, int sigma, DecayClass decay);

/// q0 as a function of x for the same JSON document: exact for the analytic kinds,
/// piecewise linear (zero outside [-L, L]) for samples.
std::function<cplx(double)> potential_profile(const nlohmann::json& spec, const std::string& base_dir = ".");

nlohmann::json potential_summary(const Potential& q0);

}  // namespace nnls
