// Norm tags, dual norms and dual-vector selections on R^n.

#pragma once

#include <Eigen/Core>
#include <string>

#include "glinv/errors.hpp"

namespace glinv {

// Tag describing the norm put on a coordinate space.  Lp carries an exponent
// p in (1, inf) and a positive scale: ||x|| = scale * (sum |x_i|^p)^(1/p).
// Lp with p = 2 is euclidean geometry up to the scale factor; several
// operations are exact only on such tags.
struct NormTag {
  enum class Kind { L1, L2, Linf, Lp };

  Kind kind = Kind::L2;
  double p = 2.0;      // Lp only
  double scale = 1.0;  // Lp only

  static NormTag l1() { return NormTag{Kind::L1, 1.0, 1.0}; }
  static NormTag l2() { return NormTag{Kind::L2, 2.0, 1.0}; }
  static NormTag linf() { return NormTag{Kind::Linf, 2.0, 1.0}; }
  static NormTag lp(double p, double scale);

  bool euclidean() const { return kind == Kind::L2 || (kind == Kind::Lp && p == 2.0); }

  // ||x||_tag = euclidean_scale() * |x|_2 for euclidean tags.
  double euclidean_scale() const { return kind == Kind::L2 ? 1.0 : scale; }
};

bool operator==(const NormTag& a, const NormTag& b);
inline bool operator!=(const NormTag& a, const NormTag& b) { return !(a == b); }

// Dual tag: L1 <-> Linf, L2 -> L2, Lp(p, s) -> Lp(q, 1/s) with 1/p + 1/q = 1.
// An involution.
NormTag dual(const NormTag& tag);

double norm_of(const Eigen::VectorXd& v, const NormTag& tag);
double dual_norm_of(const Eigen::VectorXd& v, const NormTag& tag);

// Two-sided comparison with the euclidean norm on R^dim:
//   lo * |x|_2 <= ||x||_tag <= hi * |x|_2.
struct EuclidSandwich {
  double lo = 1.0;
  double hi = 1.0;
};
EuclidSandwich euclid_bounds(const NormTag& tag, int dim);

// A norming functional for v: returns y* with dual-norm(y*) = 1 and
// <y*, v> = ||v||_tag.  Where the norm subdifferential is a set the selection
// is deterministic: sign vector for L1 (sign(0) = 0), full mass on the
// smallest maximizing index for Linf.  Throws ZeroVector for v = 0.
Eigen::VectorXd dual_vector(const Eigen::VectorXd& v, const NormTag& tag);

std::string to_string(const NormTag& tag);

}  // namespace glinv
