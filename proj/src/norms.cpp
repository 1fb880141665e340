#include "glinv/norms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace glinv {

NormTag NormTag::lp(double p, double scale) {
  if (!(p > 1.0) || !std::isfinite(p)) throw MalformedInput("Lp tag needs finite p > 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw MalformedInput("Lp tag needs scale > 0");
  return NormTag{Kind::Lp, p, scale};
}

bool operator==(const NormTag& a, const NormTag& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == NormTag::Kind::Lp) return a.p == b.p && a.scale == b.scale;
  return true;
}

NormTag dual(const NormTag& tag) {
  switch (tag.kind) {
    case NormTag::Kind::L1:
      return NormTag::linf();
    case NormTag::Kind::Linf:
      return NormTag::l1();
    case NormTag::Kind::L2:
      return NormTag::l2();
    case NormTag::Kind::Lp: {
      const double q = tag.p / (tag.p - 1.0);
      return NormTag::lp(q, 1.0 / tag.scale);
    }
  }
  return NormTag::l2();
}

double norm_of(const Eigen::VectorXd& v, const NormTag& tag) {
  switch (tag.kind) {
    case NormTag::Kind::L1:
      return v.lpNorm<1>();
    case NormTag::Kind::L2:
      return v.norm();
    case NormTag::Kind::Linf:
      return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
    case NormTag::Kind::Lp: {
      if (tag.p == 2.0) return tag.scale * v.norm();
      // Scale out the max entry to avoid overflow in |v_i|^p.
      const double m = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, tag.p);
      return tag.scale * m * std::pow(s, 1.0 / tag.p);
    }
  }
  return 0.0;
}

double dual_norm_of(const Eigen::VectorXd& v, const NormTag& tag) { return norm_of(v, dual(tag)); }

EuclidSandwich euclid_bounds(const NormTag& tag, int dim) {
  const double n = static_cast<double>(std::max(dim, 1));
  switch (tag.kind) {
    case NormTag::Kind::L1:
      return {1.0, std::sqrt(n)};
    case NormTag::Kind::L2:
      return {1.0, 1.0};
    case NormTag::Kind::Linf:
      return {1.0 / std::sqrt(n), 1.0};
    case NormTag::Kind::Lp: {
      // |x|_p <= |x|_2 <= n^(1/2-1/p) |x|_p  for p >= 2, reversed for p <= 2.
      const double f = std::pow(n, 1.0 / tag.p - 0.5);
      if (tag.p >= 2.0) return {tag.scale * f, tag.scale};
      return {tag.scale, tag.scale * f};
    }
  }
  return {1.0, 1.0};
}

Eigen::VectorXd dual_vector(const Eigen::VectorXd& v, const NormTag& tag) {
  const double nv = norm_of(v, tag);
  if (nv == 0.0) throw ZeroVector();
  const Eigen::Index n = v.size();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  switch (tag.kind) {
    case NormTag::Kind::L2:
      return v / v.norm();
    case NormTag::Kind::L1:
      for (Eigen::Index i = 0; i < n; ++i) y[i] = (v[i] > 0.0) ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
      return y;
    case NormTag::Kind::Linf: {
      const double m = v.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v[i]) == m) {
          y[i] = (v[i] >= 0.0) ? 1.0 : -1.0;
          break;
        }
      }
      return y;
    }
    case NormTag::Kind::Lp: {
      if (tag.p == 2.0) return tag.scale * v / v.norm();
      const double vp = nv / tag.scale;  // plain |v|_p
      for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(v[i]) / vp;
        y[i] = (v[i] >= 0.0 ? 1.0 : -1.0) * std::pow(a, tag.p - 1.0);
      }
      return tag.scale * y;
    }
  }
  return y;
}

std::string to_string(const NormTag& tag) {
  switch (tag.kind) {
    case NormTag::Kind::L1:
      return "l1";
    case NormTag::Kind::L2:
      return "l2";
    case NormTag::Kind::Linf:
      return "linf";
    case NormTag::Kind::Lp: {
      std::ostringstream os;
      os << "lp(p=" << tag.p << ",scale=" << tag.scale << ")";
      return os.str();
    }
  }
  return "?";
}

}  // namespace glinv
