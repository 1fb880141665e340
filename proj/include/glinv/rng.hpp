// Seeded random sampling helpers.  All distributions are hand-rolled on top
// of mt19937_64 so that a given seed produces the same stream on every
// platform and standard library.

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

#include "glinv/norms.hpp"

namespace glinv {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform01() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform01() * (hi - lo + 1));
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    while (u <= 0.0) u = uniform01();
    const double v = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * M_PI * v);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * v);
  }

  Eigen::VectorXd normal_vec(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // Uniform on the euclidean unit sphere.
  Eigen::VectorXd unit_sphere(int n) {
    Eigen::VectorXd v = normal_vec(n);
    double nv = v.norm();
    while (nv < 1e-300) {
      v = normal_vec(n);
      nv = v.norm();
    }
    return v / nv;
  }

  // Uniform in the euclidean ball of given radius around the origin.
  Eigen::VectorXd in_ball(int n, double radius) {
    return unit_sphere(n) * (radius * std::pow(uniform01(), 1.0 / n));
  }

  // Uniform in the ball {x : ||x||_tag <= radius}.
  Eigen::VectorXd in_norm_ball(const NormTag& tag, int n, double radius) {
    switch (tag.kind) {
      case NormTag::Kind::L2:
        return in_ball(n, radius);
      case NormTag::Kind::Linf: {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform(-radius, radius);
        return v;
      }
      case NormTag::Kind::L1:
        return lp_ball(n, 1.0, radius);
      case NormTag::Kind::Lp:
        return lp_ball(n, tag.p, radius / tag.scale);
    }
    return Eigen::VectorXd::Zero(n);
  }

 private:
  // Uniform in {|x|_p <= radius} via the generalized-normal direction method.
  Eigen::VectorXd lp_ball(int n, double p, double radius) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
      const double mag = (p == 1.0) ? exponential() : std::pow(gamma(1.0 / p), 1.0 / p);
      g[i] = (uniform01() < 0.5 ? -mag : mag);
    }
    double np = 0.0;
    for (int i = 0; i < n; ++i) np += std::pow(std::abs(g[i]), p);
    np = std::pow(np, 1.0 / p);
    if (np < 1e-300) return Eigen::VectorXd::Zero(n);
    return g * (radius * std::pow(uniform01(), 1.0 / n) / np);
  }

  double exponential() {
    double u = 0.0;
    while (u <= 0.0) u = uniform01();
    return -std::log(u);
  }

  // Marsaglia-Tsang; boost for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = std::max(uniform01(), 1e-300);
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = std::max(uniform01(), 1e-300);
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace glinv
