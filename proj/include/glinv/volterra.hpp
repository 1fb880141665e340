// Discretized Volterra integro-differential problem family
//   x'(t) + integral_0^t Phi(t, tau, x(tau)) dtau = y(t),  x(0) = 0,
// on the uniform grid t_i = i/N.  The unknown is the vector of derivative
// samples d_i ~ x'(t_i), i = 1..N; x is recovered by cumulative trapezoid
// with the implicit boundary sample d_0 = 0.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "glinv/certificates.hpp"
#include "glinv/pseudo_jacobian.hpp"
#include "glinv/solver.hpp"

namespace glinv {

// Radial Lipschitz profile theta of the kernel, with values in (0, 1).
// Either a closed form or a sampled radial profile; a sampled theta is only
// defined on its grid and queries beyond it fail loudly.
struct ThetaFamily {
  enum class Kind { Constant, OneMinusCOver1pR, Sampled };
  Kind kind = Kind::Constant;
  double theta0 = 0.5;  // Constant
  double c = 0.5;       // OneMinusCOver1pR: theta(r) = 1 - c/(1+r)
  std::shared_ptr<const RadialProfile> samples;

  static ThetaFamily constant(double theta0) { return {Kind::Constant, theta0, 0.0, nullptr}; }
  static ThetaFamily one_minus_c_over_1p_r(double c) {
    return {Kind::OneMinusCOver1pR, 0.0, c, nullptr};
  }
  static ThetaFamily sampled(RadialProfile profile);

  double operator()(double r) const;
  // The associated surjection floor m = 1 - theta: closed form on the given
  // grid for analytic kinds, the sample grid for sampled ones.
  RadialProfile m_profile(const std::vector<double>& grid) const;
};

struct VolterraProblem {
  int N = 100;
  double p = 2.0;  // exponent of the discrete W^{1,p}_0 norm; 2 is the certified default
  std::function<double(double, double, double)> phi;  // Phi(t, tau, u)
  ThetaFamily theta;
  Eigen::VectorXd y;  // target samples y(t_i), i = 1..N

  // Discrete W^{1,p}_0 tag on the derivative samples:
  // ||d|| = (1/N)^(1/p) |d|_p.  Used on both sides of the map.
  NormTag space_tag() const;
  double t(int i) const { return static_cast<double>(i) / N; }
};

// Shipped kernel instances.
VolterraProblem make_sin_problem(int N, double theta0, Eigen::VectorXd y, double p = 2.0);
VolterraProblem make_clip_problem(int N, double theta0, Eigen::VectorXd y, double p = 2.0);
// Phi(t,tau,u) = u - c sign(u) log(1+|u|), theta(r) = 1 - c/(1+r), c in (0,1).
VolterraProblem make_log_shift_problem(int N, double c, Eigen::VectorXd y, double p = 2.0);

// x(t_i), i = 0..N, by cumulative trapezoid of the derivative samples.
// Asserts the discrete sup bound max_i |x(t_i)| <= ||d||.
Eigen::VectorXd cumulative_x(const VolterraProblem& prob, const Eigen::VectorXd& d);

// f(d)_i = d_i + Q_i(x(d)) with trapezoid quadrature of Phi(t_i, ., x(.))
// over [0, t_i].
Eigen::VectorXd apply_map(const VolterraProblem& prob, const Eigen::VectorXd& d);

// PointMap with the ball-form pseudo-Jacobian: identity center, radius
// theta(||d||) at the query point, strong chain rule declared.
PointMap build_map(const VolterraProblem& prob);

// Analytic Hadamard certificate from the declared theta profile.
HadamardCertificate certificate_for(const VolterraProblem& prob, double r_max = 64.0);

struct PhiConditionReport {
  bool growth_ok = false;
  double a = 0.0, b = 0.0;  // fitted growth envelope |Phi| <= a|u| + b
  bool lipschitz_ok = false;
  double worst_ratio_excess = 0.0;  // max over the r-grid of (ratio - theta(r))
  int samples_used = 0;
  std::vector<double> violation;  // (t, tau, u[, v]) of the worst violation, if any
};

// Sampled surrogate verification of the kernel growth bound and the
// theta(r)-Lipschitz bound; maxima over samples, never claimed as suprema.
PhiConditionReport check_phi(const VolterraProblem& prob, double r_max, int n_samples,
                             std::uint64_t seed);

struct FixedPointResult {
  Eigen::VectorXd d;
  int iterations = 0;
  double contraction_factor = 0.0;
};

// Picard iteration d <- y - Q(x(d)) from d = y; the independent ground-truth
// solver for the family.  Throws NoContraction if the empirical ratio stays
// above 1 - 1e-9 for 100 consecutive steps.
FixedPointResult fixed_point_solve(const VolterraProblem& prob, double tol = 1e-12);

struct InverseLipschitzScan {
  bool pass = false;
  std::vector<double> ratios;
  std::vector<double> bounds;
  double worst_excess = 0.0;  // max (ratio - bound)
};

// Solves f(d) = y and f(d') = y' for seeded targets with ||y - y'|| = delta
// and checks ||d - d'|| / delta <= bound_scale / m(max(||d||, ||d'||)) + 1e-3.
InverseLipschitzScan verify_inverse_lipschitz(const VolterraProblem& prob, int n_pairs, double delta,
                                              std::uint64_t seed, const SolveOptions& opts = {},
                                              double bound_scale = 1.0);

}  // namespace glinv
