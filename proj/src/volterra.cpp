#include "glinv/volterra.hpp"

#include <algorithm>
#include <cmath>

#include "glinv/rng.hpp"

namespace glinv {

ThetaFamily ThetaFamily::sampled(RadialProfile profile) {
  for (double v : profile.values)
    if (!(v > 0.0) || !(v < 1.0)) throw MalformedInput("sampled theta must take values in (0,1)");
  ThetaFamily fam;
  fam.kind = Kind::Sampled;
  fam.samples = std::make_shared<const RadialProfile>(std::move(profile));
  return fam;
}

double ThetaFamily::operator()(double r) const {
  switch (kind) {
    case Kind::Constant:
      return theta0;
    case Kind::OneMinusCOver1pR:
      return 1.0 - c / (1.0 + std::max(r, 0.0));
    case Kind::Sampled:
      if (!samples) throw MalformedInput("sampled theta without samples");
      return samples->value_at(std::max(r, 0.0));
  }
  return theta0;
}

RadialProfile ThetaFamily::m_profile(const std::vector<double>& grid) const {
  switch (kind) {
    case Kind::Constant:
      return RadialProfile::from_analytic({AnalyticProfile::Family::Constant, 1.0 - theta0, 1.0}, grid);
    case Kind::OneMinusCOver1pR:
      return RadialProfile::from_analytic({AnalyticProfile::Family::COver1pRho, c, 1.0}, grid);
    case Kind::Sampled: {
      if (!samples) throw MalformedInput("sampled theta without samples");
      std::vector<double> m(samples->values.size());
      for (std::size_t k = 0; k < m.size(); ++k) m[k] = 1.0 - samples->values[k];
      return RadialProfile::from_samples(samples->grid, std::move(m));
    }
  }
  throw MalformedInput("unknown theta family");
}

NormTag VolterraProblem::space_tag() const {
  return NormTag::lp(p, std::pow(1.0 / N, 1.0 / p));
}

namespace {

void validate(const VolterraProblem& prob) {
  if (prob.N < 1) throw MalformedInput("volterra: N >= 1");
  if (!(prob.p > 1.0)) throw MalformedInput("volterra: p > 1");
  if (static_cast<int>(prob.y.size()) != prob.N) throw MalformedInput("volterra: y needs N samples");
  if (!prob.phi) throw MalformedInput("volterra: missing kernel");
  const double t0 = prob.theta(0.0);
  if (!(t0 > 0.0) || !(t0 < 1.0)) throw MalformedInput("volterra: theta(0) must lie in (0,1)");
}

}  // namespace

VolterraProblem make_sin_problem(int N, double theta0, Eigen::VectorXd y, double p) {
  VolterraProblem prob;
  prob.N = N;
  prob.p = p;
  prob.y = std::move(y);
  prob.theta = ThetaFamily::constant(theta0);
  prob.phi = [theta0](double, double, double u) { return theta0 * std::sin(u); };
  validate(prob);
  return prob;
}

VolterraProblem make_clip_problem(int N, double theta0, Eigen::VectorXd y, double p) {
  VolterraProblem prob;
  prob.N = N;
  prob.p = p;
  prob.y = std::move(y);
  prob.theta = ThetaFamily::constant(theta0);
  prob.phi = [theta0](double, double, double u) { return theta0 * std::min(std::abs(u), 1.0); };
  validate(prob);
  return prob;
}

VolterraProblem make_log_shift_problem(int N, double c, Eigen::VectorXd y, double p) {
  if (!(c > 0.0) || !(c < 1.0)) throw MalformedInput("log-shift kernel needs c in (0,1)");
  VolterraProblem prob;
  prob.N = N;
  prob.p = p;
  prob.y = std::move(y);
  prob.theta = ThetaFamily::one_minus_c_over_1p_r(c);
  prob.phi = [c](double, double, double u) {
    const double sg = (u > 0.0) ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    return u - c * sg * std::log1p(std::abs(u));
  };
  validate(prob);
  return prob;
}

Eigen::VectorXd cumulative_x(const VolterraProblem& prob, const Eigen::VectorXd& d) {
  const int N = prob.N;
  if (static_cast<int>(d.size()) != N) throw MalformedInput("volterra: d needs N samples");
  const double h = 1.0 / N;
  Eigen::VectorXd x(N + 1);
  x[0] = 0.0;
  double prev = 0.0;  // implicit d_0 = 0
  for (int i = 1; i <= N; ++i) {
    x[i] = x[i - 1] + 0.5 * h * (prev + d[i - 1]);
    prev = d[i - 1];
  }
  // Discrete analogue of the sup bound: |x(t_i)| <= h |d|_1 <= ||d|| by
  // Hoelder over the quadrature weights.
  const double nd = norm_of(d, prob.space_tag());
  const double sup = x.cwiseAbs().maxCoeff();
  if (sup > nd * (1.0 + 1e-10) + 1e-12)
    throw EvaluationFailure("discrete sup bound violated: inconsistent discretization");
  return x;
}

Eigen::VectorXd apply_map(const VolterraProblem& prob, const Eigen::VectorXd& d) {
  const int N = prob.N;
  const double h = 1.0 / N;
  const Eigen::VectorXd x = cumulative_x(prob, d);
  Eigen::VectorXd out(N);
  for (int i = 1; i <= N; ++i) {
    const double ti = prob.t(i);
    // Trapezoid of Phi(t_i, tau, x(tau)) over tau in {t_0..t_i}.
    double q = 0.5 * (prob.phi(ti, 0.0, x[0]) + prob.phi(ti, ti, x[i]));
    for (int j = 1; j < i; ++j) q += prob.phi(ti, prob.t(j), x[j]);
    out[i - 1] = d[i - 1] + h * q;
  }
  return out;
}

PointMap build_map(const VolterraProblem& prob) {
  validate(prob);
  PointMap map;
  const NormTag tag = prob.space_tag();
  map.domain_dim = prob.N;
  map.codomain_dim = prob.N;
  map.domain_norm = tag;
  map.codomain_norm = tag;
  map.chain_rule = ChainRule::Strong;
  map.f = [prob](const Eigen::VectorXd& d) { return apply_map(prob, d); };

  // One shared identity center: copies reuse the matrix and its singular
  // value cache across all jf queries.
  const LinearMap center(Eigen::MatrixXd::Identity(prob.N, prob.N), tag, tag);
  const ThetaFamily theta = prob.theta;
  map.jf = [center, theta, tag](const Eigen::VectorXd& d) {
    const double r = norm_of(d, tag);
    return PseudoJacobian::ball(center, theta(r));
  };
  return map;
}

HadamardCertificate certificate_for(const VolterraProblem& prob, double r_max) {
  return make_certificate(prob.theta.m_profile(RadialProfile::default_grid(r_max)));
}

PhiConditionReport check_phi(const VolterraProblem& prob, double r_max, int n_samples,
                             std::uint64_t seed) {
  if (!(r_max > 0.0)) throw MalformedInput("check_phi: r_max > 0");
  Rng rng(seed);
  PhiConditionReport rep;
  rep.samples_used = n_samples;

  // Growth bound: fit (a, b) on half the samples, verify on the rest.
  const double u_range = std::max(10.0, 2.0 * r_max);
  struct Triple {
    double t, tau, u, phi;
  };
  std::vector<Triple> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double t = rng.uniform01();
    const double tau = t * rng.uniform01();
    const double u = rng.uniform(-u_range, u_range);
    samples.push_back({t, tau, u, prob.phi(t, tau, u)});
  }
  double b_fit = 0.0, a_fit = 0.0;
  const int half = n_samples / 2;
  for (int i = 0; i < half; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (std::abs(s.u) <= 1.0) b_fit = std::max(b_fit, std::abs(s.phi));
  }
  for (int i = 0; i < half; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (std::abs(s.u) > 1.0) a_fit = std::max(a_fit, (std::abs(s.phi) - b_fit) / std::abs(s.u));
  }
  rep.a = 1.05 * std::max(a_fit, 0.0) + 1e-9;
  rep.b = 1.05 * b_fit + 1e-9;
  rep.growth_ok = true;
  for (int i = half; i < n_samples; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (std::abs(s.phi) > rep.a * std::abs(s.u) + rep.b + 1e-12) {
      rep.growth_ok = false;
      rep.violation = {s.t, s.tau, s.u};
      break;
    }
  }

  // theta(r)-Lipschitz bound on |u|, |v| <= r for r on a grid up to r_max.
  rep.lipschitz_ok = true;
  rep.worst_ratio_excess = -std::numeric_limits<double>::infinity();
  const int r_levels = 8;
  const int pairs_per_level = std::max(n_samples / r_levels, 8);
  for (int k = 1; k <= r_levels; ++k) {
    const double r = r_max * k / r_levels;
    const double theta_r = prob.theta(r);
    for (int i = 0; i < pairs_per_level; ++i) {
      const double t = rng.uniform01();
      const double tau = t * rng.uniform01();
      const double u = rng.uniform(-r, r);
      const double v = rng.uniform(-r, r);
      if (std::abs(u - v) < 1e-12) continue;
      const double ratio = std::abs(prob.phi(t, tau, u) - prob.phi(t, tau, v)) / std::abs(u - v);
      rep.worst_ratio_excess = std::max(rep.worst_ratio_excess, ratio - theta_r);
      if (ratio > theta_r + 1e-9) {
        rep.lipschitz_ok = false;
        if (rep.violation.empty()) rep.violation = {t, tau, u, v};
      }
    }
  }
  return rep;
}

FixedPointResult fixed_point_solve(const VolterraProblem& prob, double tol) {
  validate(prob);
  if (!(tol > 0.0)) throw MalformedInput("fixed_point_solve: tol > 0");
  const NormTag tag = prob.space_tag();

  Eigen::VectorXd d = prob.y;
  double prev_delta = -1.0;
  int slow = 0;
  FixedPointResult out;
  const int cap = 200000;
  for (int it = 1; it <= cap; ++it) {
    // d_next = y - Q(x(d)); apply_map returns d + Q, so subtract d.
    const Eigen::VectorXd q = apply_map(prob, d) - d;
    const Eigen::VectorXd d_next = prob.y - q;
    const double delta = norm_of(d_next - d, tag);
    if (!std::isfinite(delta)) {
      if (++slow >= 100) throw NoContraction();
    } else if (prev_delta > 0.0 && delta > 0.0) {
      const double ratio = delta / prev_delta;
      out.contraction_factor = std::max(out.contraction_factor, std::min(ratio, 1.0));
      slow = (ratio > 1.0 - 1e-9) ? slow + 1 : 0;
      if (slow >= 100) throw NoContraction();
    }
    d = d_next;
    out.iterations = it;
    if (delta < tol) {
      out.d = d;
      return out;
    }
    prev_delta = delta;
  }
  throw NoContraction();
}

InverseLipschitzScan verify_inverse_lipschitz(const VolterraProblem& prob, int n_pairs, double delta,
                                              std::uint64_t seed, const SolveOptions& opts,
                                              double bound_scale) {
  validate(prob);
  if (!(delta > 0.0)) throw MalformedInput("verify_inverse_lipschitz: delta > 0");
  const NormTag tag = prob.space_tag();
  const PointMap map = build_map(prob);
  Rng rng(seed);

  SolveOptions inner = opts;
  inner.tol_residual = std::min(inner.tol_residual, 1e-10);

  InverseLipschitzScan scan;
  scan.pass = true;
  scan.worst_excess = -std::numeric_limits<double>::infinity();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(prob.N);
  for (int i = 0; i < n_pairs; ++i) {
    Eigen::VectorXd y(prob.N);
    for (int j = 0; j < prob.N; ++j) y[j] = rng.uniform(-2.0, 2.0);
    Eigen::VectorXd step = rng.normal_vec(prob.N);
    step *= delta / norm_of(step, tag);
    const Eigen::VectorXd y2 = y + step;

    const SolveReport r1 = solve(map, y, zero, inner);
    const SolveReport r2 = solve(map, y2, zero, inner);
    if (r1.status != SolveStatus::Solved || r2.status != SolveStatus::Solved)
      throw NonConvergence("inverse-Lipschitz scan: inner solve failed");

    const double dx = norm_of(r1.x_final - r2.x_final, tag);
    const double dy = norm_of(y - y2, tag);
    const double ratio = dx / dy;
    const double rmax = std::max(norm_of(r1.x_final, tag), norm_of(r2.x_final, tag));
    const double bound = bound_scale / (1.0 - prob.theta(rmax)) + 1e-3;
    scan.ratios.push_back(ratio);
    scan.bounds.push_back(bound);
    scan.worst_excess = std::max(scan.worst_excess, ratio - bound);
    if (ratio > bound) scan.pass = false;
  }
  return scan;
}

}  // namespace glinv
