#include "glinv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glinv/rng.hpp"

namespace glinv {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved:
      return "solved";
    case SolveStatus::CriticalNonsolution:
      return "critical_nonsolution";
    case SolveStatus::PsEscape:
      return "ps_escape";
    case SolveStatus::IterationCap:
      return "iteration_cap";
  }
  return "?";
}

std::string to_string(PsClass c) {
  switch (c) {
    case PsClass::ConvergingPsSequence:
      return "converging_ps_sequence";
    case PsClass::BoundedNonconverging:
      return "bounded_nonconverging";
    case PsClass::Escaping:
      return "escaping";
  }
  return "?";
}

std::string to_string(UniquenessReport::Verdict v) {
  switch (v) {
    case UniquenessReport::Verdict::UniqueEmpirical:
      return "unique_empirical";
    case UniquenessReport::Verdict::NonUnique:
      return "non_unique";
    case UniquenessReport::Verdict::NoSolutions:
      return "no_solutions";
  }
  return "?";
}

DescentDirection descent_direction(const PointMap& map, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y) {
  const Eigen::VectorXd fx = map.eval(x);
  const DualSlice slice = delta_Fy(map.jf(x), fx, y, map.codomain_norm);
  const SliceMin mn = slice_min_norm(slice);
  if (mn.lambda <= 1e-14) throw CriticalPoint();
  // Unit direction in the domain norm; the slice representative lives in
  // euclidean coordinates, so scale with the domain's euclidean factor.
  if (!map.domain_norm.euclidean())
    throw UnsupportedNorm("descent direction needs a euclidean-type domain tag");
  const double s = map.domain_norm.euclidean_scale();
  Eigen::VectorXd d = -mn.w / (s * mn.w.norm());
  return DescentDirection{std::move(d), mn.lambda};
}

namespace {

// Monotone, substantial norm growth over the trailing half plus vanishing PS
// products.  The growth factor keeps convergence toward a finite critical
// point from reading as an escape.
bool escape_trend(const std::vector<double>& norms, const std::vector<double>& products) {
  if (norms.size() < 10 || products.empty()) return false;
  const std::size_t half = norms.size() / 2;
  for (std::size_t k = half; k + 1 < norms.size(); ++k)
    if (norms[k + 1] < norms[k] - 1e-12) return false;
  if (!(norms.back() > 1.5 * std::max(norms[half], 1.0))) return false;
  double pmax = 0.0;
  for (double p : products) pmax = std::max(pmax, p);
  return products.back() <= std::max(1e-6, 1e-3 * pmax);
}

}  // namespace

SolveReport solve(const PointMap& map, const Eigen::VectorXd& y, const Eigen::VectorXd& x0,
                  const SolveOptions& opts, const HadamardCertificate* cert) {
  if (!x0.allFinite()) throw MalformedInput("solve: x0 must be finite");
  if (static_cast<int>(x0.size()) != map.domain_dim || static_cast<int>(y.size()) != map.codomain_dim)
    throw MalformedInput("solve: dimension mismatch");

  std::function<double(double)> h = opts.weight;
  if (!h && cert) h = weight_from_m(cert->m).h;

  SolveReport rep;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd fx = map.eval(x);
  double res = norm_of(fx - y, map.codomain_norm);
  rep.residual_trace.push_back(res);
  rep.norm_trace.push_back(norm_of(x, map.domain_norm));

  if (!map.domain_norm.euclidean())
    throw UnsupportedNorm("solve needs a euclidean-type domain tag");

  bool claim_warned = false;
  auto push_tail = [&rep](const Eigen::VectorXd& z) {
    rep.tail.push_back(z);
    if (rep.tail.size() > 8) rep.tail.erase(rep.tail.begin());
  };
  push_tail(x);

  rep.status = SolveStatus::IterationCap;
  int n = 0;
  for (; n < opts.max_iters; ++n) {
    if (res <= opts.tol_residual) {
      rep.status = SolveStatus::Solved;
      break;
    }

    const PseudoJacobian pj = map.jf(x);
    DualSlice slice;
    SliceMin mn;
    try {
      slice = delta_Fy(pj, fx, y, map.codomain_norm);
      mn = slice_min_norm(slice);
    } catch (const CoincidentTarget&) {
      rep.status = SolveStatus::Solved;  // exactly on target
      break;
    }
    const double lambda = mn.lambda;
    rep.lambda_trace.push_back(lambda);
    if (h) rep.ps_product_trace.push_back(lambda * (1.0 + h(rep.norm_trace.back())));

    // The slice min-norm value dominates the regularity index when the
    // strong chain rule holds; for singleton and ball forms this is exact
    // arithmetic, so a violation is reported loudly.
    if (map.chain_rule == ChainRule::Strong && !claim_warned &&
        pj.kind() != PseudoJacobian::Kind::Hull && pj.rows() == pj.cols()) {
      const double reg = reg_at(pj).value;
      if (lambda < reg - 1e-9) {
        rep.warnings.push_back("criticality value " + std::to_string(lambda) +
                               " fell below the regularity index " + std::to_string(reg) +
                               " under a strong chain-rule declaration");
        claim_warned = true;
      }
    }

    if (lambda <= 1e-7) {
      // Criticality values can vanish either at a genuine critical point or
      // along an escaping sequence; the norm trend tells the two apart.
      const auto& prods = rep.ps_product_trace.empty() ? rep.lambda_trace : rep.ps_product_trace;
      if (escape_trend(rep.norm_trace, prods)) {
        rep.status = SolveStatus::PsEscape;
        break;
      }
      rep.status = SolveStatus::CriticalNonsolution;
      if (map.chain_rule == ChainRule::Strong) {
        double reg = 0.0;
        try {
          reg = reg_at(pj).value;
        } catch (const NotSquare&) {
        }
        if (reg > 1e-7)
          rep.warnings.push_back(
              "critical non-solution with positive regularity index under a strong "
              "chain-rule declaration: inconsistent inputs");
      }
      break;
    }

    const double s = map.domain_norm.euclidean_scale();
    const Eigen::VectorXd dir = -mn.w / (s * mn.w.norm());

    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_next, fx_next;
    double res_next = 0.0;
    for (int b = 0; b <= opts.max_backtracks && t >= opts.min_step; ++b) {
      x_next = x + t * dir;
      fx_next = map.eval(x_next);
      res_next = norm_of(fx_next - y, map.codomain_norm);
      if (res_next <= res - opts.armijo_c * t * lambda) {
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) {
      // No admissible step above the floor: stalled line search.
      rep.warnings.push_back("line search stalled at step " + std::to_string(t));
      rep.status = SolveStatus::IterationCap;
      break;
    }

    x = x_next;
    fx = fx_next;
    res = res_next;
    rep.residual_trace.push_back(res);
    rep.norm_trace.push_back(norm_of(x, map.domain_norm));
    push_tail(x);

    if (rep.norm_trace.back() > opts.escape_norm) {
      rep.status = SolveStatus::PsEscape;
      ++n;
      break;
    }
  }
  rep.iterations = n;
  rep.x_final = x;

  if (res <= opts.tol_residual) rep.status = SolveStatus::Solved;
  // With no weight declared the PS products default to the plain lambdas.
  const auto& products = rep.ps_product_trace.empty() ? rep.lambda_trace : rep.ps_product_trace;
  if (rep.status == SolveStatus::IterationCap && escape_trend(rep.norm_trace, products))
    rep.status = SolveStatus::PsEscape;

  if (cert && rep.status == SolveStatus::Solved) {
    try {
      rep.inv_lip_bound = inverse_lipschitz_bound(cert->m, rep.norm_trace.back());
    } catch (const Error& e) {
      rep.warnings.push_back(std::string("inverse Lipschitz bound unavailable: ") + e.what());
    }
    try {
      const double gap = norm_of(y - map.eval(Eigen::VectorXd::Zero(map.domain_dim)), map.codomain_norm);
      const double rstar = a_priori_radius(*cert, gap);
      if (rep.norm_trace.back() > rstar + 1e-6)
        rep.warnings.push_back("solution norm " + std::to_string(rep.norm_trace.back()) +
                               " exceeds the a-priori radius " + std::to_string(rstar));
    } catch (const Error& e) {
      rep.warnings.push_back(std::string("a-priori radius unavailable: ") + e.what());
    }
  }
  return rep;
}

PsClass ps_classify(const SolveReport& report, const std::function<double(double)>& weight) {
  if (report.iterations < 10) throw TraceTooShort();

  std::vector<double> products;
  const std::size_t n = std::min(report.lambda_trace.size(), report.norm_trace.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double h = weight ? weight(report.norm_trace[k]) : 0.0;
    products.push_back(report.lambda_trace[k] * (1.0 + h));
  }

  double max_norm = 0.0;
  for (double v : report.norm_trace) max_norm = std::max(max_norm, v);
  if (max_norm > 1e6 || escape_trend(report.norm_trace, products)) return PsClass::Escaping;

  // Cauchy tail: diameter of the last few stored iterates.  A short window
  // keeps geometric convergence at tolerance 1e-8 below the 1e-6 threshold.
  double diam = 0.0;
  const auto& tail = report.tail;
  const std::size_t first = tail.size() > 4 ? tail.size() - 4 : 0;
  for (std::size_t a = first; a < tail.size(); ++a)
    for (std::size_t b = a + 1; b < tail.size(); ++b)
      diam = std::max(diam, (tail[a] - tail[b]).norm());
  if (!tail.empty() && diam < 1e-6) return PsClass::ConvergingPsSequence;
  return PsClass::BoundedNonconverging;
}

UniquenessReport uniqueness_certificate(const PointMap& map, const Eigen::VectorXd& y,
                                        const std::vector<Eigen::VectorXd>& solutions, int n_starts,
                                        std::uint64_t seed, const SolveOptions& opts,
                                        const HadamardCertificate* cert) {
  UniquenessReport rep;

  for (const auto& sol : solutions) {
    if (norm_of(map.eval(sol) - y, map.codomain_norm) > opts.tol_residual)
      throw MalformedInput("uniqueness_certificate: a listed solution misses the target");
  }

  double radius = 1.0;
  for (const auto& sol : solutions) radius = std::max(radius, 2.0 * norm_of(sol, map.domain_norm));
  if (cert && cert->divergent()) {
    try {
      const double gap = norm_of(y - map.eval(Eigen::VectorXd::Zero(map.domain_dim)), map.codomain_norm);
      radius = std::max(radius, a_priori_radius(*cert, gap) * 1.1 + 0.1);
    } catch (const Error&) {
    }
  }
  rep.search_radius = radius;

  std::vector<Eigen::VectorXd> endpoints = solutions;
  Rng rng(seed);
  for (int i = 0; i < n_starts; ++i) {
    const Eigen::VectorXd x0 = rng.in_norm_ball(map.domain_norm, map.domain_dim, radius);
    SolveReport run = solve(map, y, x0, opts, cert);
    if (run.status == SolveStatus::Solved) {
      endpoints.push_back(run.x_final);
      ++rep.solved_runs;
    }
  }

  // Greedy clustering at radius 1e-6 in the domain norm.
  for (const auto& e : endpoints) {
    bool placed = false;
    for (const auto& c : rep.clusters) {
      if (norm_of(e - c, map.domain_norm) < 1e-6) {
        placed = true;
        break;
      }
    }
    if (!placed) rep.clusters.push_back(e);
  }

  // A positive segment modulus between two distinct solution clusters
  // contradicts f(u) = f(w) = y: report it rather than hiding it.  The
  // sampled minimum can miss a zero of the modulus between grid points, so
  // only values above the observed per-step variation count as witnesses.
  const int seg_samples = 64;
  for (std::size_t a = 0; a < rep.clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < rep.clusters.size(); ++b) {
      const Eigen::VectorXd& u = rep.clusters[a];
      const Eigen::VectorXd& w = rep.clusters[b];
      double alpha = std::numeric_limits<double>::infinity();
      double slack = 0.0, prev = 0.0;
      for (int i = 0; i < seg_samples; ++i) {
        const double t = static_cast<double>(i) / (seg_samples - 1);
        const double v = inj_at(map.jf(u + t * (w - u))).value;
        alpha = std::min(alpha, v);
        if (i > 0) slack = std::max(slack, std::abs(v - prev));
        prev = v;
      }
      if (alpha > slack + 1e-9) rep.inconsistencies.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }

  const int n_probes = 8;
  bool probes_positive = true;
  for (int i = 0; i < n_probes; ++i) {
    const Eigen::VectorXd u = rng.in_norm_ball(map.domain_norm, map.domain_dim, radius);
    const Eigen::VectorXd w = rng.in_norm_ball(map.domain_norm, map.domain_dim, radius);
    if (norm_of(u - w, map.domain_norm) == 0.0) continue;
    const double alpha = segment_injectivity_modulus(map, u, w, 32);
    rep.probe_moduli.push_back(alpha);
    probes_positive = probes_positive && alpha > 0.0;
  }

  if (rep.clusters.empty())
    rep.verdict = UniquenessReport::Verdict::NoSolutions;
  else if (rep.clusters.size() == 1 && probes_positive)
    rep.verdict = UniquenessReport::Verdict::UniqueEmpirical;
  else
    rep.verdict = UniquenessReport::Verdict::NonUnique;
  return rep;
}

SquaredModeResult squared_mode_check(const PointMap& map, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& y) {
  const Eigen::VectorXd fx = map.eval(x);
  const double F = norm_of(fx - y, map.codomain_norm);
  if (F == 0.0) throw CoincidentTarget();
  const PseudoJacobian pj = map.jf(x);
  if (pj.kind() == PseudoJacobian::Kind::Ball)
    throw MalformedInput("squared_mode_check covers singleton and hull forms");
  if (!map.codomain_norm.euclidean())
    throw UnsupportedNorm("squared_mode_check needs a euclidean codomain");

  const DualSlice slice = delta_Fy(pj, fx, y, map.codomain_norm);
  const double lam_f = slice_min_norm(slice).lambda;

  DualSlice scaled = slice;
  for (auto& v : scaled.vectors) v *= F;
  const double lam_g = slice_min_norm(scaled).lambda;

  SquaredModeResult out;
  out.deviation = std::abs(lam_g - F * lam_f);
  out.ok = out.deviation <= 1e-9;
  return out;
}

namespace {

// Ball-restricted residual descent used by the openness oracle.
Eigen::VectorXd refine_in_ball(const PointMap& map, const Eigen::VectorXd& center, double r,
                               const Eigen::VectorXd& target, Eigen::VectorXd z) {
  auto project = [&](Eigen::VectorXd p) {
    const double d = (p - center).norm();
    if (d > r) p = center + (p - center) * (r / d);
    return p;
  };
  double gz = norm_of(map.eval(z) - target, map.codomain_norm);
  for (int it = 0; it < 200 && gz > 1e-10; ++it) {
    DescentDirection dd;
    try {
      dd = descent_direction(map, z, target);
    } catch (const Error&) {
      break;
    }
    double t = 1.0;
    bool moved = false;
    for (int b = 0; b < 40; ++b) {
      const Eigen::VectorXd zc = project(z + t * dd.direction);
      const double gc = norm_of(map.eval(zc) - target, map.codomain_norm);
      if (gc < gz - 1e-12) {
        z = zc;
        gz = gc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return z;
}

}  // namespace

OpennessReport openness_oracle_2d(const PointMap& map, const Eigen::VectorXd& x, double r,
                                  double alpha, int n_rays, int n_disk, std::uint64_t seed) {
  if (map.domain_dim != 2 || map.codomain_dim != 2) throw DimensionNot2();
  if (!(r > 0.0) || !(alpha > 0.0)) throw MalformedInput("openness oracle: r, alpha > 0");

  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts, images;
  pts.reserve(static_cast<std::size_t>(n_disk));
  for (int i = 0; i < n_disk; ++i) {
    pts.push_back(x + rng.in_ball(2, r));
    images.push_back(map.eval(pts.back()));
  }
  const Eigen::VectorXd fx = map.eval(x);

  // Mean nearest-neighbor spacing of the image cloud.
  double disp = 0.0;
  for (std::size_t a = 0; a < images.size(); ++a) {
    double nn = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < images.size(); ++b)
      if (a != b) nn = std::min(nn, (images[a] - images[b]).norm());
    disp += nn;
  }
  disp /= std::max<std::size_t>(images.size(), 1);

  OpennessReport rep;
  rep.dispersion = disp;
  rep.threshold = 3.0 * disp;
  rep.worst_gap = 0.0;

  const double ring = 0.95 * alpha * r;
  for (int k = 0; k < n_rays; ++k) {
    const double phi = 2.0 * M_PI * k / n_rays;
    Eigen::VectorXd target(2);
    target << fx[0] + ring * std::cos(phi), fx[1] + ring * std::sin(phi);

    std::size_t best = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < images.size(); ++i) {
      const double d = (images[i] - target).norm();
      if (d < bestd) {
        bestd = d;
        best = i;
      }
    }
    const Eigen::VectorXd z = refine_in_ball(map, x, r, target, pts[best]);
    const double gap = std::min(bestd, norm_of(map.eval(z) - target, map.codomain_norm));
    rep.worst_gap = std::max(rep.worst_gap, gap);
  }
  rep.pass = rep.worst_gap <= rep.threshold;
  return rep;
}

}  // namespace glinv
