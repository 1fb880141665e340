#include "glinv/pseudo_jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "glinv/rng.hpp"

namespace glinv {

namespace {

void require_same_shape(const LinearMap& a, const LinearMap& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.domain_norm() != b.domain_norm() ||
      a.codomain_norm() != b.codomain_norm())
    throw MalformedInput("pseudo-Jacobian members must share shape and norm tags");
}

}  // namespace

PseudoJacobian PseudoJacobian::singleton(LinearMap op) {
  return PseudoJacobian(SingletonForm{std::move(op)});
}

PseudoJacobian PseudoJacobian::ball(LinearMap center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw MalformedInput("ball radius must be >= 0");
  return PseudoJacobian(BallForm{std::move(center), radius});
}

PseudoJacobian PseudoJacobian::hull(std::vector<LinearMap> ops) {
  if (ops.empty()) throw MalformedInput("hull form needs at least one operator");
  for (const auto& op : ops) require_same_shape(ops.front(), op);
  return PseudoJacobian(HullForm{std::move(ops)});
}

PseudoJacobian::Kind PseudoJacobian::kind() const {
  if (std::holds_alternative<SingletonForm>(v_)) return Kind::Singleton;
  if (std::holds_alternative<BallForm>(v_)) return Kind::Ball;
  return Kind::Hull;
}

namespace {
const LinearMap& representative(const PseudoJacobian& pj) {
  switch (pj.kind()) {
    case PseudoJacobian::Kind::Singleton:
      return pj.as_singleton().op;
    case PseudoJacobian::Kind::Ball:
      return pj.as_ball().center;
    case PseudoJacobian::Kind::Hull:
      return pj.as_hull().ops.front();
  }
  return pj.as_singleton().op;
}
}  // namespace

int PseudoJacobian::rows() const { return representative(*this).rows(); }
int PseudoJacobian::cols() const { return representative(*this).cols(); }
const NormTag& PseudoJacobian::domain_norm() const { return representative(*this).domain_norm(); }
const NormTag& PseudoJacobian::codomain_norm() const { return representative(*this).codomain_norm(); }

Eigen::VectorXd PointMap::eval(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out = f(x);
  if (!out.allFinite()) throw EvaluationFailure("f produced NaN/Inf");
  return out;
}

// ---------------------------------------------------------------------------
// pj_validate

ValidationReport pj_validate(const PointMap& map, const Eigen::VectorXd& x, int n_dirs, int n_duals,
                             const std::vector<double>& h_steps, std::uint64_t seed) {
  if (n_dirs < 1 || n_duals < 1) throw MalformedInput("pj_validate: need n_dirs, n_duals >= 1");
  if (h_steps.empty() || !(h_steps.back() > 0.0))
    throw MalformedInput("pj_validate: h_steps must be nonempty and positive");
  for (std::size_t i = 0; i + 1 < h_steps.size(); ++i)
    if (!(h_steps[i] > h_steps[i + 1]))
      throw MalformedInput("pj_validate: h_steps must be decreasing");

  const PseudoJacobian pj = map.jf(x);
  const Eigen::VectorXd fx = map.eval(x);
  Rng rng(seed);

  ValidationReport rep;
  rep.tolerance = 1e-6;
  rep.worst_margin = -std::numeric_limits<double>::infinity();

  for (int i = 0; i < n_dirs; ++i) {
    Eigen::VectorXd v = rng.normal_vec(map.domain_dim);
    const double nv = norm_of(v, map.domain_norm);
    if (nv < 1e-300) continue;
    v /= nv;

    std::vector<Eigen::VectorXd> diffs;
    diffs.reserve(h_steps.size());
    for (double h : h_steps) diffs.push_back(map.eval(x + h * v) - fx);

    // Precompute Jf-images of v.
    Eigen::VectorXd av;
    std::vector<Eigen::VectorXd> hull_images;
    double ball_term = 0.0;
    switch (pj.kind()) {
      case PseudoJacobian::Kind::Singleton:
        av = pj.as_singleton().op.matrix() * v;
        break;
      case PseudoJacobian::Kind::Ball:
        av = pj.as_ball().center.matrix() * v;
        ball_term = pj.as_ball().radius * norm_of(v, map.domain_norm);
        break;
      case PseudoJacobian::Kind::Hull:
        for (const auto& op : pj.as_hull().ops) hull_images.push_back(op.matrix() * v);
        break;
    }

    for (int j = 0; j < n_duals; ++j) {
      Eigen::VectorXd ystar = rng.normal_vec(map.codomain_dim);
      const double ny = dual_norm_of(ystar, map.codomain_norm);
      if (ny < 1e-300) continue;
      ystar /= ny;

      double dini = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < h_steps.size(); ++k)
        dini = std::max(dini, ystar.dot(diffs[k]) / h_steps[k]);

      double support = 0.0;
      switch (pj.kind()) {
        case PseudoJacobian::Kind::Singleton:
          support = ystar.dot(av);
          break;
        case PseudoJacobian::Kind::Ball:
          support = ystar.dot(av) + ball_term * dual_norm_of(ystar, map.codomain_norm);
          break;
        case PseudoJacobian::Kind::Hull: {
          support = -std::numeric_limits<double>::infinity();
          for (const auto& tv : hull_images) support = std::max(support, ystar.dot(tv));
          break;
        }
      }

      const double margin = dini - support;
      ++rep.pairs_checked;
      if (margin > rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_direction = v;
        rep.worst_dual = ystar;
      }
    }
  }

  rep.pass = rep.worst_margin <= rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// pj_hull_sample

HullSample pj_hull_sample(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x, double radius, int n_samples, double fd_step,
                          std::uint64_t seed, const NormTag& domain_tag, const NormTag& codomain_tag) {
  const int n = static_cast<int>(x.size());
  if (n_samples < n + 1) throw MalformedInput("pj_hull_sample: need n_samples >= n+1");
  if (!(radius > 0.0) || !(fd_step > 0.0)) throw MalformedInput("pj_hull_sample: radius, fd_step > 0");

  Rng rng(seed);
  auto eval = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd out = f(z);
    if (!out.allFinite()) throw EvaluationFailure("f produced NaN/Inf");
    return out;
  };
  const int m = static_cast<int>(eval(x).size());

  std::vector<LinearMap> ops;
  ops.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    const Eigen::VectorXd z = x + rng.in_ball(n, radius);
    Eigen::MatrixXd J(m, n);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[j] = fd_step;
      J.col(j) = (eval(z + e) - eval(z - e)) / (2.0 * fd_step);
    }
    ops.emplace_back(std::move(J), domain_tag, codomain_tag);
  }

  PseudoJacobian hull = PseudoJacobian::hull(std::move(ops));
  PointMap probe;
  probe.f = f;
  probe.jf = [hull](const Eigen::VectorXd&) { return hull; };
  probe.domain_dim = n;
  probe.codomain_dim = m;
  probe.domain_norm = domain_tag;
  probe.codomain_norm = codomain_tag;
  // Small steps only: the hull certifies limiting quotients, and larger h
  // picks up curvature of smooth maps that no Jacobian set accounts for.
  ValidationReport check = pj_validate(probe, x, 16, 8, {1e-5, 1e-6, 1e-7}, seed ^ 0x9e3779b97f4a7c15ULL);
  return HullSample{std::move(hull), std::move(check)};
}

// ---------------------------------------------------------------------------
// delta_Fy and slice geometry

DualSlice delta_Fy(const PseudoJacobian& pj, const Eigen::VectorXd& fx, const Eigen::VectorXd& y,
                   const NormTag& codomain_tag) {
  const Eigen::VectorXd r = fx - y;
  if (norm_of(r, codomain_tag) == 0.0) throw CoincidentTarget();
  const Eigen::VectorXd ystar = dual_vector(r, codomain_tag);

  DualSlice slice;
  slice.kind = pj.kind();
  slice.domain_tag = pj.domain_norm();
  switch (pj.kind()) {
    case PseudoJacobian::Kind::Singleton:
      slice.vectors.push_back(pj.as_singleton().op.matrix().transpose() * ystar);
      break;
    case PseudoJacobian::Kind::Ball: {
      // The image {R* y* : ||R|| <= L} is the full dual ball of radius L for
      // unit y*; this transport needs euclidean tags on both sides.
      if (!pj.as_ball().center.euclidean_pair())
        throw UnsupportedNorm("ball-form dual transport needs euclidean tag pairs");
      slice.vectors.push_back(pj.as_ball().center.matrix().transpose() * ystar);
      slice.radius = pj.as_ball().radius;
      break;
    }
    case PseudoJacobian::Kind::Hull:
      for (const auto& op : pj.as_hull().ops) slice.vectors.push_back(op.matrix().transpose() * ystar);
      break;
  }
  return slice;
}

SliceMin slice_min_norm(const DualSlice& slice) {
  const NormTag dual_tag = dual(slice.domain_tag);
  switch (slice.kind) {
    case PseudoJacobian::Kind::Singleton: {
      return SliceMin{slice.vectors[0], norm_of(slice.vectors[0], dual_tag)};
    }
    case PseudoJacobian::Kind::Ball: {
      const Eigen::VectorXd& c = slice.vectors[0];
      const double nc = norm_of(c, dual_tag);
      if (nc <= slice.radius) return SliceMin{Eigen::VectorXd::Zero(c.size()), 0.0};
      const double lam = nc - slice.radius;
      return SliceMin{c * (lam / nc), lam};
    }
    case PseudoJacobian::Kind::Hull: {
      MinNormResult mn = min_norm_point(slice.vectors, dual_tag);
      return SliceMin{mn.point, mn.norm};
    }
  }
  return SliceMin{};
}

double lambda_lower(const DualSlice& slice) { return slice_min_norm(slice).lambda; }

// ---------------------------------------------------------------------------
// Pointwise constants

namespace {

// Branch-and-bound minimization of C(.) or C*(.) over the convex hull of the
// generators: longest-edge bisection in barycentric coordinates with the
// 1-Lipschitz bound |C(A) - C(B)| <= ||A - B||.  Returns an upper bound of
// the true infimum (within ~1e-6 when the queue empties normally).
double hull_inf_constant(const std::vector<LinearMap>& ops, bool dual_constant) {
  if (ops.size() > 6) throw MalformedInput("hull constants support at most 6 generators");
  const NormTag dom = ops.front().domain_norm();
  const NormTag cod = ops.front().codomain_norm();

  auto value_at = [&](const Eigen::MatrixXd& m) {
    const LinearMap lm(m, dom, cod);
    return dual_constant ? dual_banach_constant(lm).value : banach_constant(lm).value;
  };
  auto op_norm_ub = [&](const Eigen::MatrixXd& m) { return operator_norm(LinearMap(m, dom, cod)).value; };

  const int k = static_cast<int>(ops.size());
  if (k == 1) return value_at(ops[0].matrix());

  struct Node {
    std::vector<Eigen::MatrixXd> verts;
    double lb;  // centroid value minus simplex radius
  };
  struct NodeCmp {
    bool operator()(const Node& a, const Node& b) const { return a.lb > b.lb; }
  };

  double best = std::numeric_limits<double>::infinity();
  for (const auto& op : ops) best = std::min(best, value_at(op.matrix()));

  auto make_node = [&](std::vector<Eigen::MatrixXd> verts) {
    Eigen::MatrixXd centroid = verts[0];
    for (std::size_t i = 1; i < verts.size(); ++i) centroid += verts[i];
    centroid /= static_cast<double>(verts.size());
    const double cv = value_at(centroid);
    best = std::min(best, cv);
    double radius = 0.0;
    for (const auto& v : verts) radius = std::max(radius, op_norm_ub(v - centroid));
    return Node{std::move(verts), cv - radius};
  };

  const double tol = 1e-7;
  std::priority_queue<Node, std::vector<Node>, NodeCmp> queue;
  {
    std::vector<Eigen::MatrixXd> verts;
    for (const auto& op : ops) verts.push_back(op.matrix());
    queue.push(make_node(std::move(verts)));
  }

  int evals = 0;
  const int eval_cap = 20000;
  while (!queue.empty() && evals < eval_cap) {
    Node node = queue.top();
    queue.pop();
    if (node.lb >= best - tol) continue;
    // Split the longest edge at its midpoint.
    std::size_t ea = 0, eb = 1;
    double emax = -1.0;
    for (std::size_t a = 0; a < node.verts.size(); ++a)
      for (std::size_t b = a + 1; b < node.verts.size(); ++b) {
        const double d = op_norm_ub(node.verts[a] - node.verts[b]);
        if (d > emax) {
          emax = d;
          ea = a;
          eb = b;
        }
      }
    if (emax < tol) continue;
    const Eigen::MatrixXd mid = 0.5 * (node.verts[ea] + node.verts[eb]);
    for (std::size_t which : {ea, eb}) {
      std::vector<Eigen::MatrixXd> verts = node.verts;
      verts[which] = mid;
      Node child = make_node(std::move(verts));
      ++evals;
      if (child.lb < best - tol) queue.push(std::move(child));
    }
  }
  return best;
}

}  // namespace

PointConstant sur_at(const PseudoJacobian& pj) {
  switch (pj.kind()) {
    case PseudoJacobian::Kind::Singleton: {
      const ConstantBound c = banach_constant(pj.as_singleton().op);
      return PointConstant{c.value, c.exact ? Certainty::Exact : Certainty::LowerBound};
    }
    case PseudoJacobian::Kind::Ball: {
      const BallForm& b = pj.as_ball();
      if (!b.center.euclidean_pair())
        throw UnsupportedNorm("ball-form constants need euclidean tag pairs");
      const double c = banach_constant(b.center).value;
      return PointConstant{std::max(c - b.radius, 0.0), Certainty::Exact};
    }
    case PseudoJacobian::Kind::Hull: {
      const double v = hull_inf_constant(pj.as_hull().ops, /*dual_constant=*/false);
      return PointConstant{v, Certainty::UpperBound};
    }
  }
  return PointConstant{};
}

PointConstant inj_at(const PseudoJacobian& pj) {
  switch (pj.kind()) {
    case PseudoJacobian::Kind::Singleton: {
      const ConstantBound c = dual_banach_constant(pj.as_singleton().op);
      return PointConstant{c.value, c.exact ? Certainty::Exact : Certainty::LowerBound};
    }
    case PseudoJacobian::Kind::Ball: {
      const BallForm& b = pj.as_ball();
      if (!b.center.euclidean_pair())
        throw UnsupportedNorm("ball-form constants need euclidean tag pairs");
      const double c = dual_banach_constant(b.center).value;
      return PointConstant{std::max(c - b.radius, 0.0), Certainty::Exact};
    }
    case PseudoJacobian::Kind::Hull: {
      const double v = hull_inf_constant(pj.as_hull().ops, /*dual_constant=*/true);
      return PointConstant{v, Certainty::UpperBound};
    }
  }
  return PointConstant{};
}

RegularityIndex reg_at(const PseudoJacobian& pj) {
  if (pj.rows() != pj.cols()) throw NotSquare();
  const PointConstant s = sur_at(pj);
  const PointConstant i = inj_at(pj);
  RegularityIndex reg;
  reg.value = std::min(s.value, i.value);
  if (s.certainty == Certainty::Exact && i.certainty == Certainty::Exact)
    reg.certainty = Certainty::Exact;
  else if (s.certainty == Certainty::LowerBound && i.certainty == Certainty::LowerBound)
    reg.certainty = Certainty::LowerBound;
  else
    reg.certainty = Certainty::UpperBound;

  bool iso = reg.value > 0.0;
  switch (pj.kind()) {
    case PseudoJacobian::Kind::Singleton:
      iso = iso && pj.as_singleton().op.full_rank();
      break;
    case PseudoJacobian::Kind::Ball:
      // every member is invertible iff the radius stays below sigma_min
      iso = iso && dual_banach_constant(pj.as_ball().center).value > pj.as_ball().radius;
      break;
    case PseudoJacobian::Kind::Hull:
      for (const auto& op : pj.as_hull().ops) iso = iso && op.full_rank();
      break;
  }
  reg.isomorphism_candidate = iso;
  return reg;
}

SampledValue sur_estimate(const PointMap& map, const Eigen::VectorXd& x,
                          const std::vector<double>& radii, int n_pts, std::uint64_t seed) {
  if (radii.empty()) throw MalformedInput("sur_estimate: empty radius schedule");
  Rng rng(seed);
  double best = 0.0;
  for (double r : radii) {
    double shell_min = sur_at(map.jf(x)).value;
    for (int i = 0; i < n_pts; ++i) {
      const Eigen::VectorXd z = x + rng.in_norm_ball(map.domain_norm, map.domain_dim, r);
      shell_min = std::min(shell_min, sur_at(map.jf(z)).value);
    }
    best = std::max(best, shell_min);
  }
  return SampledValue{best};
}

double segment_injectivity_modulus(const PointMap& map, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& w, int n_samples) {
  if (norm_of(u - w, map.domain_norm) == 0.0) throw DegenerateSegment();
  n_samples = std::max(n_samples, 2);
  double alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double t = static_cast<double>(i) / (n_samples - 1);
    const Eigen::VectorXd z = u + t * (w - u);
    alpha = std::min(alpha, inj_at(map.jf(z)).value);
  }
  return alpha;
}

}  // namespace glinv
