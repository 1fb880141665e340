#include "glinv/min_norm_point.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace glinv {

namespace {

// Min-norm point of the affine hull of the active columns: solve
//   [ G  1 ] [alpha]   [0]        G = P^T P
//   [ 1' 0 ] [ nu  ] = [1]
// for barycentric coordinates alpha.
Eigen::VectorXd affine_min_norm(const Eigen::MatrixXd& P) {
  const Eigen::Index k = P.cols();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = P.transpose() * P;
  kkt.topRightCorner(k, 1).setOnes();
  kkt.bottomLeftCorner(1, k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  // Complete orthogonal decomposition tolerates the rank-deficient corrals
  // that show up with affinely dependent inputs.
  Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

}  // namespace

MinNormResult min_norm_point(const std::vector<Eigen::VectorXd>& points, const NormTag& tag) {
  if (points.empty()) throw MalformedInput("min_norm_point: empty point set");
  if (!tag.euclidean()) throw UnsupportedNorm(to_string(tag) + " (min-norm point needs euclidean geometry)");
  const Eigen::Index dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw MalformedInput("min_norm_point: mixed dimensions");

  const int n = static_cast<int>(points.size());
  double scale2 = 0.0;
  for (const auto& p : points) scale2 = std::max(scale2, p.squaredNorm());

  // Seed with the shortest input point.
  int best0 = 0;
  for (int j = 1; j < n; ++j)
    if (points[j].squaredNorm() < points[best0].squaredNorm()) best0 = j;

  std::vector<int> active{best0};
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd w = points[best0];

  const double tol_major = 1e-10 * std::max(1.0, scale2);
  const double drop_tol = 1e-12;
  const int cap = 100 * (n + static_cast<int>(dim)) + 1000;
  int iter = 0;

  auto gather = [&](const std::vector<int>& idx) {
    Eigen::MatrixXd P(dim, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) P.col(static_cast<Eigen::Index>(c)) = points[idx[c]];
    return P;
  };

  for (; iter < cap; ++iter) {
    // Major cycle: most violating vertex.
    int jmin = 0;
    double dmin = w.dot(points[0]);
    for (int j = 1; j < n; ++j) {
      const double d = w.dot(points[j]);
      if (d < dmin) {
        dmin = d;
        jmin = j;
      }
    }
    if (dmin >= w.squaredNorm() - tol_major) break;
    if (std::find(active.begin(), active.end(), jmin) != active.end()) break;  // numerical stall

    active.push_back(jmin);
    Eigen::VectorXd lam2(lambda.size() + 1);
    lam2 << lambda, 0.0;
    lambda = lam2;

    // Minor cycles: pull w to the min-norm point of the active simplex.
    for (;;) {
      const Eigen::MatrixXd P = gather(active);
      Eigen::VectorXd alpha = affine_min_norm(P);
      if ((alpha.array() >= -drop_tol).all()) {
        lambda = alpha.cwiseMax(0.0);
        const double s = lambda.sum();
        if (s > 0.0) lambda /= s;
        w = P * lambda;
        break;
      }
      // Step toward alpha until a coordinate hits zero, then drop it.
      double theta = 1.0;
      for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (alpha[i] < drop_tol) {
          const double denom = lambda[i] - alpha[i];
          if (denom > 0.0) theta = std::min(theta, lambda[i] / denom);
        }
      }
      lambda = (1.0 - theta) * lambda + theta * alpha;
      std::vector<int> keep_idx;
      std::vector<double> keep_lam;
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] > drop_tol) {
          keep_idx.push_back(active[static_cast<std::size_t>(i)]);
          keep_lam.push_back(lambda[i]);
        }
      }
      if (keep_idx.empty()) {  // degenerate; keep the heaviest vertex
        Eigen::Index imax = 0;
        lambda.maxCoeff(&imax);
        keep_idx.push_back(active[static_cast<std::size_t>(imax)]);
        keep_lam.push_back(1.0);
      }
      active = keep_idx;
      lambda = Eigen::Map<Eigen::VectorXd>(keep_lam.data(), static_cast<Eigen::Index>(keep_lam.size()));
      const double s = lambda.sum();
      if (s > 0.0) lambda /= s;
      w = gather(active) * lambda;
    }
  }

  // Optimality certificate for the returned point.
  const double w2 = w.squaredNorm();
  for (const auto& p : points) {
    if (w.dot(p) < w2 - 1e-9)
      throw NonConvergence("min_norm_point certificate failed (degenerate input scaling?)");
  }

  const double value = tag.euclidean_scale() * w.norm();
  return MinNormResult{w, value, iter};
}

}  // namespace glinv
