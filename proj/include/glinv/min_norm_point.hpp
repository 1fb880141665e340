// Wolfe's minimum-norm-point algorithm over the convex hull of a finite
// point set.

#pragma once

#include <Eigen/Core>
#include <vector>

#include "glinv/norms.hpp"

namespace glinv {

struct MinNormResult {
  Eigen::VectorXd point;  // euclidean argmin over the hull
  double norm = 0.0;      // ||point|| measured in the given tag
  int iterations = 0;
};

// Returns the point of minimum norm in conv(points) together with its norm.
// Supported tags are the euclidean ones (L2, Lp with p = 2): scaling does not
// move the argmin, so the scaled value is exact.  On return the optimality
// certificate <w, p> >= |w|_2^2 - 1e-9 holds for every input point p; if it
// cannot be met within the iteration cap, NonConvergence is thrown.
MinNormResult min_norm_point(const std::vector<Eigen::VectorXd>& points, const NormTag& tag);

}  // namespace glinv
