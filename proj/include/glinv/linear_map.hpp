// Dense linear operators between tagged-norm spaces, and their Banach
// constants C(T) = inf_{|v*|=1} |T* v*| and C*(T) = inf_{|u|=1} |T u|.

#pragma once

#include <Eigen/Core>
#include <memory>
#include <mutex>

#include "glinv/norms.hpp"

namespace glinv {

// Immutable dense operator.  Copies share the matrix storage and a lazily
// computed singular value cache, so repeated constant queries on the same
// operator cost one SVD total.
class LinearMap {
 public:
  LinearMap(Eigen::MatrixXd matrix, NormTag domain, NormTag codomain);

  const Eigen::MatrixXd& matrix() const { return *mat_; }
  int rows() const { return static_cast<int>(mat_->rows()); }
  int cols() const { return static_cast<int>(mat_->cols()); }
  const NormTag& domain_norm() const { return dom_; }
  const NormTag& codomain_norm() const { return cod_; }

  bool euclidean_pair() const { return dom_.euclidean() && cod_.euclidean(); }

  // Singular values in descending order (computed once, shared by copies).
  const Eigen::VectorXd& singular_values() const;

  // Largest / smallest-relevant singular values with the relative floor
  // applied: values below 1e-12 * sigma_max count as zero.
  double sigma_max() const;
  double sigma_row() const;  // m-th singular value; > 0 iff full row rank
  double sigma_col() const;  // n-th singular value; > 0 iff full column rank
  bool full_rank() const;

 private:
  std::shared_ptr<const Eigen::MatrixXd> mat_;
  NormTag dom_, cod_;
  struct SvCache {
    std::once_flag once;
    Eigen::VectorXd sv;
  };
  std::shared_ptr<SvCache> cache_;
};

// A computed constant together with its exactness: exact for euclidean tag
// pairs, otherwise a one-sided certified bound from norm equivalence.
struct ConstantBound {
  double value = 0.0;
  bool exact = false;
};

// C(T): positive iff T is onto.  Exact (scaled smallest row singular value)
// for euclidean pairs, certified lower bound otherwise.
ConstantBound banach_constant(const LinearMap& T);

// C*(T), the co-norm: positive iff T is bounded below (one-to-one).  Exact
// for euclidean pairs, certified lower bound otherwise.
ConstantBound dual_banach_constant(const LinearMap& T);

// Induced operator norm.  Exact for euclidean pairs, certified upper bound
// otherwise.
ConstantBound operator_norm(const LinearMap& T);

}  // namespace glinv
