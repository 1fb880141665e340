#include "glinv/linear_map.hpp"

#include <Eigen/SVD>

namespace glinv {

namespace {
constexpr double kSvRelFloor = 1e-12;
}

LinearMap::LinearMap(Eigen::MatrixXd matrix, NormTag domain, NormTag codomain)
    : mat_(std::make_shared<const Eigen::MatrixXd>(std::move(matrix))),
      dom_(domain),
      cod_(codomain),
      cache_(std::make_shared<SvCache>()) {
  if (mat_->size() == 0) throw MalformedInput("LinearMap: empty matrix");
  if (!mat_->allFinite()) throw MalformedInput("LinearMap: non-finite entries");
}

const Eigen::VectorXd& LinearMap::singular_values() const {
  std::call_once(cache_->once, [this] {
    const auto& m = *mat_;
    if (std::min(m.rows(), m.cols()) > 16) {
      Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
      cache_->sv = svd.singularValues();
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      cache_->sv = svd.singularValues();
    }
  });
  return cache_->sv;
}

double LinearMap::sigma_max() const {
  const auto& sv = singular_values();
  return sv.size() ? sv[0] : 0.0;
}

double LinearMap::sigma_row() const {
  if (rows() > cols()) return 0.0;
  const auto& sv = singular_values();
  const double s = sv[rows() - 1];
  return s < kSvRelFloor * sv[0] ? 0.0 : s;
}

double LinearMap::sigma_col() const {
  if (cols() > rows()) return 0.0;
  const auto& sv = singular_values();
  const double s = sv[cols() - 1];
  return s < kSvRelFloor * sv[0] ? 0.0 : s;
}

bool LinearMap::full_rank() const {
  const auto& sv = singular_values();
  return sv[sv.size() - 1] >= kSvRelFloor * sv[0] && sv[sv.size() - 1] > 0.0;
}

namespace {

// Shared factor (c_lo of codomain)/(c_hi of domain): multiplies singular
// values into lower bounds for C and C*, exact when both tags are euclidean.
double lower_factor(const LinearMap& T) {
  const EuclidSandwich d = euclid_bounds(T.domain_norm(), T.cols());
  const EuclidSandwich c = euclid_bounds(T.codomain_norm(), T.rows());
  return c.lo / d.hi;
}

}  // namespace

ConstantBound banach_constant(const LinearMap& T) {
  return {lower_factor(T) * T.sigma_row(), T.euclidean_pair()};
}

ConstantBound dual_banach_constant(const LinearMap& T) {
  return {lower_factor(T) * T.sigma_col(), T.euclidean_pair()};
}

ConstantBound operator_norm(const LinearMap& T) {
  const EuclidSandwich d = euclid_bounds(T.domain_norm(), T.cols());
  const EuclidSandwich c = euclid_bounds(T.codomain_norm(), T.rows());
  return {(c.hi / d.lo) * T.sigma_max(), T.euclidean_pair()};
}

}  // namespace glinv
