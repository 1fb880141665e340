// Pseudo-Jacobian representations, validation of the defining directional
// inequality, transported dual slices, and the pointwise surjection /
// injectivity / regularity constants.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "glinv/linear_map.hpp"
#include "glinv/min_norm_point.hpp"

namespace glinv {

struct SingletonForm {
  LinearMap op;
};

// Center operator plus an operator-norm ball of radius `radius` around it.
struct BallForm {
  LinearMap center;
  double radius = 0.0;
};

// Convex hull of finitely many operators.
struct HullForm {
  std::vector<LinearMap> ops;
};

// One of Singleton / Ball / Hull.  All member operators share dimensions and
// norm tags; the ball radius is measured in the induced operator norm.
class PseudoJacobian {
 public:
  enum class Kind { Singleton, Ball, Hull };

  static PseudoJacobian singleton(LinearMap op);
  static PseudoJacobian ball(LinearMap center, double radius);
  static PseudoJacobian hull(std::vector<LinearMap> ops);

  Kind kind() const;
  const SingletonForm& as_singleton() const { return std::get<SingletonForm>(v_); }
  const BallForm& as_ball() const { return std::get<BallForm>(v_); }
  const HullForm& as_hull() const { return std::get<HullForm>(v_); }

  int rows() const;
  int cols() const;
  const NormTag& domain_norm() const;
  const NormTag& codomain_norm() const;

 private:
  explicit PseudoJacobian(std::variant<SingletonForm, BallForm, HullForm> v) : v_(std::move(v)) {}
  std::variant<SingletonForm, BallForm, HullForm> v_;
};

// Whether the declared pseudo-Jacobian map is asserted to satisfy the plain
// or the strong chain rule condition.  A declared contract: spot-checked by
// pj_validate, not proven.
enum class ChainRule { Plain, Strong };

// A map together with its pseudo-Jacobian assignment and norm tags.
// Callbacks must be reentrant; evaluation failures surface as exceptions.
struct PointMap {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
  std::function<PseudoJacobian(const Eigen::VectorXd&)> jf;
  int domain_dim = 0;
  int codomain_dim = 0;
  NormTag domain_norm = NormTag::l2();
  NormTag codomain_norm = NormTag::l2();
  ChainRule chain_rule = ChainRule::Plain;

  // Calls f and checks the result for NaN/Inf.
  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
};

// The transported set dual_vector(f(x)-y) o co(Jf(x)) in the domain's dual.
// Singleton: one vector.  Hull: finitely many vectors.  Ball: center vector
// plus a dual-norm ball of radius `radius`.
struct DualSlice {
  PseudoJacobian::Kind kind = PseudoJacobian::Kind::Singleton;
  std::vector<Eigen::VectorXd> vectors;
  double radius = 0.0;
  NormTag domain_tag = NormTag::l2();
};

struct ValidationReport {
  bool pass = false;
  double worst_margin = 0.0;  // Dini quotient minus support-function bound
  int pairs_checked = 0;
  double tolerance = 1e-6;
  Eigen::VectorXd worst_direction;
  Eigen::VectorXd worst_dual;
};

// Samples unit directions v and unit dual vectors y*, estimates the upper
// Dini derivative of y* o f at x along v by the max forward quotient over
// h_steps, and compares against the support function of Jf(x).  Passes iff
// every sampled margin is <= 1e-6.
ValidationReport pj_validate(const PointMap& map, const Eigen::VectorXd& x, int n_dirs, int n_duals,
                             const std::vector<double>& h_steps, std::uint64_t seed);

struct HullSample {
  PseudoJacobian hull;
  ValidationReport check;  // pj_validate report for the sampled hull
};

// Gradient-sampling candidate for a Clarke-type Jacobian hull: central
// difference Jacobians at seeded points of B(x; radius).  An outer
// approximation candidate only; the attached report re-checks it.
HullSample pj_hull_sample(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x, double radius, int n_samples, double fd_step,
                          std::uint64_t seed, const NormTag& domain_tag = NormTag::l2(),
                          const NormTag& codomain_tag = NormTag::l2());

// Builds the dual slice at a point with f(x) = fx and target y != fx.
DualSlice delta_Fy(const PseudoJacobian& pj, const Eigen::VectorXd& fx, const Eigen::VectorXd& y,
                   const NormTag& codomain_tag);

// Min-norm element of a dual slice (euclidean representative) and its
// dual-norm value.
struct SliceMin {
  Eigen::VectorXd w;
  double lambda = 0.0;
};
SliceMin slice_min_norm(const DualSlice& slice);

// Dual-norm distance from 0 to the slice.  A lower bound for the criticality
// functional when the owning map declares the strong chain rule; otherwise a
// heuristic surrogate.
double lambda_lower(const DualSlice& slice);

enum class Certainty { Exact, LowerBound, UpperBound, Sampled };

struct PointConstant {
  double value = 0.0;
  Certainty certainty = Certainty::Exact;
};

// Pointwise constants over co Jf(x) (single-point set; radius schedules are
// the caller's job, see sur_estimate).  Ball forms require euclidean tag
// pairs and are exact: max(C(A) - L, 0).  Hull forms are minimized by
// branch-and-bound subdivision and flagged as upper bounds of the true inf.
PointConstant sur_at(const PseudoJacobian& pj);
PointConstant inj_at(const PseudoJacobian& pj);

struct RegularityIndex {
  double value = 0.0;
  Certainty certainty = Certainty::Exact;
  bool isomorphism_candidate = false;
};

// min(sur_at, inj_at) with a square/full-rank check.  Throws NotSquare on
// non-square members.
RegularityIndex reg_at(const PseudoJacobian& pj);

struct SampledValue {
  double value = 0.0;  // caveat: sampled, not certified
};

// max over the radius schedule of (min over sampled points of B(x;r) of
// sur_at).  The schedule realizes the sup over r in the definition of the
// surjection constant near x.
SampledValue sur_estimate(const PointMap& map, const Eigen::VectorXd& x,
                          const std::vector<double>& radii, int n_pts, std::uint64_t seed);

// min over equispaced segment points z of inj_at(jf(z)).  A positive value
// alpha certifies |f(u)-f(w)| >= (alpha - sampling slack) |u-w| along the
// sampled density.
double segment_injectivity_modulus(const PointMap& map, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& w, int n_samples);

}  // namespace glinv
