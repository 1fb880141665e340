// Descent on the residual functional x -> ||f(x) - y|| along min-norm
// elements of the transported dual slice, with Palais-Smale product
// monitoring, multistart uniqueness certification, and a 2-D openness
// oracle.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glinv/certificates.hpp"
#include "glinv/pseudo_jacobian.hpp"

namespace glinv {

struct SolveOptions {
  double tol_residual = 1e-8;
  int max_iters = 10000;
  double armijo_c = 0.1;        // sufficient-decrease fraction, in (0,1)
  double backtrack = 0.5;       // step shrink factor, in (0,1)
  int max_backtracks = 50;
  double min_step = 1e-14;
  double escape_norm = 1e6;     // |x| beyond this counts as escape
  std::function<double(double)> weight;  // optional weight h(rho)
  std::uint64_t seed = 42;
};

enum class SolveStatus { Solved, CriticalNonsolution, PsEscape, IterationCap };

std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::IterationCap;
  Eigen::VectorXd x_final;
  std::vector<double> residual_trace;    // ||f(x_n) - y||, strictly decreasing
  std::vector<double> lambda_trace;      // dual-slice min-norm values
  std::vector<double> ps_product_trace;  // lambda_n (1 + h(|x_n|)), when a weight is known
  std::vector<double> norm_trace;        // |x_n| in the domain norm
  std::vector<Eigen::VectorXd> tail;     // last iterates, for PS classification
  std::optional<double> inv_lip_bound;
  int iterations = 0;
  std::vector<std::string> warnings;
};

struct DescentDirection {
  Eigen::VectorXd direction;  // unit vector in the domain norm
  double lambda = 0.0;        // dual-norm of the min-norm slice element
};

// Negated min-norm element of the dual slice at x, normalized in the domain
// norm.  Throws CoincidentTarget at a solution and CriticalPoint when the
// min-norm element vanishes below 1e-14.
DescentDirection descent_direction(const PointMap& map, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y);

// Armijo-backtracked descent from unit initial step.  When a certificate is
// given and the run solves, the inverse-Lipschitz bound at the solution is
// attached and the a-priori ball inclusion is checked (warning on
// violation).
SolveReport solve(const PointMap& map, const Eigen::VectorXd& y, const Eigen::VectorXd& x0,
                  const SolveOptions& opts = {}, const HadamardCertificate* cert = nullptr);

enum class PsClass { ConvergingPsSequence, BoundedNonconverging, Escaping };

std::string to_string(PsClass c);

// Diagnostic classification of a finished run's iterate trace under the
// given weight.  Requires at least 10 iterations.
PsClass ps_classify(const SolveReport& report, const std::function<double(double)>& weight);

struct UniquenessReport {
  enum class Verdict { UniqueEmpirical, NonUnique, NoSolutions };
  Verdict verdict = Verdict::NoSolutions;
  std::vector<Eigen::VectorXd> clusters;             // one representative each
  std::vector<std::pair<int, int>> inconsistencies;  // cluster pairs with positive modulus
  std::vector<double> probe_moduli;                  // segment moduli of random probe pairs
  int solved_runs = 0;
  double search_radius = 0.0;
};

std::string to_string(UniquenessReport::Verdict v);

// Multistart search for distinct solutions of f(x) = y inside the a-priori
// ball (from the certificate when present, otherwise derived from the known
// solutions).  Distinct solution clusters with a positive segment modulus
// between them are contradiction witnesses and are reported as
// inconsistencies.
UniquenessReport uniqueness_certificate(const PointMap& map, const Eigen::VectorXd& y,
                                        const std::vector<Eigen::VectorXd>& solutions, int n_starts,
                                        std::uint64_t seed, const SolveOptions& opts = {},
                                        const HadamardCertificate* cert = nullptr);

struct SquaredModeResult {
  bool ok = false;
  double deviation = 0.0;
};

// Checks the scaling identity between the residual functional and its
// squared variant: the min-norm value of the slice scaled by ||f(x)-y||
// equals ||f(x)-y|| times the plain min-norm value, within 1e-9.
SquaredModeResult squared_mode_check(const PointMap& map, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& y);

struct OpennessReport {
  bool pass = false;
  double worst_gap = 0.0;
  double threshold = 0.0;
  double dispersion = 0.0;
};

// Desk-scale check that B(f(x); 0.95 alpha r) is covered by f(B(x; r)) in
// dimension 2: image point cloud plus ball-restricted descent refinement
// toward ring targets.
//
// Background: the modulus of surjection S(f,x)(r) = sup{rho : B(f(x); rho)
// is covered by f(B(x; r))} and the derived surjection constant
// sur(f,x) = sup_eps inf_{0<r<eps} S(f,x)(r)/r dominate the exact covering
// rate, which in turn dominates the regularity index of any chain-rule
// pseudo-Jacobian:  sur(f,x) >= cov f(x) >= reg Jf(x).  The oracle probes
// that chain from below at a fixed radius; it does not estimate the two
// upper quantities.
OpennessReport openness_oracle_2d(const PointMap& map, const Eigen::VectorXd& x, double r,
                                  double alpha, int n_rays, int n_disk, std::uint64_t seed);

}  // namespace glinv
