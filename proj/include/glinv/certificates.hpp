// Hadamard-type surjection certificates: the sampled radial infimum of the
// surjection constant, its envelope, the cumulative surjection radius, the
// divergence verdict, a-priori solution radii, the derived weight, and
// inverse Lipschitz bounds.

#pragma once

#include <cstdint>
#include <functional>

#include "glinv/pseudo_jacobian.hpp"
#include "glinv/radial.hpp"

namespace glinv {

enum class Verdict { DivergentCertified, DivergentEmpirical, Inconclusive, Fails };

std::string to_string(Verdict v);

struct HadamardCertificate {
  RadialProfile mu;        // raw radial infimum (equals m for analytic sources)
  RadialProfile m;         // lsc envelope
  std::vector<double> rho; // cumulative integral of m at the grid points
  Verdict verdict = Verdict::Inconclusive;
  double m0 = 0.0;

  bool divergent() const {
    return verdict == Verdict::DivergentCertified || verdict == Verdict::DivergentEmpirical;
  }
};

// Radial infimum profile: for each grid radius, the min of sur_at(jf(x))
// over seeded samples of the norm ball, forced nonincreasing by a running
// min.  Sampling caps the dimension at 20.
RadialProfile mu_profile(const PointMap& map, const std::vector<double>& grid, int n_pts_per_shell,
                         std::uint64_t seed);

// Divergence verdict.  Analytic families are decided in closed form
// (certified); sampled profiles get a log-log tail fit: slope >= -0.95 with
// positive values reads as empirically divergent, steeper decay is
// inconclusive, a zero value fails.
Verdict hadamard_verdict(const RadialProfile& m);

HadamardCertificate make_certificate(const RadialProfile& mu);

// Smallest r with rho(r) >= gap.  Bisection to 1e-9 for analytic profiles,
// first adequate grid point for sampled ones (Unreachable when the grid's
// integral never reaches the gap).  Requires a divergent verdict.
double a_priori_radius(const HadamardCertificate& cert, double gap);

// The weight h(rho) = m(0)/m(rho) - 1: h(0) = 0, nondecreasing, and
// m(rho) (1 + h(rho)) = m(0) on the grid.  Since 1/(1+h) = m/m(0), the
// weight integral diverges exactly when the certificate's does, so the
// weight property is inherited from the verdict.  Throws NotAWeight when m
// has a zero.  Continuity is the caller's declaration (analytic families or
// jump-free sampled profiles).
struct Weight {
  std::function<double(double)> h;
};
Weight weight_from_m(const RadialProfile& m);

// 1/m(|x|) with the sound (smaller-m) grid selection on sampled profiles.
double inverse_lipschitz_bound(const RadialProfile& m, double x_norm);

}  // namespace glinv
