// Radial profiles: sampled or analytic nonincreasing functions of the norm
// radius, their lower-semicontinuous envelopes and cumulative integrals.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glinv/errors.hpp"

namespace glinv {

// Closed-form profile families with known integrals and divergence behavior.
struct AnalyticProfile {
  enum class Family { Constant, COver1pRho, COver1pRhoPowS };
  Family family = Family::Constant;
  double c = 1.0;
  double s = 1.0;  // exponent, COver1pRhoPowS only

  double value(double rho) const;
  double integral(double r) const;  // integral over [0, r]
  bool divergent() const;
};

// A radial grid 0 = rho_0 < rho_1 < ... with one sample per grid point.
// When `analytic` is set the samples are a materialization of the closed
// form and closed-form arithmetic is used everywhere.
struct RadialProfile {
  std::vector<double> grid;
  std::vector<double> values;
  std::optional<AnalyticProfile> analytic;

  bool sampled() const { return !analytic.has_value(); }
  bool nonincreasing(double rel_slack = 1e-12) const;

  // Linear interpolation on the grid (closed form when analytic).  Throws
  // OutOfRange beyond the grid for sampled profiles.
  double value_at(double rho) const;

  // The smaller of the two bracketing grid values: a sound stand-in when the
  // result feeds a 1/m-style bound.  Closed form when analytic.
  double floor_value_at(double rho) const;

  static RadialProfile from_analytic(const AnalyticProfile& a, const std::vector<double>& grid);
  static RadialProfile from_samples(std::vector<double> grid, std::vector<double> values);

  // Default reporting grid: 0 plus geometric points up to r_max.
  static std::vector<double> default_grid(double r_max, int points = 64);
};

// Envelope with the right-limit rule at detected jumps (relative drop
// > 1e-9): m(rho_k) := mu(rho_{k+1}) there, m = mu elsewhere.  Guarantees
// m <= mu pointwise and m nonincreasing.
RadialProfile lsc_envelope(const RadialProfile& mu);

struct IntegralResult {
  double value = 0.0;
  double quad_error = 0.0;  // h^2-based trapezoid estimate; 0 for closed forms
};

// Cumulative integral of the profile over [0, r]: trapezoid for sampled
// profiles (OutOfRange beyond the grid), closed form for analytic families.
IntegralResult rho_integral(const RadialProfile& m, double r);

}  // namespace glinv
