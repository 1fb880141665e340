#include "glinv/radial.hpp"

#include <algorithm>
#include <cmath>

namespace glinv {

double AnalyticProfile::value(double rho) const {
  switch (family) {
    case Family::Constant:
      return c;
    case Family::COver1pRho:
      return c / (1.0 + rho);
    case Family::COver1pRhoPowS:
      return c / std::pow(1.0 + rho, s);
  }
  return 0.0;
}

double AnalyticProfile::integral(double r) const {
  if (r <= 0.0) return 0.0;
  switch (family) {
    case Family::Constant:
      return c * r;
    case Family::COver1pRho:
      return c * std::log1p(r);
    case Family::COver1pRhoPowS:
      if (s == 1.0) return c * std::log1p(r);
      return c * (std::pow(1.0 + r, 1.0 - s) - 1.0) / (1.0 - s);
  }
  return 0.0;
}

bool AnalyticProfile::divergent() const {
  if (!(c > 0.0)) return false;
  switch (family) {
    case Family::Constant:
    case Family::COver1pRho:
      return true;
    case Family::COver1pRhoPowS:
      return s <= 1.0;
  }
  return false;
}

bool RadialProfile::nonincreasing(double rel_slack) const {
  for (std::size_t k = 0; k + 1 < values.size(); ++k)
    if (values[k + 1] > values[k] * (1.0 + rel_slack) + rel_slack) return false;
  return true;
}

namespace {

void validate_grid(const std::vector<double>& grid, const std::vector<double>& values) {
  if (grid.empty() || grid.size() != values.size()) throw MalformedInput("profile: grid/value size mismatch");
  if (grid.front() != 0.0) throw MalformedInput("profile: grid must start at 0");
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    if (!(grid[k] < grid[k + 1])) throw MalformedInput("profile: grid must be strictly increasing");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw MalformedInput("profile: values must be finite and >= 0");
}

// Index of the grid interval containing rho, i.e. grid[k] <= rho <= grid[k+1].
std::size_t bracket(const std::vector<double>& grid, double rho) {
  const auto it = std::upper_bound(grid.begin(), grid.end(), rho);
  const std::size_t k = static_cast<std::size_t>(it - grid.begin());
  return (k == 0) ? 0 : k - 1;
}

}  // namespace

double RadialProfile::value_at(double rho) const {
  if (analytic) return analytic->value(rho);
  if (rho < 0.0 || rho > grid.back() * (1.0 + 1e-12))
    throw OutOfRange("radius beyond the sampled grid");
  rho = std::min(rho, grid.back());
  const std::size_t k = bracket(grid, rho);
  if (k + 1 >= grid.size()) return values.back();
  const double t = (rho - grid[k]) / (grid[k + 1] - grid[k]);
  return values[k] + t * (values[k + 1] - values[k]);
}

double RadialProfile::floor_value_at(double rho) const {
  if (analytic) return analytic->value(rho);
  if (rho < 0.0 || rho > grid.back() * (1.0 + 1e-12))
    throw OutOfRange("radius beyond the sampled grid");
  rho = std::min(rho, grid.back());
  const std::size_t k = bracket(grid, rho);
  if (rho == grid[k] || k + 1 >= grid.size()) return values[k];
  return std::min(values[k], values[k + 1]);
}

RadialProfile RadialProfile::from_analytic(const AnalyticProfile& a, const std::vector<double>& grid) {
  RadialProfile p;
  p.grid = grid;
  p.values.reserve(grid.size());
  for (double rho : grid) p.values.push_back(a.value(rho));
  p.analytic = a;
  validate_grid(p.grid, p.values);
  return p;
}

RadialProfile RadialProfile::from_samples(std::vector<double> grid, std::vector<double> values) {
  validate_grid(grid, values);
  RadialProfile p;
  p.grid = std::move(grid);
  p.values = std::move(values);
  return p;
}

std::vector<double> RadialProfile::default_grid(double r_max, int points) {
  if (!(r_max > 0.0) || points < 2) throw MalformedInput("default_grid: r_max > 0, points >= 2");
  std::vector<double> g;
  g.push_back(0.0);
  const double lo = r_max * 1e-3;
  const int k = points - 1;
  for (int i = 0; i < k; ++i) g.push_back(lo * std::pow(r_max / lo, static_cast<double>(i) / (k - 1)));
  return g;
}

RadialProfile lsc_envelope(const RadialProfile& mu) {
  if (!mu.nonincreasing(1e-9)) throw MalformedInput("lsc_envelope: profile must be nonincreasing");
  if (mu.analytic) return mu;  // continuous closed forms have no jumps
  RadialProfile m = mu;
  const std::size_t K = mu.values.size();
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double drop = mu.values[k] - mu.values[k + 1];
    if (drop > 1e-9 * std::max(mu.values[k], 1e-300)) m.values[k] = mu.values[k + 1];
  }
  // Right limits can only lower values, so monotonicity survives; clamp
  // against rounding anyway.
  for (std::size_t k = 0; k + 1 < K; ++k) m.values[k + 1] = std::min(m.values[k + 1], m.values[k]);
  return m;
}

IntegralResult rho_integral(const RadialProfile& m, double r) {
  if (r < 0.0) throw OutOfRange("negative radius");
  if (m.analytic) return IntegralResult{m.analytic->integral(r), 0.0};
  if (r > m.grid.back() * (1.0 + 1e-12)) throw OutOfRange("radius beyond the sampled grid");
  r = std::min(r, m.grid.back());

  double acc = 0.0;
  double err = 0.0;
  for (std::size_t k = 0; k + 1 < m.grid.size() && m.grid[k] < r; ++k) {
    const double a = m.grid[k];
    const double b = std::min(m.grid[k + 1], r);
    const double va = m.values[k];
    const double vb = m.value_at(b);
    const double h = b - a;
    acc += 0.5 * h * (va + vb);
    // h^2 curvature estimate from the neighboring second difference.
    if (k + 2 < m.grid.size()) {
      const double dd = std::abs(m.values[k + 2] - 2.0 * m.values[k + 1] + m.values[k]);
      err += h * h * dd / 12.0;
    }
  }
  return IntegralResult{acc, err};
}

}  // namespace glinv
