#include "glinv/certificates.hpp"

#include <algorithm>
#include <cmath>

#include "glinv/rng.hpp"

namespace glinv {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::DivergentCertified:
      return "divergent_certified";
    case Verdict::DivergentEmpirical:
      return "divergent_empirical";
    case Verdict::Inconclusive:
      return "inconclusive";
    case Verdict::Fails:
      return "fails";
  }
  return "?";
}

RadialProfile mu_profile(const PointMap& map, const std::vector<double>& grid, int n_pts_per_shell,
                         std::uint64_t seed) {
  constexpr int kDimCap = 20;
  if (map.domain_dim > kDimCap) throw DimensionTooLarge(map.domain_dim, kDimCap);
  Rng rng(seed);

  std::vector<double> values;
  values.reserve(grid.size());
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(map.domain_dim);
  for (double rho : grid) {
    double v = sur_at(map.jf(origin)).value;
    if (rho > 0.0) {
      for (int i = 0; i < n_pts_per_shell; ++i) {
        const Eigen::VectorXd x = rng.in_norm_ball(map.domain_norm, map.domain_dim, rho);
        v = std::min(v, sur_at(map.jf(x)).value);
      }
    }
    values.push_back(v);
  }
  // Balls are nested, so the infimum cannot increase with the radius.
  for (std::size_t k = 1; k < values.size(); ++k) values[k] = std::min(values[k], values[k - 1]);
  return RadialProfile::from_samples(grid, std::move(values));
}

Verdict hadamard_verdict(const RadialProfile& m) {
  if (m.analytic) return m.analytic->divergent() ? Verdict::DivergentCertified : Verdict::Fails;

  for (double v : m.values)
    if (v <= 0.0) return Verdict::Fails;

  // Log-log least squares on the last third of the grid.
  const std::size_t n = m.grid.size();
  std::size_t lo = (n >= 6) ? n - n / 3 : 0;
  if (lo + 2 > n) lo = (n >= 2) ? n - 2 : 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t k = lo; k < n; ++k) {
    const double x = std::log1p(m.grid[k]);
    const double y = std::log(m.values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  const double denom = cnt * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return Verdict::DivergentEmpirical;  // flat tail
  const double slope = (cnt * sxy - sx * sy) / denom;
  if (slope >= -1.0 + 0.05) return Verdict::DivergentEmpirical;
  return Verdict::Inconclusive;
}

HadamardCertificate make_certificate(const RadialProfile& mu) {
  HadamardCertificate cert;
  cert.mu = mu;
  cert.m = lsc_envelope(mu);
  cert.rho.reserve(mu.grid.size());
  for (double r : cert.m.grid) cert.rho.push_back(rho_integral(cert.m, r).value);
  cert.verdict = hadamard_verdict(cert.m);
  cert.m0 = cert.m.values.front();
  return cert;
}

double a_priori_radius(const HadamardCertificate& cert, double gap) {
  if (!cert.divergent()) throw MalformedInput("a_priori_radius needs a divergent certificate");
  if (!(gap >= 0.0)) throw MalformedInput("a_priori_radius: gap must be >= 0");
  if (gap == 0.0) return 0.0;

  if (cert.m.analytic) {
    double hi = 1.0;
    while (cert.m.analytic->integral(hi) < gap) {
      hi *= 2.0;
      if (hi > 1e300) throw Unreachable("integral never reaches the gap");
    }
    double lo = 0.0;
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      if (cert.m.analytic->integral(mid) >= gap)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }

  for (std::size_t k = 0; k < cert.rho.size(); ++k)
    if (cert.rho[k] >= gap) return cert.m.grid[k];
  throw Unreachable("sampled profile integral below the gap at the grid end");
}

Weight weight_from_m(const RadialProfile& m) {
  for (double v : m.values)
    if (!(v > 0.0)) throw NotAWeight();

  if (m.analytic) {
    const AnalyticProfile a = *m.analytic;
    if (!(a.c > 0.0)) throw NotAWeight();
    const double m0 = a.value(0.0);
    return Weight{[a, m0](double rho) { return m0 / a.value(std::max(rho, 0.0)) - 1.0; }};
  }

  // Grid values m0/m_k - 1 with linear interpolation; clamp beyond the grid.
  const double m0 = m.values.front();
  std::vector<double> grid = m.grid;
  std::vector<double> h(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) h[k] = m0 / m.values[k] - 1.0;
  return Weight{[grid, h](double rho) {
    if (rho <= grid.front()) return h.front();
    if (rho >= grid.back()) return h.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), rho);
    const std::size_t k = static_cast<std::size_t>(it - grid.begin()) - 1;
    const double t = (rho - grid[k]) / (grid[k + 1] - grid[k]);
    return h[k] + t * (h[k + 1] - h[k]);
  }};
}

double inverse_lipschitz_bound(const RadialProfile& m, double x_norm) {
  const double v = m.floor_value_at(std::max(x_norm, 0.0));
  if (!(v > 0.0)) throw NotPositive();
  return 1.0 / v;
}

}  // namespace glinv
