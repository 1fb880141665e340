#include <doctest.h>

#include <Eigen/Dense>

#include "glinv/certificates.hpp"
#include "glinv/rng.hpp"

using namespace glinv;

namespace {

LinearMap l2map(const Eigen::MatrixXd& m) { return LinearMap(m, NormTag::l2(), NormTag::l2()); }

PointMap linear_point_map(const Eigen::MatrixXd& a) {
  PointMap map;
  map.domain_dim = static_cast<int>(a.cols());
  map.codomain_dim = static_cast<int>(a.rows());
  map.f = [a](const Eigen::VectorXd& x) { return a * x; };
  const PseudoJacobian pj = PseudoJacobian::singleton(l2map(a));
  map.jf = [pj](const Eigen::VectorXd&) { return pj; };
  return map;
}

AnalyticProfile constant_profile(double c) {
  return AnalyticProfile{AnalyticProfile::Family::Constant, c, 1.0};
}

AnalyticProfile decay_profile(double c) {
  return AnalyticProfile{AnalyticProfile::Family::COver1pRho, c, 1.0};
}

AnalyticProfile power_profile(double c, double s) {
  return AnalyticProfile{AnalyticProfile::Family::COver1pRhoPowS, c, s};
}

}  // namespace

TEST_CASE("mu_profile: linear map gives a constant profile") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 0, 0, 3;
  const PointMap map = linear_point_map(a);
  const RadialProfile mu = mu_profile(map, {0.0, 0.5, 1.0, 2.0}, 24, 7);
  for (double v : mu.values) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("mu_profile: radius-dependent ball form tracks 1 - rho") {
  PointMap map;
  map.domain_dim = map.codomain_dim = 2;
  map.f = [](const Eigen::VectorXd& x) { return x; };
  const LinearMap id = l2map(Eigen::MatrixXd::Identity(2, 2));
  map.jf = [id](const Eigen::VectorXd& x) { return PseudoJacobian::ball(id, x.norm()); };
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.9, 1.5};
  const RadialProfile mu = mu_profile(map, grid, 300, 21);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double expect = std::max(1.0 - grid[k], 0.0);
    CHECK(mu.values[k] >= expect - 1e-12);           // samples stay inside the ball
    CHECK(mu.values[k] <= expect + 0.03 * (1.0 + grid[k]));  // and nearly reach the boundary
  }
}

TEST_CASE("mu_profile caps the dimension") {
  PointMap map;
  map.domain_dim = map.codomain_dim = 21;
  map.f = [](const Eigen::VectorXd& x) { return x; };
  const LinearMap id = l2map(Eigen::MatrixXd::Identity(21, 21));
  map.jf = [id](const Eigen::VectorXd&) { return PseudoJacobian::singleton(id); };
  CHECK_THROWS_AS(mu_profile(map, {0.0, 1.0}, 4, 1), DimensionTooLarge);
}

TEST_CASE("lsc envelope: right limit at a jump") {
  const RadialProfile mu = RadialProfile::from_samples({0.0, 1.0 - 1e-9, 1.0, 2.0}, {1.0, 1.0, 0.5, 0.5});
  const RadialProfile m = lsc_envelope(mu);
  CHECK(m.values[0] == doctest::Approx(1.0));
  CHECK(m.values[1] == doctest::Approx(0.5));
  CHECK(m.values[2] == doctest::Approx(0.5));
  CHECK(m.values[3] == doctest::Approx(0.5));
}

TEST_CASE("lsc envelope: constants and smooth decays are untouched") {
  const RadialProfile flat = RadialProfile::from_samples({0.0, 1.0, 2.0}, {0.7, 0.7, 0.7});
  CHECK(lsc_envelope(flat).values == flat.values);

  std::vector<double> grid, vals;
  for (int k = 0; k < 32; ++k) {
    grid.push_back(0.25 * k);
    vals.push_back(1.0 / (1.0 + 0.25 * k));
  }
  const RadialProfile smooth = RadialProfile::from_samples(grid, vals);
  const RadialProfile m = lsc_envelope(smooth);
  // a genuine (well-resolved) decay has no 1e-9-relative jumps ... except that
  // any strict decrease on a grid reads as a jump; the envelope shifts one
  // sample left at most.
  for (std::size_t k = 0; k + 1 < vals.size(); ++k) CHECK(m.values[k] == doctest::Approx(vals[k + 1]));
}

TEST_CASE("lsc envelope property: below input and nonincreasing") {
  Rng rng(88);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = rng.uniform_int(2, 24);
    std::vector<double> grid{0.0}, vals;
    double v = rng.uniform(0.5, 2.0);
    vals.push_back(v);
    for (int i = 1; i < k; ++i) {
      grid.push_back(grid.back() + rng.uniform(0.1, 1.0));
      if (rng.uniform01() < 0.4) v *= rng.uniform(0.3, 0.999);
      vals.push_back(v);
    }
    const RadialProfile mu = RadialProfile::from_samples(grid, vals);
    const RadialProfile m = lsc_envelope(mu);
    CHECK(m.nonincreasing());
    for (std::size_t i = 0; i < vals.size(); ++i) CHECK(m.values[i] <= vals[i] + 1e-15);
  }
}

TEST_CASE("rho_integral closed forms and quadrature cross-check") {
  const RadialProfile flat = RadialProfile::from_analytic(constant_profile(0.5), {0.0, 1.0, 4.0});
  CHECK(rho_integral(flat, 3.0).value == doctest::Approx(1.5));

  const RadialProfile dec = RadialProfile::from_analytic(decay_profile(0.8), {0.0, 1.0, 8.0});
  CHECK(rho_integral(dec, 5.0).value == doctest::Approx(0.8 * std::log(6.0)));

  // independent quadrature oracle: fine trapezoid agrees to 1e-8
  const int n = 200000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = 5.0 * i / n, b = 5.0 * (i + 1) / n;
    acc += 0.5 * (b - a) * (0.8 / (1.0 + a) + 0.8 / (1.0 + b));
  }
  CHECK(acc == doctest::Approx(rho_integral(dec, 5.0).value).epsilon(1e-8));
}

TEST_CASE("rho_integral on sampled grids: additive, monotone, bounded range") {
  std::vector<double> grid, vals;
  for (int k = 0; k <= 20; ++k) {
    grid.push_back(0.2 * k);
    vals.push_back(1.0 / (1.0 + 0.2 * k));
  }
  const RadialProfile m = RadialProfile::from_samples(grid, vals);
  const double full = rho_integral(m, 4.0).value;
  const double left = rho_integral(m, 1.7).value;
  double mid = 0.0;  // trapezoid over [1.7, 4.0] with the same interpolant
  {
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
      const double a = 1.7 + (4.0 - 1.7) * i / n, b = 1.7 + (4.0 - 1.7) * (i + 1) / n;
      mid += 0.5 * (b - a) * (m.value_at(a) + m.value_at(b));
    }
  }
  CHECK(left + mid == doctest::Approx(full).epsilon(1e-6));
  CHECK(rho_integral(m, 2.0).value <= rho_integral(m, 3.0).value);
  CHECK_THROWS_AS(rho_integral(m, 4.5), OutOfRange);
}

TEST_CASE("hadamard verdicts") {
  CHECK(hadamard_verdict(RadialProfile::from_analytic(constant_profile(0.1), {0.0, 1.0})) ==
        Verdict::DivergentCertified);
  CHECK(hadamard_verdict(RadialProfile::from_analytic(decay_profile(0.5), {0.0, 1.0})) ==
        Verdict::DivergentCertified);
  CHECK(hadamard_verdict(RadialProfile::from_analytic(power_profile(0.5, 2.0), {0.0, 1.0})) ==
        Verdict::Fails);
  CHECK(hadamard_verdict(RadialProfile::from_analytic(power_profile(0.5, 0.8), {0.0, 1.0})) ==
        Verdict::DivergentCertified);

  // sampled: slope fits on the tail
  auto sampled = [](double expo) {
    std::vector<double> grid, vals;
    for (int k = 0; k <= 63; ++k) {
      const double rho = k;
      grid.push_back(rho);
      vals.push_back(std::pow(1.0 + rho, -expo));
    }
    return RadialProfile::from_samples(grid, vals);
  };
  CHECK(hadamard_verdict(sampled(0.5)) == Verdict::DivergentEmpirical);
  CHECK(hadamard_verdict(sampled(2.0)) == Verdict::Inconclusive);

  const RadialProfile zeroed = RadialProfile::from_samples({0.0, 1.0, 2.0}, {1.0, 0.5, 0.0});
  CHECK(hadamard_verdict(zeroed) == Verdict::Fails);
}

TEST_CASE("a priori radius") {
  const auto cert_flat = make_certificate(RadialProfile::from_analytic(constant_profile(0.5), {0.0, 1.0, 4.0}));
  CHECK(a_priori_radius(cert_flat, 1.0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(a_priori_radius(cert_flat, 0.0) == doctest::Approx(0.0));

  const auto cert_dec = make_certificate(RadialProfile::from_analytic(decay_profile(0.5), {0.0, 1.0, 4.0}));
  const double gap = 1.3;
  CHECK(a_priori_radius(cert_dec, gap) == doctest::Approx(std::exp(gap / 0.5) - 1.0).epsilon(1e-7));

  // sampled: first adequate grid point; beyond the grid is unreachable
  std::vector<double> grid{0.0, 1.0, 2.0, 3.0};
  std::vector<double> vals{0.5, 0.5, 0.5, 0.5};
  const auto cert_s = make_certificate(RadialProfile::from_samples(grid, vals));
  const double r = a_priori_radius(cert_s, 0.6);
  CHECK(r == doctest::Approx(2.0));
  CHECK(rho_integral(cert_s.m, r).value >= 0.6);
  CHECK(rho_integral(cert_s.m, r - 1.0).value < 0.6);
  CHECK_THROWS_AS(a_priori_radius(cert_s, 10.0), Unreachable);

  const auto cert_fail = make_certificate(RadialProfile::from_analytic(power_profile(1.0, 2.0), {0.0, 1.0}));
  CHECK_THROWS_AS(a_priori_radius(cert_fail, 1.0), MalformedInput);
}

TEST_CASE("weight from m") {
  const auto flat = RadialProfile::from_analytic(constant_profile(0.3), {0.0, 1.0, 2.0});
  const Weight w0 = weight_from_m(flat);
  CHECK(w0.h(0.0) == doctest::Approx(0.0));
  CHECK(w0.h(17.0) == doctest::Approx(0.0));

  const auto dec = RadialProfile::from_analytic(decay_profile(0.5), {0.0, 1.0, 2.0});
  const Weight w1 = weight_from_m(dec);
  CHECK(w1.h(0.0) == doctest::Approx(0.0));
  for (double rho : {0.3, 1.0, 5.0, 40.0}) CHECK(w1.h(rho) == doctest::Approx(rho).epsilon(1e-12));

  // grid identity m(rho) (1 + h(rho)) = m(0)
  std::vector<double> grid{0.0, 0.5, 1.0, 2.5};
  std::vector<double> vals{0.8, 0.6, 0.5, 0.2};
  const auto sampled = RadialProfile::from_samples(grid, vals);
  const Weight ws = weight_from_m(sampled);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(vals[k] * (1.0 + ws.h(grid[k])) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ws.h(0.0) == doctest::Approx(0.0));

  const auto zeroed = RadialProfile::from_samples({0.0, 1.0}, {1.0, 0.0});
  CHECK_THROWS_AS(weight_from_m(zeroed), NotAWeight);
}

TEST_CASE("inverse lipschitz bound") {
  const auto flat = RadialProfile::from_analytic(constant_profile(0.1), {0.0, 1.0});
  CHECK(inverse_lipschitz_bound(flat, 3.7) == doctest::Approx(10.0));

  const auto dec = RadialProfile::from_analytic(decay_profile(0.5), {0.0, 1.0, 2.0});
  CHECK(inverse_lipschitz_bound(dec, 1.0) == doctest::Approx(2.0 / 0.5));
  CHECK(inverse_lipschitz_bound(dec, 0.0) == doctest::Approx(1.0 / 0.5));

  // sampled: takes the smaller bracketing value, so the bound is an upper one
  const auto sampled = RadialProfile::from_samples({0.0, 1.0, 2.0}, {1.0, 0.5, 0.25});
  CHECK(inverse_lipschitz_bound(sampled, 0.5) == doctest::Approx(2.0));
  CHECK(inverse_lipschitz_bound(sampled, 1.0) == doctest::Approx(2.0));
  const auto zeroed = RadialProfile::from_samples({0.0, 1.0}, {1.0, 0.0});
  CHECK_THROWS_AS(inverse_lipschitz_bound(zeroed, 0.5), NotPositive);
}

TEST_CASE("certificate invariants: rho table consistent with nonincreasing m") {
  Rng rng(313);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = rng.uniform_int(3, 20);
    std::vector<double> grid{0.0}, vals;
    double v = rng.uniform(0.5, 2.0);
    vals.push_back(v);
    for (int i = 1; i < k; ++i) {
      grid.push_back(grid.back() + rng.uniform(0.1, 1.0));
      v *= rng.uniform(0.8, 1.0);
      vals.push_back(v);
    }
    const auto cert = make_certificate(RadialProfile::from_samples(grid, vals));
    CHECK(cert.m0 == doctest::Approx(cert.m.values.front()));
    for (std::size_t i = 0; i + 1 < cert.rho.size(); ++i) {
      CHECK(cert.rho[i + 1] >= cert.rho[i] - 1e-15);
      const double step = cert.m.grid[i + 1] - cert.m.grid[i];
      CHECK(cert.rho[i + 1] - cert.rho[i] <= cert.m.values[i] * step + 1e-12);
    }
  }
}
