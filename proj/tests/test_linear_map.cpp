#include <doctest.h>

#include <Eigen/Dense>

#include "glinv/linear_map.hpp"
#include "glinv/rng.hpp"

using namespace glinv;

namespace {

LinearMap l2map(const Eigen::MatrixXd& m) { return LinearMap(m, NormTag::l2(), NormTag::l2()); }

// Brute-force oracle: minimize |T^T v|_2 over the unit circle / segment of
// dual directions (2-D codomain or 1-D codomain).
double brute_banach(const Eigen::MatrixXd& t, int steps = 200000) {
  double best = std::numeric_limits<double>::infinity();
  if (t.rows() == 1) return (t.transpose() * Eigen::VectorXd::Ones(1)).norm();
  REQUIRE(t.rows() == 2);
  for (int i = 0; i < steps; ++i) {
    const double phi = 2.0 * M_PI * i / steps;
    Eigen::VectorXd v(2);
    v << std::cos(phi), std::sin(phi);
    best = std::min(best, (t.transpose() * v).norm());
  }
  return best;
}

}  // namespace

TEST_CASE("banach constant frozen values") {
  CHECK(banach_constant(l2map(Eigen::MatrixXd::Identity(2, 2))).value == doctest::Approx(1.0));
  CHECK(banach_constant(l2map(Eigen::Vector2d(2.0, 3.0).asDiagonal())).value == doctest::Approx(2.0));

  Eigen::MatrixXd wide(1, 2);
  wide << 1.0, 1.0;
  const double oracle = brute_banach(wide);
  CHECK(oracle == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(banach_constant(l2map(wide)).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(banach_constant(l2map(wide)).exact);
}

TEST_CASE("dual banach constant frozen values") {
  CHECK(dual_banach_constant(l2map(Eigen::Vector2d(2.0, 3.0).asDiagonal())).value == doctest::Approx(2.0));
  Eigen::MatrixXd tall(2, 1);
  tall << 1.0, 1.0;
  CHECK(dual_banach_constant(l2map(tall)).value == doctest::Approx(std::sqrt(2.0)));
  // tall maps cannot be onto, wide maps cannot be one-to-one
  CHECK(banach_constant(l2map(tall)).value == doctest::Approx(0.0));
  Eigen::MatrixXd wide(1, 2);
  wide << 1.0, 1.0;
  CHECK(dual_banach_constant(l2map(wide)).value == doctest::Approx(0.0));
}

TEST_CASE("operator norm frozen values") {
  CHECK(operator_norm(l2map(Eigen::MatrixXd::Zero(2, 2))).value == doctest::Approx(0.0));
  CHECK(operator_norm(l2map(Eigen::Vector2d(2.0, 3.0).asDiagonal())).value == doctest::Approx(3.0));
  Eigen::MatrixXd shear(2, 2);
  shear << 1.0, 1.0, 0.0, 1.0;
  // eigenvalues of T^T T are (3 +- sqrt(5))/2
  CHECK(operator_norm(l2map(shear)).value == doctest::Approx(std::sqrt((3.0 + std::sqrt(5.0)) / 2.0)));
}

TEST_CASE("isomorphism identity C = C* = 1/||inv||") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(1, 8);
    Eigen::MatrixXd a(n, n);
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-2.0, 2.0);
    } while (std::abs(a.determinant()) < 1e-4);
    const LinearMap t = l2map(a);
    const double c = banach_constant(t).value;
    const double cs = dual_banach_constant(t).value;
    CHECK(std::abs(c - cs) <= 1e-10);
    const double inv_norm = operator_norm(l2map(a.inverse())).value;
    CHECK(c * inv_norm == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("banach constant positive iff full row rank") {
  Rng rng(55);
  for (int trial = 0; trial < 120; ++trial) {
    const int m = rng.uniform_int(1, 5);
    const int n = rng.uniform_int(1, 5);
    const int r = rng.uniform_int(1, std::min(m, n));
    // random rank-r factorization
    Eigen::MatrixXd u(m, r), v(r, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < r; ++j) u(i, j) = rng.normal();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < n; ++j) v(i, j) = rng.normal();
    const Eigen::MatrixXd a = u * v;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const int rank = (svd.singularValues().array() > 1e-9 * svd.singularValues()[0]).count();
    const bool full_row = (rank == m);
    CHECK((banach_constant(l2map(a)).value > 1e-12) == full_row);
  }
}

TEST_CASE("non-euclidean tags give flagged one-sided bounds") {
  Rng rng(77);
  const NormTag doms[] = {NormTag::l1(), NormTag::linf(), NormTag::lp(3.0, 0.5)};
  for (const auto& dom : doms) {
    for (int trial = 0; trial < 60; ++trial) {
      const int n = rng.uniform_int(1, 5);
      const int m = rng.uniform_int(1, 5);
      Eigen::MatrixXd a(m, n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-2.0, 2.0);
      const LinearMap t(a, dom, NormTag::l2());
      CHECK_FALSE(banach_constant(t).exact);
      CHECK_FALSE(operator_norm(t).exact);

      // Sampled check of the one-sided directions.
      double inf_tu = std::numeric_limits<double>::infinity();
      double sup_tu = 0.0;
      for (int k = 0; k < 400; ++k) {
        Eigen::VectorXd u = rng.normal_vec(n);
        const double nu = norm_of(u, dom);
        if (nu < 1e-12) continue;
        u /= nu;
        inf_tu = std::min(inf_tu, (a * u).norm());
        sup_tu = std::max(sup_tu, (a * u).norm());
      }
      CHECK(dual_banach_constant(t).value <= inf_tu + 1e-9);
      CHECK(operator_norm(t).value >= sup_tu - 1e-9);
    }
  }
}

TEST_CASE("scaled euclidean tags stay exact") {
  // ||x|| = s|x|_2 on both sides: constants pick up the scale ratio.
  const NormTag dom = NormTag::lp(2.0, 0.5);
  const NormTag cod = NormTag::lp(2.0, 2.0);
  const LinearMap t(Eigen::Vector2d(2.0, 3.0).asDiagonal(), dom, cod);
  CHECK(t.euclidean_pair());
  CHECK(banach_constant(t).exact);
  CHECK(banach_constant(t).value == doctest::Approx(4.0 * 2.0));  // (2/0.5) * sigma_min
  CHECK(operator_norm(t).value == doctest::Approx(4.0 * 3.0));
}

TEST_CASE("malformed matrices are rejected") {
  Eigen::MatrixXd bad(1, 1);
  bad << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(l2map(bad), MalformedInput);
}
