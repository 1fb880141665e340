#include <doctest.h>

#include <Eigen/Dense>
#include <atomic>
#include <thread>
#include <vector>

#include "glinv/solver.hpp"
#include "glinv/volterra.hpp"

using namespace glinv;

TEST_CASE("shared singular-value cache is safe under concurrent first use") {
  Eigen::MatrixXd a(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) a(i, j) = std::sin(3.0 * i + j);
  const LinearMap shared(a, NormTag::l2(), NormTag::l2());

  std::atomic<int> mismatches{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([shared, &mismatches] {
      const LinearMap local = shared;  // copies share matrix and cache
      const double c = banach_constant(local).value;
      const double cs = dual_banach_constant(local).value;
      if (std::abs(c - cs) > 1e-10) ++mismatches;
    });
  }
  for (auto& th : threads) th.join();
  CHECK(mismatches.load() == 0);
}

TEST_CASE("concurrent solves on one problem agree with the sequential result") {
  const VolterraProblem prob = make_sin_problem(40, 0.9, Eigen::VectorXd::Ones(40));
  const PointMap map = build_map(prob);
  const SolveReport reference = solve(map, prob.y, Eigen::VectorXd::Zero(40));
  REQUIRE(reference.status == SolveStatus::Solved);

  std::atomic<int> bad{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&] {
      const SolveReport rep = solve(map, prob.y, Eigen::VectorXd::Zero(40));
      if (rep.status != SolveStatus::Solved ||
          norm_of(rep.x_final - reference.x_final, prob.space_tag()) > 1e-12)
        ++bad;
    });
  }
  for (auto& th : threads) th.join();
  CHECK(bad.load() == 0);
}
