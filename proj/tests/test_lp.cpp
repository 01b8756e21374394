#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "spintop/lp.hpp"

using namespace spintop;

TEST_CASE("lp: textbook maximisation") {
  // max 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18  -> (2, 6), value 36
  lp::Problem p;
  p.objective = Eigen::Vector2d(3, 5);
  p.a_ub.resize(3, 2);
  p.a_ub << 1, 0, 0, 2, 3, 2;
  p.b_ub = Eigen::Vector3d(4, 12, 18);
  const auto s = lp::maximize(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.value == doctest::Approx(36));
  CHECK(s.x(0) == doctest::Approx(2));
  CHECK(s.x(1) == doctest::Approx(6));
}

TEST_CASE("lp: equality constraints and negative right-hand sides") {
  // max x + y  s.t.  x + y = 1, -x <= -0.25  -> value 1 with x >= 0.25
  lp::Problem p;
  p.objective = Eigen::Vector2d(1, 1);
  p.a_eq = Eigen::RowVector2d(1, 1);
  p.b_eq = Eigen::VectorXd::Constant(1, 1.0);
  p.a_ub = Eigen::RowVector2d(-1, 0);
  p.b_ub = Eigen::VectorXd::Constant(1, -0.25);
  const auto s = lp::maximize(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.value == doctest::Approx(1));
  CHECK(s.x(0) >= 0.25 - 1e-12);
}

TEST_CASE("lp: infeasible and unbounded") {
  lp::Problem p;
  p.objective = Eigen::Vector2d(1, 0);
  p.a_eq = Eigen::RowVector2d(1, 1);
  p.b_eq = Eigen::VectorXd::Constant(1, -1.0);
  CHECK(lp::maximize(p).status == lp::Status::Infeasible);

  lp::Problem q;
  q.objective = Eigen::Vector2d(1, 1);
  q.a_ub = Eigen::RowVector2d(1, -1);
  q.b_ub = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(lp::maximize(q).status == lp::Status::Unbounded);
}

TEST_CASE("lp: degenerate problem terminates") {
  // Many redundant constraints through the optimum.
  lp::Problem p;
  p.objective = Eigen::Vector3d(1, 1, 1);
  p.a_ub.resize(6, 3);
  p.a_ub << 1, 1, 0, 0, 1, 1, 1, 0, 1, 1, 1, 1, 2, 2, 2, 1, 1, 1;
  p.b_ub = (Eigen::VectorXd(6) << 1, 1, 1, 1.5, 3, 1.5).finished();
  const auto s = lp::maximize(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.value == doctest::Approx(1.5));
}

TEST_CASE("zero-sum: known values") {
  CHECK(lp::solve_zero_sum(gen::rps()).value == doctest::Approx(0).epsilon(1e-12));
  Eigen::MatrixXd pennies(2, 2);
  pennies << 1, -1, -1, 1;
  const auto mp = lp::solve_zero_sum(pennies);
  CHECK(mp.value == doctest::Approx(0).epsilon(1e-12));
  CHECK(mp.row_strategy(0) == doctest::Approx(0.5));
  // [[3, -1], [-2, 1]]: p = 3/7, value = 1/7
  Eigen::MatrixXd g(2, 2);
  g << 3, -1, -2, 1;
  const auto z = lp::solve_zero_sum(g);
  CHECK(z.value == doctest::Approx(1.0 / 7.0));
  CHECK(z.row_strategy(0) == doctest::Approx(3.0 / 7.0));
  // Saddle point.
  Eigen::MatrixXd sp(2, 3);
  sp << 4, 2, 5, 1, 0, 3;
  CHECK(lp::solve_zero_sum(sp).value == doctest::Approx(2));
}

TEST_CASE("zero-sum: optimal strategies certify the value on random games") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> dim(1, 9);
  for (int t = 0; t < 200; ++t) {
    const int r = dim(rng), c = dim(rng);
    Eigen::MatrixXd A(r, c);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) A(i, j) = u(rng);
    }
    const auto z = lp::solve_zero_sum(A);
    CHECK(z.row_strategy.minCoeff() >= -1e-12);
    CHECK(z.row_strategy.sum() == doctest::Approx(1.0));
    CHECK(z.col_strategy.sum() == doctest::Approx(1.0));
    // Row guarantees at least v against every column; column concedes at most v.
    CHECK((z.row_strategy.transpose() * A).minCoeff() >= z.value - 1e-9);
    CHECK((A * z.col_strategy).maxCoeff() <= z.value + 1e-9);
  }
}
