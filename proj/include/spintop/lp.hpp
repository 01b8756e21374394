#pragma once

#include <Eigen/Dense>

namespace spintop::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status s);

// maximise objective^T x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
// Either constraint block may be empty (zero rows).
struct Problem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
};

struct Solution {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

// Dense two-phase tableau simplex. Dantzig pricing, switching to Bland's rule
// after a run of degenerate pivots.
Solution maximize(const Problem& problem);

// Value and optimal mixed strategies of the zero-sum game where the row
// player receives payoff(i, j).
struct ZeroSumSolution {
  double value = 0.0;
  Eigen::VectorXd row_strategy;
  Eigen::VectorXd col_strategy;
};

ZeroSumSolution solve_zero_sum(const Eigen::MatrixXd& payoff);

}  // namespace spintop::lp
