#include "spintop/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spintop/error.hpp"

namespace spintop::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration limit";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;
constexpr double kTieTol = 1e-12;

class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols)
      : t_(Eigen::MatrixXd::Zero(rows, cols + 1)),
        obj_(Eigen::RowVectorXd::Zero(cols + 1)),
        basis_(rows, -1),
        enterable_(cols, true) {}

  Eigen::Index rows() const { return t_.rows(); }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
  double& rhs(Eigen::Index r) { return t_(r, t_.cols() - 1); }
  std::vector<Eigen::Index>& basis() { return basis_; }
  std::vector<bool>& enterable() { return enterable_; }

  // Records the starting (identity) basis; its columns track B^-1 and drive
  // the lexicographic ratio test.
  void freeze_initial_basis() { initial_basis_ = basis_; }

  // Loads a maximisation objective and prices out the current basis.
  void set_objective(const Eigen::VectorXd& cost) {
    obj_.setZero();
    obj_.head(cols()) = -cost.transpose();
    for (Eigen::Index r = 0; r < rows(); ++r) {
      const double cb = cost(basis_[r]);
      if (cb != 0.0) obj_ += cb * t_.row(r);
    }
  }

  double objective_value() const { return obj_(obj_.size() - 1); }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index r = 0; r < rows(); ++r) {
      if (r == row) continue;
      const double f = t_(r, col);
      if (f != 0.0) t_.row(r) -= f * t_.row(row);
    }
    const double f = obj_(col);
    if (f != 0.0) obj_ -= f * t_.row(row);
    basis_[row] = col;
  }

  Status optimise(long max_pivots) {
    std::vector<Eigen::Index> ties;
    for (long it = 0; it < max_pivots; ++it) {
      Eigen::Index enter = -1;
      double best = -kCostTol;
      for (Eigen::Index c = 0; c < cols(); ++c) {
        if (enterable_[c] && obj_(c) < best) {
          best = obj_(c);
          enter = c;
        }
      }
      if (enter < 0) return Status::Optimal;

      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const double a = t_(r, enter);
        if (a > kPivotTol) ratio = std::min(ratio, std::max(0.0, rhs(r)) / a);
      }
      if (!std::isfinite(ratio)) return Status::Unbounded;
      ties.clear();
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const double a = t_(r, enter);
        if (a > kPivotTol && std::max(0.0, rhs(r)) / a <= ratio + kTieTol) {
          ties.push_back(r);
        }
      }
      pivot(lexicographic_min(ties, enter), enter);
    }
    return Status::IterationLimit;
  }

 private:
  Eigen::MatrixXd t_;
  Eigen::RowVectorXd obj_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> enterable_;
  std::vector<Eigen::Index> initial_basis_;

  // Degenerate ties are broken by comparing rows of B^-1 scaled by the pivot
  // column; this rules out cycling.
  Eigen::Index lexicographic_min(const std::vector<Eigen::Index>& ties,
                                 Eigen::Index enter) const {
    Eigen::Index best = ties.front();
    for (std::size_t i = 1; i < ties.size(); ++i) {
      const Eigen::Index r = ties[i];
      const double ar = t_(r, enter);
      const double ab = t_(best, enter);
      for (Eigen::Index c : initial_basis_) {
        const double d = t_(r, c) / ar - t_(best, c) / ab;
        if (d < -kTieTol) {
          best = r;
          break;
        }
        if (d > kTieTol) break;
      }
    }
    return best;
  }
};

}  // namespace

Solution maximize(const Problem& p) {
  const Eigen::Index n = p.objective.size();
  const Eigen::Index n_ub = p.a_ub.rows();
  const Eigen::Index n_eq = p.a_eq.rows();
  if ((n_ub > 0 && (p.a_ub.cols() != n || p.b_ub.size() != n_ub)) ||
      (n_eq > 0 && (p.a_eq.cols() != n || p.b_eq.size() != n_eq))) {
    throw ConfigError("linear program dimensions are inconsistent");
  }
  const Eigen::Index rows = n_ub + n_eq;

  // Columns: [x | slacks | artificials].
  std::vector<bool> needs_artificial(rows, false);
  Eigen::Index n_art = 0;
  for (Eigen::Index r = 0; r < n_ub; ++r) {
    if (p.b_ub(r) < 0.0) {
      needs_artificial[r] = true;
      ++n_art;
    }
  }
  for (Eigen::Index r = 0; r < n_eq; ++r) {
    needs_artificial[n_ub + r] = true;
    ++n_art;
  }
  const Eigen::Index cols = n + n_ub + n_art;
  Tableau tab(rows, cols);

  Eigen::Index art = n + n_ub;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const bool is_ub = r < n_ub;
    const double b = is_ub ? p.b_ub(r) : p.b_eq(r - n_ub);
    const double sign = b < 0.0 ? -1.0 : 1.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      tab.at(r, c) = sign * (is_ub ? p.a_ub(r, c) : p.a_eq(r - n_ub, c));
    }
    if (is_ub) tab.at(r, n + r) = sign;
    tab.rhs(r) = sign * b;
    if (needs_artificial[r]) {
      tab.at(r, art) = 1.0;
      tab.basis()[r] = art++;
    } else {
      tab.basis()[r] = n + r;
    }
  }

  tab.freeze_initial_basis();

  const long max_pivots = 50L * (rows + cols) + 1000;
  Solution out;
  out.x = Eigen::VectorXd::Zero(n);

  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
    phase1.tail(n_art).setConstant(-1.0);
    tab.set_objective(phase1);
    const Status s = tab.optimise(max_pivots);
    if (s == Status::IterationLimit) {
      out.status = s;
      return out;
    }
    if (tab.objective_value() < -1e-9) {
      out.status = Status::Infeasible;
      return out;
    }
    // Drive remaining artificials out of the basis where possible.
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (tab.basis()[r] < n + n_ub) continue;
      for (Eigen::Index c = 0; c < n + n_ub; ++c) {
        if (std::abs(tab.at(r, c)) > kPivotTol) {
          tab.pivot(r, c);
          break;
        }
      }
    }
    for (Eigen::Index c = n + n_ub; c < cols; ++c) tab.enterable()[c] = false;
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  cost.head(n) = p.objective;
  tab.set_objective(cost);
  out.status = tab.optimise(max_pivots);
  if (out.status != Status::Optimal) return out;

  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index b = tab.basis()[r];
    if (b < n) out.x(b) = std::max(0.0, tab.rhs(r));
  }
  out.value = p.objective.dot(out.x);
  return out;
}

namespace {

// max v  s.t.  sum_i x_i payoff(i, j) >= v for all j, x in simplex.
// v is shifted to stay non-negative.
std::pair<double, Eigen::VectorXd> solve_row_player(const Eigen::MatrixXd& a) {
  const Eigen::Index r = a.rows();
  const Eigen::Index c = a.cols();
  const double shift = 1.0 + a.cwiseAbs().maxCoeff();
  Problem p;
  p.objective = Eigen::VectorXd::Zero(r + 1);
  p.objective(r) = 1.0;
  p.a_ub = Eigen::MatrixXd::Zero(c, r + 1);
  p.a_ub.leftCols(r) = -a.transpose();
  p.a_ub.col(r).setOnes();
  p.b_ub = Eigen::VectorXd::Constant(c, shift);
  p.a_eq = Eigen::MatrixXd::Zero(1, r + 1);
  p.a_eq.leftCols(r).setOnes();
  p.b_eq = Eigen::VectorXd::Ones(1);
  const Solution s = maximize(p);
  if (s.status != Status::Optimal) {
    throw SolverError(std::string("zero-sum LP failed: ") + to_string(s.status),
                      s.x, std::numeric_limits<double>::infinity());
  }
  Eigen::VectorXd strategy = s.x.head(r);
  strategy /= strategy.sum();
  return {s.x(r) - shift, strategy};
}

}  // namespace

ZeroSumSolution solve_zero_sum(const Eigen::MatrixXd& payoff) {
  if (payoff.rows() == 0 || payoff.cols() == 0) {
    throw ConfigError("zero-sum game needs at least one row and column");
  }
  ZeroSumSolution out;
  auto [row_value, row] = solve_row_player(payoff);
  auto [col_value, col] = solve_row_player(-payoff.transpose());
  // Both LPs share the game value; average away pivoting round-off.
  out.value = 0.5 * (row_value - col_value);
  out.row_strategy = std::move(row);
  out.col_strategy = std::move(col);
  return out;
}

}  // namespace spintop::lp
