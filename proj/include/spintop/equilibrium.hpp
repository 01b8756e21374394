#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spintop/bins.hpp"
#include "spintop/payoff.hpp"

namespace spintop {

struct SolverOptions {
  // Probability above which a strategy counts as part of the support.
  double support_threshold = 1e-6;
  // Allowed violation of M p <= 0 in the returned equilibrium.
  double feasibility_tol = 1e-8;
  // Newton stops once the dual KKT residual drops below this.
  double kkt_tol = 1e-13;
  // Residual still accepted when the iteration cap is reached.
  double kkt_accept = 1e-9;
  int max_iterations = 500;
};

// Probability vector over a strategy index set.
class MixedStrategy {
 public:
  MixedStrategy() = default;
  explicit MixedStrategy(Eigen::VectorXd probabilities,
                         double support_threshold = 1e-6);

  const Eigen::VectorXd& probabilities() const { return p_; }
  std::size_t size() const { return static_cast<std::size_t>(p_.size()); }
  double operator[](std::size_t i) const {
    return p_(static_cast<Eigen::Index>(i));
  }
  double support_threshold() const { return threshold_; }
  std::vector<std::size_t> support() const;
  double entropy() const;

 private:
  Eigen::VectorXd p_;
  double threshold_ = 1e-6;
};

// Maximum-entropy symmetric Nash equilibrium of the skew-symmetric game
// `game` (row player's payoff): maximise H(p) over {p in simplex : game p <= 0}.
//
// The support is found first: a sequence of LPs collects every strategy that
// some equilibrium plays. On that support the entropy maximiser is the
// softmax of a dual point; the dual (log-partition over the support, with
// equality multipliers for support rows and sign-constrained ones for the
// remaining rows) is minimised by projected Newton.
//
// Throws ConfigError for empty or non-skew-symmetric input and SolverError
// when the dual does not converge.
MixedStrategy solve_maxent_ne(const Eigen::MatrixXd& game,
                              const SolverOptions& options = {});

// Same, restricted to the strategies in `subset` (result indexed like
// `subset`).
MixedStrategy solve_maxent_ne(const Eigen::MatrixXd& game,
                              std::span<const std::size_t> subset,
                              const SolverOptions& options = {});

struct NashCluster {
  std::size_t ordinal = 0;                 // 1-based
  std::vector<std::size_t> members;        // ascending strategy indices
  std::vector<std::size_t> residual;       // strategies left before this step
  MixedStrategy ne;                        // zero-padded to the full game
};

// Ordered partition of the strategies: cluster k is the support of the
// max-entropy equilibrium of the game restricted to what clusters 1..k-1 left.
class Clustering {
 public:
  Clustering(Eigen::MatrixXd game, std::vector<NashCluster> clusters);

  const Eigen::MatrixXd& game() const { return game_; }
  const std::vector<NashCluster>& clusters() const { return clusters_; }
  std::size_t size() const { return clusters_.size(); }
  const NashCluster& cluster(std::size_t ordinal) const;  // 1-based
  std::size_t strategy_count() const {
    return static_cast<std::size_t>(game_.rows());
  }
  // Cluster ordinal of each strategy.
  std::vector<std::size_t> assignment() const;

 private:
  Eigen::MatrixXd game_;
  std::vector<NashCluster> clusters_;
};

// Throws SolverError annotated with the residual strategy set on failure.
Clustering nash_clustering(const Eigen::MatrixXd& game,
                           const SolverOptions& options = {});
Clustering nash_clustering(const PayoffMatrix& matrix,
                           const SolverOptions& options = {});

// p_i^T M p_j for the equilibria that produced clusters i and j (1-based).
double npp(const Clustering& clustering, std::size_t i, std::size_t j);
Eigen::MatrixXd npp_matrix(const Clustering& clustering);

// Value of the zero-sum game in which the row player picks from `rows` and the
// column player from `cols`.
double rpp(const Eigen::MatrixXd& game, std::span<const std::size_t> rows,
           std::span<const std::size_t> cols);

// Fraction of the other strategies s beats strictly.
double ts_strategy_winrate(const Eigen::MatrixXd& game, std::size_t s);
std::vector<double> ts_strategy_winrates(const Eigen::MatrixXd& game);

// Margin above which a cluster comparison counts as a win.
inline constexpr double kWinTieTolerance = 1e-9;

// Fraction of other clusters with NPP(C_a, C_i) > tolerance. A clustering with
// a single cluster yields 0 and a warning.
double ts_cluster_winrate(const Clustering& clustering, std::size_t a);
// Same with RPP between cluster member sets.
double ts_cluster_rpp_winrate(const Clustering& clustering, std::size_t a);

// Mean bin midpoint of cluster k's members.
double ts_cluster_elo(const Clustering& clustering, const BinScheme& scheme,
                      std::size_t k);

struct ClusterProfileEntry {
  std::size_t ordinal = 0;
  std::size_t size = 0;
  std::optional<double> ts_elo;
  double ts_npp_winrate = 0.0;
  double ts_rpp_winrate = 0.0;
  std::vector<double> npp_row;
};

// Per-cluster transitive-strength summary. `scheme` may be null, in which case
// ts_elo stays empty.
std::vector<ClusterProfileEntry> cluster_profile(const Clustering& clustering,
                                                 const BinScheme* scheme);

}  // namespace spintop
