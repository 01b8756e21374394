#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spintop/payoff.hpp"

namespace spintop {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Strict-win relation of a game: entry (i, j) is 1 when i beats j.
class AdjacencyMatrix {
 public:
  // Throws ConfigError unless entries are 0/1 with a zero diagonal and no
  // pair of opposing edges.
  explicit AdjacencyMatrix(CountMatrix entries);

  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  bool edge(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0;
  }
  const CountMatrix& entries() const { return entries_; }

 private:
  CountMatrix entries_;
};

// Edge i -> j iff game(i, j) > 0, with no tolerance.
AdjacencyMatrix to_adjacency(const Eigen::MatrixXd& game);
AdjacencyMatrix to_adjacency(const PayoffMatrix& matrix);

// adj^k in exact 64-bit arithmetic; entry (i, j) counts walks of k edges.
CountMatrix path_counts(const AdjacencyMatrix& adj, int k);

// diag(adj^3): directed 3-cycles through each strategy.
std::vector<std::int64_t> rps_cycle_counts(const AdjacencyMatrix& adj);

// Number of distinct 3-cycles (sum of per-strategy counts / 3).
std::int64_t total_rps_cycles(const std::vector<std::int64_t>& counts);

}  // namespace spintop
