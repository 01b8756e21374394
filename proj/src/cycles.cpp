#include "spintop/cycles.hpp"

#include <numeric>

#include "spintop/error.hpp"

namespace spintop {

AdjacencyMatrix::AdjacencyMatrix(CountMatrix entries)
    : entries_(std::move(entries)) {
  const Eigen::Index m = entries_.rows();
  if (entries_.cols() != m) throw ConfigError("adjacency matrix must be square");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (entries_(i, i) != 0) throw ConfigError("adjacency diagonal must be zero");
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto v = entries_(i, j);
      if (v != 0 && v != 1) throw ConfigError("adjacency entries must be 0 or 1");
      if (v == 1 && entries_(j, i) == 1) {
        throw ConfigError("adjacency has opposing edges");
      }
    }
  }
}

AdjacencyMatrix to_adjacency(const Eigen::MatrixXd& game) {
  if (game.rows() != game.cols()) throw ConfigError("game matrix must be square");
  CountMatrix a = (game.array() > 0.0).cast<std::int64_t>().matrix();
  a.diagonal().setZero();
  return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix to_adjacency(const PayoffMatrix& matrix) {
  return to_adjacency(matrix.entries());
}

CountMatrix path_counts(const AdjacencyMatrix& adj, int k) {
  if (k < 1) throw ConfigError("path length must be >= 1");
  const CountMatrix& a = adj.entries();
  CountMatrix out = a;
  for (int step = 1; step < k; ++step) {
    CountMatrix next = out * a;
    out = std::move(next);
  }
  return out;
}

std::vector<std::int64_t> rps_cycle_counts(const AdjacencyMatrix& adj) {
  const CountMatrix& a = adj.entries();
  const Eigen::Index m = a.rows();
  const CountMatrix a2 = a * a;
  std::vector<std::int64_t> out(m, 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    // (A^3)_ii = sum_k (A^2)_ik A_ki
    out[i] = a2.row(i).dot(a.col(i).transpose());
  }
  return out;
}

std::int64_t total_rps_cycles(const std::vector<std::int64_t>& counts) {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}) / 3;
}

}  // namespace spintop
