#pragma once
// Independent reference computations used to check the library. None of
// these share code with the implementations they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double entropy(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  }
  return h;
}

// Symmetric NE candidates of a skew-symmetric game by support enumeration:
// for every support S, solve M_SS p_S = 0, 1'p_S = 1 and keep strictly
// positive solutions with M p <= tol everywhere. For generic games the
// solution per support is unique and the NE set is a single point.
inline std::vector<Eigen::VectorXd> symmetric_ne_by_supports(const Eigen::MatrixXd& M,
                                                             double tol = 1e-10) {
  const int m = static_cast<int>(M.rows());
  std::vector<Eigen::VectorXd> found;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    const int k = static_cast<int>(s.size());
    Eigen::MatrixXd A(k + 1, k);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) A(r, c) = M(s[r], s[c]);
    }
    A.row(k).setOnes();
    b(k) = 1.0;
    const auto qr = A.colPivHouseholderQr();
    if (qr.rank() < k) continue;  // not isolated: left to the grid oracle
    const Eigen::VectorXd ps = qr.solve(b);
    if ((A * ps - b).lpNorm<Eigen::Infinity>() > 1e-9) continue;
    if (ps.minCoeff() <= 1e-12) continue;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
    for (int r = 0; r < k; ++r) p(s[r]) = ps(r);
    if ((M * p).maxCoeff() > tol) continue;
    found.push_back(p);
  }
  return found;
}

// Max-entropy point of {p in simplex : M p <= tol} over a lattice of step
// 1/n, for tiny games where the NE set is not a single point.
inline std::optional<Eigen::VectorXd> grid_maxent(const Eigen::MatrixXd& M, int n,
                                                  double tol) {
  const int m = static_cast<int>(M.rows());
  std::optional<Eigen::VectorXd> best;
  double best_h = -1.0;
  std::vector<int> counts(m, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == m - 1) {
      counts[i] = left;
      Eigen::VectorXd p(m);
      for (int k = 0; k < m; ++k) p(k) = static_cast<double>(counts[k]) / n;
      if ((M * p).maxCoeff() <= tol) {
        const double h = entropy(p);
        if (h > best_h) {
          best_h = h;
          best = p;
        }
      }
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, n);
  return best;
}

// Directed 3-cycles through each vertex, by enumerating unordered triples.
inline std::vector<std::int64_t> triangles_per_vertex(
    const std::vector<std::vector<int>>& adj) {
  const int m = static_cast<int>(adj.size());
  std::vector<std::int64_t> c(m, 0);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        const bool fwd = adj[i][j] && adj[j][k] && adj[k][i];
        const bool bwd = adj[i][k] && adj[k][j] && adj[j][i];
        const int n = static_cast<int>(fwd) + static_cast<int>(bwd);
        c[i] += n;
        c[j] += n;
        c[k] += n;
      }
    }
  }
  return c;
}

// Walks of exactly `len` edges from i to j, by depth-first enumeration.
inline std::int64_t count_walks(const std::vector<std::vector<int>>& adj, int i, int j,
                                int len) {
  if (len == 0) return i == j ? 1 : 0;
  std::int64_t total = 0;
  for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
    if (adj[i][v]) total += count_walks(adj, v, j, len - 1);
  }
  return total;
}

// Least squares line through the normal equations.
struct Line {
  double slope;
  double intercept;
};
inline Line normal_equations(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = x[static_cast<std::size_t>(i)];
    X(i, 1) = 1.0;
    Y(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d beta = (X.transpose() * X).ldlt().solve(X.transpose() * Y);
  return {beta(0), beta(1)};
}

// Standard skew-normal density written out from its definition.
inline double skew_normal(double z, double alpha) {
  const double pi = 3.14159265358979323846;
  const double phi = std::exp(-z * z / 2.0) / std::sqrt(2.0 * pi);
  const double Phi = 0.5 * (1.0 + std::erf(alpha * z / std::sqrt(2.0)));
  return 2.0 * phi * Phi;
}

// Fictitious play written directly from its rules: weakest-k start, replace
// the oldest member with the weakest outsider whose summed payoff against the
// population is positive.
struct FpResult {
  bool converged;
  std::vector<std::vector<int>> populations;
};
inline FpResult fictitious_play(const Eigen::MatrixXd& M, int k, int iters) {
  const int m = static_cast<int>(M.rows());
  std::vector<double> ts(m);
  for (int s = 0; s < m; ++s) {
    int wins = 0;
    for (int z = 0; z < m; ++z) wins += z != s && M(s, z) > 0;
    ts[s] = m > 1 ? static_cast<double>(wins) / (m - 1) : 0.0;
  }
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ts[a] < ts[b]; });
  std::vector<int> pop(order.begin(), order.begin() + k);
  FpResult r{false, {pop}};
  for (int t = 0; t < iters; ++t) {
    int pick = -1;
    for (int s = 0; s < m; ++s) {
      if (std::find(pop.begin(), pop.end(), s) != pop.end()) continue;
      double sum = 0.0;
      for (int q : pop) sum += M(s, q);
      if (sum > 0 && (pick < 0 || ts[s] < ts[pick])) pick = s;
    }
    if (pick < 0) {
      r.converged = true;
      return r;
    }
    pop.erase(pop.begin());
    pop.push_back(pick);
    r.populations.push_back(pop);
  }
  return r;
}

}  // namespace oracle
