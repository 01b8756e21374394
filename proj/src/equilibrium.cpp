#include "spintop/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "spintop/error.hpp"
#include "spintop/log.hpp"
#include "spintop/lp.hpp"

namespace spintop {

MixedStrategy::MixedStrategy(Eigen::VectorXd probabilities,
                             double support_threshold)
    : p_(std::move(probabilities)), threshold_(support_threshold) {
  if (p_.size() == 0) throw ConfigError("mixed strategy must be non-empty");
  if ((p_.array() < 0.0).any()) {
    throw ConfigError("mixed strategy has negative entries");
  }
  if (std::abs(p_.sum() - 1.0) > 1e-9) {
    throw ConfigError("mixed strategy does not sum to one");
  }
}

std::vector<std::size_t> MixedStrategy::support() const {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    if (p_(i) > threshold_) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

double MixedStrategy::entropy() const {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    if (p_(i) > 0.0) h -= p_(i) * std::log(p_(i));
  }
  return h;
}

namespace {

constexpr double kSupportLpTol = 1e-9;

void require_skew_symmetric(const Eigen::MatrixXd& g) {
  if (g.rows() == 0 || g.rows() != g.cols()) {
    throw ConfigError("game matrix must be square and non-empty");
  }
  if (!g.allFinite()) throw ConfigError("game matrix has non-finite entries");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g + g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigError("game matrix is not skew-symmetric");
  }
}

// A strategy beating every other strategy is the unique equilibrium.
std::optional<Eigen::Index> condorcet_winner(const Eigen::MatrixXd& g) {
  for (Eigen::Index s = 0; s < g.rows(); ++s) {
    bool beats_all = true;
    for (Eigen::Index j = 0; j < g.cols() && beats_all; ++j) {
      if (j != s && !(g(s, j) > 0.0)) beats_all = false;
    }
    if (beats_all) return s;
  }
  return std::nullopt;
}

// Every strategy played by at least one symmetric equilibrium. Each LP
// maximises the mass on strategies not yet seen, so each round either finds a
// new one or proves none is left.
std::vector<Eigen::Index> equilibrium_support(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  std::vector<bool> found(n, false);
  lp::Problem problem;
  problem.a_ub = g;
  problem.b_ub = Eigen::VectorXd::Zero(n);
  problem.a_eq = Eigen::MatrixXd::Ones(1, n);
  problem.b_eq = Eigen::VectorXd::Ones(1);
  problem.objective = Eigen::VectorXd::Ones(n);

  for (Eigen::Index round = 0; round <= n; ++round) {
    const lp::Solution s = lp::maximize(problem);
    if (s.status != lp::Status::Optimal) {
      throw SolverError(
          std::string("equilibrium support LP: ") + lp::to_string(s.status),
          s.x, std::numeric_limits<double>::infinity());
    }
    if (round > 0 && s.value <= kSupportLpTol) break;
    bool grew = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!found[i] && s.x(i) > kSupportLpTol) {
        found[i] = true;
        problem.objective(i) = 0.0;
        grew = true;
      }
    }
    if (!grew) break;
  }
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (found[i]) support.push_back(i);
  }
  return support;
}

// Dual of  max H(q)  s.t.  eq_rows q = 0,  ineq_rows q <= 0,  q in simplex:
//   min_y  log sum_i exp(-(C^T y)_i),  C = [eq_rows; ineq_rows],
// with the inequality part of y kept non-negative. q(y) is the softmax.
class EntropyDual {
 public:
  EntropyDual(Eigen::MatrixXd eq_rows, const Eigen::MatrixXd& ineq_rows)
      : n_eq_(eq_rows.rows()),
        c_(eq_rows.rows() + ineq_rows.rows(), eq_rows.cols()) {
    c_.topRows(n_eq_) = eq_rows;
    c_.bottomRows(ineq_rows.rows()) = ineq_rows;
  }

  Eigen::Index dim() const { return c_.rows(); }
  Eigen::Index n_eq() const { return n_eq_; }

  double value(const Eigen::VectorXd& y, Eigen::VectorXd* q) const {
    const Eigen::VectorXd z = -(c_.transpose() * y);
    const double zmax = z.maxCoeff();
    const Eigen::ArrayXd e = (z.array() - zmax).exp();
    const double total = e.sum();
    if (q) *q = (e / total).matrix();
    return zmax + std::log(total);
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& q) const { return -(c_ * q); }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& q,
                          const std::vector<Eigen::Index>& rows) const {
    Eigen::MatrixXd cf(rows.size(), c_.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) cf.row(k) = c_.row(rows[k]);
    const Eigen::VectorXd cq = cf * q;
    Eigen::MatrixXd h = cf * q.asDiagonal() * cf.transpose();
    h.noalias() -= cq * cq.transpose();
    return h;
  }

  // Projected-gradient KKT residual.
  double residual(const Eigen::VectorXd& y, const Eigen::VectorXd& g) const {
    double r = n_eq_ > 0 ? g.head(n_eq_).cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index j = n_eq_; j < y.size(); ++j) {
      r = std::max(r, std::abs(std::min(y(j), g(j))));
    }
    return r;
  }

 private:
  Eigen::Index n_eq_;
  Eigen::MatrixXd c_;
};

struct DualResult {
  Eigen::VectorXd q;
  double residual = std::numeric_limits<double>::infinity();
};

DualResult minimise_dual(const EntropyDual& dual, const SolverOptions& opt) {
  const Eigen::Index dim = dual.dim();
  const Eigen::Index n_eq = dual.n_eq();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd q;
  double f = dual.value(y, &q);

  DualResult best;
  auto project = [n_eq](Eigen::VectorXd& v) {
    for (Eigen::Index j = n_eq; j < v.size(); ++j) v(j) = std::max(0.0, v(j));
  };
  auto try_step = [&](const Eigen::VectorXd& candidate,
                      const Eigen::VectorXd& g) -> bool {
    Eigen::VectorXd q_new;
    const double f_new = dual.value(candidate, &q_new);
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                         (1.0 + std::abs(f));
    if (f_new <= f + 1e-4 * g.dot(candidate - y) + slack) {
      y = candidate;
      q = std::move(q_new);
      f = f_new;
      return true;
    }
    return false;
  };

  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::VectorXd g = dual.gradient(q);
    const double r = dual.residual(y, g);
    if (r < best.residual) {
      best.residual = r;
      best.q = q;
    }
    if (r <= opt.kkt_tol) break;

    // Inequality multipliers pinned at (or near) zero with a positive
    // gradient stay out of the Newton system.
    const double eps = std::min(1e-6, r);
    std::vector<Eigen::Index> free_rows;
    std::vector<Eigen::Index> pinned;
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (j >= n_eq && y(j) <= eps && g(j) > 0.0) {
        pinned.push_back(j);
      } else {
        free_rows.push_back(j);
      }
    }

    bool moved = false;
    if (!free_rows.empty()) {
      Eigen::MatrixXd h = dual.hessian(q, free_rows);
      const double ridge =
          1e-12 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
      h.diagonal().array() += ridge;
      Eigen::VectorXd gf(free_rows.size());
      for (std::size_t k = 0; k < free_rows.size(); ++k) gf(k) = g(free_rows[k]);
      const Eigen::VectorXd d = -h.ldlt().solve(gf);
      if (d.allFinite()) {
        double step = 1.0;
        for (int ls = 0; ls < 60 && !moved; ++ls, step *= 0.5) {
          Eigen::VectorXd candidate = y;
          for (std::size_t k = 0; k < free_rows.size(); ++k) {
            candidate(free_rows[k]) += step * d(k);
          }
          for (Eigen::Index j : pinned) candidate(j) -= step * g(j);
          project(candidate);
          moved = try_step(candidate, g);
        }
      }
    }
    if (!moved) {
      double step = 1.0;
      for (int ls = 0; ls < 80 && !moved; ++ls, step *= 0.5) {
        Eigen::VectorXd candidate = y - step * g;
        project(candidate);
        moved = try_step(candidate, g);
      }
    }
    if (!moved) break;
  }
  const Eigen::VectorXd g = dual.gradient(q);
  const double r = dual.residual(y, g);
  if (r < best.residual) {
    best.residual = r;
    best.q = q;
  }
  return best;
}

Eigen::MatrixXd select(const Eigen::MatrixXd& g,
                       const std::vector<Eigen::Index>& rows,
                       const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = g(rows[r], cols[c]);
  }
  return out;
}

Eigen::VectorXd solve_on_support(const Eigen::MatrixXd& g,
                                 std::vector<Eigen::Index> support,
                                 const SolverOptions& opt) {
  const Eigen::Index n = g.rows();
  // A strategy wrongly admitted by the LP round-off drives its probability
  // towards zero; drop it and re-solve.
  for (int attempt = 0; attempt < 3; ++attempt) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    if (support.size() == 1) {
      p(support.front()) = 1.0;
      return p;
    }
    std::vector<Eigen::Index> others;
    std::vector<bool> in_support(n, false);
    for (Eigen::Index s : support) in_support[s] = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!in_support[i]) others.push_back(i);
    }
    const EntropyDual dual(select(g, support, support), select(g, others, support));
    const DualResult res = minimise_dual(dual, opt);
    for (std::size_t k = 0; k < support.size(); ++k) p(support[k]) = res.q(k);
    if (res.residual <= opt.kkt_accept) return p / p.sum();

    std::vector<Eigen::Index> kept;
    const double qmax = res.q.maxCoeff();
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (res.q(k) > 1e-9 * qmax) kept.push_back(support[k]);
    }
    if (kept.size() == support.size() || attempt == 2) {
      throw SolverError("max-entropy dual did not converge (KKT residual " +
                            std::to_string(res.residual) + ")",
                        p, res.residual);
    }
    support = std::move(kept);
  }
  throw SolverError("max-entropy dual did not converge", Eigen::VectorXd(), 0);
}

}  // namespace

MixedStrategy solve_maxent_ne(const Eigen::MatrixXd& game,
                              const SolverOptions& options) {
  require_skew_symmetric(game);
  const Eigen::Index n = game.rows();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  if (auto winner = condorcet_winner(game)) {
    p(*winner) = 1.0;
    return MixedStrategy(std::move(p), options.support_threshold);
  }

  p = solve_on_support(game, equilibrium_support(game), options);
  p = p.cwiseMax(0.0);
  p /= p.sum();

  const double violation = (game * p).maxCoeff();
  if (violation > options.feasibility_tol) {
    throw SolverError("equilibrium violates M p <= 0 by " +
                          std::to_string(violation),
                      p, violation);
  }
  return MixedStrategy(std::move(p), options.support_threshold);
}

MixedStrategy solve_maxent_ne(const Eigen::MatrixXd& game,
                              std::span<const std::size_t> subset,
                              const SolverOptions& options) {
  if (subset.empty()) throw ConfigError("strategy subset is empty");
  std::vector<Eigen::Index> idx(subset.begin(), subset.end());
  for (Eigen::Index i : idx) {
    if (i < 0 || i >= game.rows()) throw ConfigError("subset index out of range");
  }
  return solve_maxent_ne(select(game, idx, idx), options);
}

Clustering::Clustering(Eigen::MatrixXd game, std::vector<NashCluster> clusters)
    : game_(std::move(game)), clusters_(std::move(clusters)) {
  std::vector<int> seen(game_.rows(), 0);
  for (const auto& c : clusters_) {
    if (c.members.empty()) throw ConfigError("empty Nash cluster");
    for (std::size_t s : c.members) {
      if (s >= seen.size() || seen[s]++) {
        throw ConfigError("clusters do not partition the strategy set");
      }
    }
  }
  if (std::count(seen.begin(), seen.end(), 1) != game_.rows()) {
    throw ConfigError("clusters do not cover the strategy set");
  }
}

const NashCluster& Clustering::cluster(std::size_t ordinal) const {
  if (ordinal < 1 || ordinal > clusters_.size()) {
    throw ConfigError("cluster ordinal " + std::to_string(ordinal) +
                      " out of range 1.." + std::to_string(clusters_.size()));
  }
  return clusters_[ordinal - 1];
}

std::vector<std::size_t> Clustering::assignment() const {
  std::vector<std::size_t> out(strategy_count(), 0);
  for (const auto& c : clusters_) {
    for (std::size_t s : c.members) out[s] = c.ordinal;
  }
  return out;
}

Clustering nash_clustering(const Eigen::MatrixXd& game,
                           const SolverOptions& options) {
  require_skew_symmetric(game);
  const std::size_t m = static_cast<std::size_t>(game.rows());
  std::vector<std::size_t> residual(m);
  std::iota(residual.begin(), residual.end(), std::size_t{0});

  std::vector<NashCluster> clusters;
  while (!residual.empty()) {
    MixedStrategy local;
    try {
      local = solve_maxent_ne(game, residual, options);
    } catch (const SolverError& e) {
      std::ostringstream msg;
      msg << e.what() << " (residual set of " << residual.size()
          << " strategies:";
      for (std::size_t s : residual) msg << ' ' << s;
      msg << ')';
      throw SolverError(msg.str(), e.best_iterate(), e.kkt_residual());
    }

    Eigen::VectorXd padded = Eigen::VectorXd::Zero(m);
    for (std::size_t k = 0; k < residual.size(); ++k) padded(residual[k]) = local[k];

    NashCluster cluster;
    cluster.ordinal = clusters.size() + 1;
    cluster.residual = residual;
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < residual.size(); ++k) {
      if (local[k] > options.support_threshold) {
        cluster.members.push_back(residual[k]);
      } else {
        rest.push_back(residual[k]);
      }
    }
    cluster.ne = MixedStrategy(std::move(padded), options.support_threshold);
    clusters.push_back(std::move(cluster));
    residual = std::move(rest);
  }
  return Clustering(game, std::move(clusters));
}

Clustering nash_clustering(const PayoffMatrix& matrix,
                           const SolverOptions& options) {
  return nash_clustering(matrix.entries(), options);
}

double npp(const Clustering& clustering, std::size_t i, std::size_t j) {
  const auto& pi = clustering.cluster(i).ne.probabilities();
  const auto& pj = clustering.cluster(j).ne.probabilities();
  return pi.dot(clustering.game() * pj);
}

Eigen::MatrixXd npp_matrix(const Clustering& clustering) {
  const std::size_t c = clustering.size();
  Eigen::MatrixXd out(c, c);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) out(i, j) = npp(clustering, i + 1, j + 1);
  }
  return out;
}

double rpp(const Eigen::MatrixXd& game, std::span<const std::size_t> rows,
           std::span<const std::size_t> cols) {
  if (rows.empty() || cols.empty()) throw ConfigError("RPP needs non-empty sets");
  Eigen::MatrixXd sub(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (rows[r] >= static_cast<std::size_t>(game.rows()) ||
          cols[c] >= static_cast<std::size_t>(game.cols())) {
        throw ConfigError("RPP index out of range");
      }
      sub(r, c) = game(rows[r], cols[c]);
    }
  }
  if (std::equal(rows.begin(), rows.end(), cols.begin(), cols.end())) return 0.0;
  return lp::solve_zero_sum(sub).value;
}

double ts_strategy_winrate(const Eigen::MatrixXd& game, std::size_t s) {
  const Eigen::Index m = game.rows();
  if (static_cast<Eigen::Index>(s) >= m) throw ConfigError("strategy out of range");
  if (m < 2) return 0.0;
  Eigen::Index wins = 0;
  for (Eigen::Index z = 0; z < m; ++z) {
    if (z != static_cast<Eigen::Index>(s) && game(s, z) > 0.0) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(m - 1);
}

std::vector<double> ts_strategy_winrates(const Eigen::MatrixXd& game) {
  std::vector<double> out(game.rows());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = ts_strategy_winrate(game, s);
  return out;
}

namespace {

template <class Compare>
double cluster_winrate(const Clustering& clustering, std::size_t a,
                       Compare&& versus) {
  clustering.cluster(a);  // range check
  if (clustering.size() < 2) {
    warn("cluster win-rate is undefined for a single cluster; reporting 0");
    return 0.0;
  }
  std::size_t beaten = 0;
  for (std::size_t i = 1; i <= clustering.size(); ++i) {
    if (i != a && versus(a, i) > kWinTieTolerance) ++beaten;
  }
  return static_cast<double>(beaten) / static_cast<double>(clustering.size() - 1);
}

}  // namespace

double ts_cluster_winrate(const Clustering& clustering, std::size_t a) {
  return cluster_winrate(clustering, a, [&](std::size_t x, std::size_t y) {
    return npp(clustering, x, y);
  });
}

double ts_cluster_rpp_winrate(const Clustering& clustering, std::size_t a) {
  return cluster_winrate(clustering, a, [&](std::size_t x, std::size_t y) {
    return rpp(clustering.game(), clustering.cluster(x).members,
               clustering.cluster(y).members);
  });
}

double ts_cluster_elo(const Clustering& clustering, const BinScheme& scheme,
                      std::size_t k) {
  const auto& members = clustering.cluster(k).members;
  double total = 0.0;
  for (std::size_t s : members) total += scheme.midpoint(s);
  return total / static_cast<double>(members.size());
}

std::vector<ClusterProfileEntry> cluster_profile(const Clustering& clustering,
                                                 const BinScheme* scheme) {
  const std::size_t c = clustering.size();
  const Eigen::MatrixXd npps = npp_matrix(clustering);
  Eigen::MatrixXd rpps = Eigen::MatrixXd::Zero(c, c);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      rpps(i, j) = rpp(clustering.game(), clustering.clusters()[i].members,
                       clustering.clusters()[j].members);
      rpps(j, i) = -rpps(i, j);
    }
  }
  if (c < 2) warn("cluster win-rate is undefined for a single cluster; reporting 0");

  std::vector<ClusterProfileEntry> out(c);
  for (std::size_t i = 0; i < c; ++i) {
    auto& e = out[i];
    e.ordinal = i + 1;
    e.size = clustering.clusters()[i].members.size();
    if (scheme) e.ts_elo = ts_cluster_elo(clustering, *scheme, i + 1);
    e.npp_row.resize(c);
    std::size_t npp_wins = 0;
    std::size_t rpp_wins = 0;
    for (std::size_t j = 0; j < c; ++j) {
      e.npp_row[j] = npps(i, j);
      if (j == i) continue;
      if (npps(i, j) > kWinTieTolerance) ++npp_wins;
      if (rpps(i, j) > kWinTieTolerance) ++rpp_wins;
    }
    if (c >= 2) {
      e.ts_npp_winrate = static_cast<double>(npp_wins) / static_cast<double>(c - 1);
      e.ts_rpp_winrate = static_cast<double>(rpp_wins) / static_cast<double>(c - 1);
    }
  }
  return out;
}

}  // namespace spintop
