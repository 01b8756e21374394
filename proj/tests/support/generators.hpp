#pragma once
// Seeded inputs for tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spintop/game_record.hpp"

namespace gen {

inline Eigen::MatrixXd random_skew(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      M(i, j) = u(rng);
      M(j, i) = -M(i, j);
    }
  }
  return M;
}

inline Eigen::MatrixXd rps() {
  Eigen::MatrixXd M(3, 3);
  M << 0, 1, -1, -1, 0, 1, 1, -1, 0;
  return M;
}

// entry(i, j) = +v for i < j: strategy 0 is strongest.
inline Eigen::MatrixXd transitive(int m, double v = 0.5) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      M(i, j) = v;
      M(j, i) = -v;
    }
  }
  return M;
}

// RPS on {0,1,2}; each RPS member beats strategy 3 by x.
inline Eigen::MatrixXd block_game(double x = 0.5) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4, 4);
  M.topLeftCorner(3, 3) = rps();
  for (int i = 0; i < 3; ++i) {
    M(i, 3) = x;
    M(3, i) = -x;
  }
  return M;
}

// Random orientation of every pair (a tournament), or no edge with
// probability `gap`.
inline std::vector<std::vector<int>> random_digraph(int m, std::mt19937_64& rng,
                                                   double gap = 0.0) {
  std::vector<std::vector<int>> a(m, std::vector<int>(m, 0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (u(rng) < gap) continue;
      if (u(rng) < 0.5) {
        a[i][j] = 1;
      } else {
        a[j][i] = 1;
      }
    }
  }
  return a;
}

inline Eigen::MatrixXd as_payoff(const std::vector<std::vector<int>>& adj) {
  const int m = static_cast<int>(adj.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (adj[i][j]) {
        M(i, j) = 1.0;
        M(j, i) = -1.0;
      }
    }
  }
  return M;
}

// Games between random players whose results follow the Elo model (draws
// with fixed probability).
inline std::vector<spintop::GameRecord> elo_games(std::size_t n, std::mt19937_64& rng,
                                                  double mean = 1500.0, double sd = 300.0,
                                                  double draw = 0.1) {
  std::normal_distribution<double> rating(mean, sd);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<spintop::GameRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int w = std::max(100, static_cast<int>(std::lround(rating(rng))));
    const int b = std::max(100, static_cast<int>(std::lround(rating(rng))));
    const double pw = 1.0 / (1.0 + std::pow(10.0, (b - w) / 400.0));
    const double r = u(rng);
    spintop::Outcome o = spintop::Outcome::Draw;
    if (r >= draw) o = u(rng) < pw ? spintop::Outcome::WhiteWin : spintop::Outcome::BlackWin;
    out.push_back({w, b, o, "sim"});
  }
  return out;
}

inline std::string pgn_game(const std::string& white_elo, const std::string& black_elo,
                            const std::string& result, const std::string& moves = "1. e4 e5") {
  std::string s = "[Event \"Rated Blitz game\"]\n[White \"a\"]\n[Black \"b\"]\n";
  s += "[Result \"" + result + "\"]\n";
  if (!white_elo.empty()) s += "[WhiteElo \"" + white_elo + "\"]\n";
  if (!black_elo.empty()) s += "[BlackElo \"" + black_elo + "\"]\n";
  s += "\n" + moves + " " + result + "\n\n";
  return s;
}

}  // namespace gen
