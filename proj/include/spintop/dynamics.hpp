#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spintop/equilibrium.hpp"

namespace spintop {

// How probability is spread over the population when measuring WR.
enum class Allocation { Uniform, MaxEntropyNash };

const char* to_string(Allocation a);
Allocation allocation_from_string(const std::string& s);

struct TracePoint {
  std::size_t iteration = 0;
  double wr = 0.0;
  std::vector<std::size_t> members;
};

// Fixed-memory fictitious-play population. Members are ordered oldest first.
struct PopulationState {
  std::vector<std::size_t> members;
  std::size_t k = 0;
  std::size_t iteration = 0;
  Allocation allocation_mode = Allocation::Uniform;
  Eigen::VectorXd allocation;  // aligned with `members`
  std::vector<TracePoint> trace;
};

// The k strategies with the lowest strict win-rate (ties to the lower index),
// oldest = weakest. Throws ConfigError unless 1 <= k <= m.
PopulationState init_population(const Eigen::MatrixXd& game, std::size_t k,
                                Allocation allocation = Allocation::Uniform);

// One replacement: the outside strategy with the lowest win-rate among those
// whose summed payoff against the population is positive replaces the oldest
// member. Returns nullopt when no such strategy exists (converged).
std::optional<PopulationState> step(const PopulationState& state,
                                    const Eigen::MatrixXd& game);

// sum_i allocation_i / m * sum_j game(member_i, j).
double wr_performance(const PopulationState& state, const Eigen::MatrixXd& game);

// WR of the top Nash cluster played at its own equilibrium.
double top_cluster_wr(const Clustering& clustering);

struct FictitiousPlayRun {
  std::size_t k = 0;
  std::vector<TracePoint> trace;
  bool converged = false;
  std::vector<std::size_t> final_members;
  std::optional<std::string> error;
};

// Runs init + step for every k independently; a failing k records its error
// and does not stop the others.
std::map<std::size_t, FictitiousPlayRun> run_fictitious_play(
    const Eigen::MatrixXd& game, const std::vector<std::size_t>& k_values,
    std::size_t max_iters, Allocation allocation = Allocation::Uniform);

}  // namespace spintop
