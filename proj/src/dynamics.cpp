#include "spintop/dynamics.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <stdexcept>

#include "spintop/error.hpp"

namespace spintop {

const char* to_string(Allocation a) {
  switch (a) {
    case Allocation::Uniform: return "uniform";
    case Allocation::MaxEntropyNash: return "nash";
  }
  return "uniform";
}

Allocation allocation_from_string(const std::string& s) {
  if (s == "uniform") return Allocation::Uniform;
  if (s == "nash") return Allocation::MaxEntropyNash;
  throw ConfigError("unknown allocation '" + s + "' (expected uniform or nash)");
}

namespace {

void compute_allocation(PopulationState& state, const Eigen::MatrixXd& game) {
  const auto k = static_cast<Eigen::Index>(state.members.size());
  if (state.allocation_mode == Allocation::Uniform) {
    state.allocation = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  } else {
    state.allocation = solve_maxent_ne(game, state.members).probabilities();
  }
}

void record(PopulationState& state, const Eigen::MatrixXd& game) {
  state.trace.push_back(
      TracePoint{state.iteration, wr_performance(state, game), state.members});
}

}  // namespace

PopulationState init_population(const Eigen::MatrixXd& game, std::size_t k,
                                Allocation allocation) {
  const std::size_t m = static_cast<std::size_t>(game.rows());
  if (k == 0 || k > m) {
    throw ConfigError("population size " + std::to_string(k) +
                      " must be in 1.." + std::to_string(m));
  }
  const std::vector<double> ts = ts_strategy_winrates(game);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });

  PopulationState state;
  state.k = k;
  state.allocation_mode = allocation;
  state.members.assign(order.begin(), order.begin() + static_cast<long>(k));
  compute_allocation(state, game);
  record(state, game);
  return state;
}

std::optional<PopulationState> step(const PopulationState& state,
                                    const Eigen::MatrixXd& game) {
  const std::size_t m = static_cast<std::size_t>(game.rows());
  if (state.members.size() != state.k || state.k == 0) {
    throw ConfigError("population size does not match k");
  }
  std::vector<bool> in_population(m, false);
  for (std::size_t s : state.members) {
    if (s >= m || in_population[s]) throw ConfigError("invalid population members");
    in_population[s] = true;
  }

  const std::vector<double> ts = ts_strategy_winrates(game);
  std::optional<std::size_t> pick;
  for (std::size_t s = 0; s < m; ++s) {
    if (in_population[s]) continue;
    double total = 0.0;
    for (std::size_t r : state.members) total += game(s, r);
    if (total > 0.0 && (!pick || ts[s] < ts[*pick])) pick = s;
  }
  if (!pick) return std::nullopt;

  PopulationState next = state;
  next.members.erase(next.members.begin());
  next.members.push_back(*pick);
  ++next.iteration;
  compute_allocation(next, game);
  record(next, game);
  return next;
}

double wr_performance(const PopulationState& state, const Eigen::MatrixXd& game) {
  const double m = static_cast<double>(game.rows());
  double wr = 0.0;
  for (std::size_t i = 0; i < state.members.size(); ++i) {
    wr += state.allocation(static_cast<Eigen::Index>(i)) / m *
          game.row(static_cast<Eigen::Index>(state.members[i])).sum();
  }
  return wr;
}

double top_cluster_wr(const Clustering& clustering) {
  const auto& p = clustering.cluster(1).ne.probabilities();
  const double m = static_cast<double>(clustering.game().rows());
  return p.dot(clustering.game().rowwise().sum()) / m;
}

namespace {

FictitiousPlayRun run_one(const Eigen::MatrixXd& game, std::size_t k,
                          std::size_t max_iters, Allocation allocation) {
  FictitiousPlayRun run;
  run.k = k;
  try {
    PopulationState state = init_population(game, k, allocation);
    for (std::size_t it = 0; it < max_iters; ++it) {
      auto next = step(state, game);
      if (!next) {
        run.converged = true;
        break;
      }
      state = std::move(*next);
    }
    if (!run.converged) run.converged = !step(state, game).has_value();
    run.final_members = state.members;
    run.trace = std::move(state.trace);
  } catch (const std::exception& e) {
    run.error = e.what();
  }
  return run;
}

}  // namespace

std::map<std::size_t, FictitiousPlayRun> run_fictitious_play(
    const Eigen::MatrixXd& game, const std::vector<std::size_t>& k_values,
    std::size_t max_iters, Allocation allocation) {
  if (max_iters == 0) throw ConfigError("max_iters must be >= 1");
  std::vector<std::future<FictitiousPlayRun>> jobs;
  for (std::size_t k : k_values) {
    jobs.push_back(std::async(std::launch::async, run_one, std::cref(game), k,
                              max_iters, allocation));
  }
  std::map<std::size_t, FictitiousPlayRun> out;
  for (auto& j : jobs) {
    FictitiousPlayRun run = j.get();
    out[run.k] = std::move(run);
  }
  return out;
}

}  // namespace spintop
