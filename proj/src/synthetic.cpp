#include "spintop/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "spintop/error.hpp"

namespace spintop {

const char* to_string(IntraLayer s) {
  return s == IntraLayer::RpsLike ? "rps_like" : "draws";
}

IntraLayer intra_layer_from_string(const std::string& s) {
  if (s == "rps_like") return IntraLayer::RpsLike;
  if (s == "draws") return IntraLayer::Draws;
  throw ConfigError("unknown intra-layer structure '" + s +
                    "' (expected rps_like or draws)");
}

std::size_t SyntheticSpec::strategy_count() const {
  return std::accumulate(layer_sizes.begin(), layer_sizes.end(), std::size_t{0});
}

void SyntheticSpec::validate() const {
  if (layer_sizes.empty()) throw ConfigError("synthetic spec needs at least one layer");
  for (std::size_t n : layer_sizes) {
    if (n == 0) throw ConfigError("synthetic layer sizes must be positive");
    if (intra == IntraLayer::RpsLike && n > 1 && n % 2 == 0) {
      throw ConfigError("rps_like layer of even size " + std::to_string(n) +
                        " has no balanced cyclic tournament");
    }
  }
  if (!(margin > 0.0 && margin <= 1.0)) {
    throw ConfigError("synthetic margin must lie in (0, 1]");
  }
  if (!(bin_width > 0.0)) throw ConfigError("synthetic bin width must be positive");
}

std::vector<std::vector<std::size_t>> synthetic_layers(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<std::vector<std::size_t>> layers(spec.layer_sizes.size());
  std::size_t next = spec.strategy_count();
  for (std::size_t l = 0; l < spec.layer_sizes.size(); ++l) {
    next -= spec.layer_sizes[l];
    layers[l].resize(spec.layer_sizes[l]);
    std::iota(layers[l].begin(), layers[l].end(), next);
  }
  return layers;
}

PayoffMatrix generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  const auto layers = synthetic_layers(spec);
  const std::size_t m = spec.strategy_count();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
  auto set = [&](std::size_t i, std::size_t j, double v) {
    M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = -v;
  };

  for (std::size_t a = 0; a < layers.size(); ++a) {
    for (std::size_t b = a + 1; b < layers.size(); ++b) {
      for (std::size_t s : layers[a]) {
        for (std::size_t t : layers[b]) set(s, t, spec.margin);
      }
    }
  }

  std::mt19937_64 rng(seed);
  if (spec.intra == IntraLayer::RpsLike) {
    for (auto cycle : layers) {
      if (spec.shuffle_labels) std::shuffle(cycle.begin(), cycle.end(), rng);
      const std::size_t n = cycle.size();
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t d = 1; d <= (n - 1) / 2; ++d) {
          set(cycle[p], cycle[(p + d) % n], 1.0);
        }
      }
    }
  }

  std::vector<double> edges(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    edges[i] = spec.base_elo + spec.bin_width * static_cast<double>(i);
  }
  return PayoffMatrix(std::move(M), BinScheme(std::move(edges)));
}

}  // namespace spintop
