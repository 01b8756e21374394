#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spintop/payoff.hpp"

namespace spintop {

enum class IntraLayer { RpsLike, Draws };

const char* to_string(IntraLayer s);
IntraLayer intra_layer_from_string(const std::string& s);

// Layered game of skill. Layers are listed strongest first; every member of a
// layer beats every member of each later layer by `margin`.
struct SyntheticSpec {
  std::vector<std::size_t> layer_sizes;
  IntraLayer intra = IntraLayer::RpsLike;
  double margin = 0.5;
  // Strategy i is labelled with bin [base_elo + i*bin_width, +bin_width).
  double base_elo = 1000.0;
  double bin_width = 100.0;
  // Relabel each RPS-like layer's cycle at random (seeded). Off: member p of
  // a layer beats members p+1 .. p+(n-1)/2 (mod n) in index order.
  bool shuffle_labels = false;

  std::size_t strategy_count() const;
  // Throws ConfigError: empty/zero layers, margin outside (0, 1], even
  // RPS-like layer larger than one, non-positive bin width.
  void validate() const;
};

// Strategies are indexed weakest layer first, so strength grows with the
// index (and with the attached bin midpoint). Within an RPS-like layer of
// size n each member beats the next (n-1)/2 members cyclically with payoff 1.
// The seed is used only to permute the cyclic order when shuffle_labels is set.
PayoffMatrix generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// Index ranges of the layers in the generated matrix, strongest first.
std::vector<std::vector<std::size_t>> synthetic_layers(const SyntheticSpec& spec);

}  // namespace spintop
