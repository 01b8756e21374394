#include "spintop/bins.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spintop/error.hpp"

namespace spintop {

BinScheme::BinScheme(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw ConfigError("bin scheme needs at least one bin");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i])) throw ConfigError("bin edges must be finite");
    if (i > 0 && !(edges_[i] > edges_[i - 1])) {
      throw ConfigError("bin edges must be strictly increasing");
    }
  }
}

EloBin BinScheme::bin(std::size_t i) const {
  if (i >= size()) throw ConfigError("bin index out of range");
  return EloBin{edges_[i], edges_[i + 1], i};
}

std::vector<double> BinScheme::midpoints() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = midpoint(i);
  return out;
}

std::optional<std::size_t> BinScheme::locate(double rating) const {
  if (empty() || rating < lo() || rating > hi()) return std::nullopt;
  if (rating == hi()) return size() - 1;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), rating);
  return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

BinScheme make_bin_scheme(double lo, double hi, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw ConfigError("bin width must be positive");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi - lo < 2.0 * width) {
    throw ConfigError("bin range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] must span at least two bins");
  }
  std::vector<double> edges;
  for (std::size_t i = 0;; ++i) {
    const double edge = lo + static_cast<double>(i) * width;
    if (edge >= hi) break;
    edges.push_back(edge);
  }
  edges.push_back(hi);
  return BinScheme(std::move(edges));
}

}  // namespace spintop
