#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace spintop {

// A rating interval [lower, upper); the last bin of a scheme also includes
// its upper edge.
struct EloBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t index = 0;

  double midpoint() const { return (lower + upper) / 2.0; }
};

// Ordered, contiguous discretisation of the rating axis. Each bin is one pure
// strategy of the resulting normal-form game.
class BinScheme {
 public:
  BinScheme() = default;

  // Builds bins from ascending edges; edges.size() - 1 bins. Throws
  // ConfigError on fewer than two edges or non-increasing edges.
  explicit BinScheme(std::vector<double> edges);

  std::size_t size() const { return edges_.empty() ? 0 : edges_.size() - 1; }
  bool empty() const { return size() == 0; }
  EloBin bin(std::size_t i) const;
  double midpoint(std::size_t i) const { return bin(i).midpoint(); }
  std::vector<double> midpoints() const;
  const std::vector<double>& edges() const { return edges_; }
  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }

  // Bin holding `rating`, or nullopt when outside [lo, hi].
  std::optional<std::size_t> locate(double rating) const;

  friend bool operator==(const BinScheme&, const BinScheme&) = default;

 private:
  std::vector<double> edges_;
};

// Contiguous bins of `width` from lo; the final bin is clipped at hi.
// Requires width > 0 and hi - lo >= 2 * width.
BinScheme make_bin_scheme(double lo, double hi, double width);

}  // namespace spintop
