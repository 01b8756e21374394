#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spintop/bins.hpp"
#include "spintop/game_record.hpp"

namespace spintop {

// Standard skew-normal density 2 phi(z) Phi(alpha z).
double skew_normal_density(double z, double alpha);

// y = amplitude * skew_normal_density((x - location) / scale, shape)
struct SkewNormalFit {
  double amplitude = 0.0;
  double location = 0.0;
  double scale = 1.0;
  double shape = 0.0;
  double mse = 0.0;
  double peak_x = 0.0;  // argmax of the curve over the fitted x-range
  // Best mse found so far after each descent iteration, over all starts.
  std::vector<double> best_mse_trace;

  double operator()(double x) const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Multi-start Levenberg-Marquardt least squares. Needs >= 5 points, y >= 0
// and some y > 0; throws ConfigError otherwise.
SkewNormalFit fit_skew_normal(std::span<const Point> points);

// True when the sequence rises (weakly) to a single peak and then falls.
bool is_unimodal(std::span<const double> ys);

struct LinearMap {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double residual_std = 0.0;  // sqrt(SSE / n)
  std::size_t n = 0;

  double translate(double x) const { return slope * x + intercept; }
  double inverse_translate(double y) const;  // throws ConfigError if slope == 0
};

// Ordinary least squares. Throws ConfigError when fewer than two distinct x.
// A non-positive slope is reported through warn().
LinearMap fit_linear_map(std::span<const Point> pairs);

struct EloHistogram {
  std::vector<std::int64_t> counts;  // one per bin
  std::int64_t overflow = 0;         // ratings outside the scheme

  std::int64_t total() const;
};

// Both ratings of every game are counted.
EloHistogram elo_histogram(std::span<const GameRecord> records,
                           const BinScheme& scheme);

// Rating-system correspondence table with columns lichess,uscf,fide (any
// order, blank cells allowed).
struct RatingTable {
  enum class System { Lichess, Uscf, Fide };
  std::vector<std::optional<double>> lichess, uscf, fide;

  const std::vector<std::optional<double>>& column(System s) const;
  // Rows where both columns are present.
  std::vector<Point> pairs(System from, System to) const;
};

const char* to_string(RatingTable::System s);

// Throws DataError on a missing column or unparsable cell.
RatingTable read_rating_table(std::istream& in);

}  // namespace spintop
