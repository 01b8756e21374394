#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "spintop/bins.hpp"
#include "spintop/game_record.hpp"

namespace spintop {

using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Logistic slope of the Elo model, ln(10) / 400 per rating point.
inline constexpr double kEloSlope = 2.302585092994045684 / 400.0;

// sigma(kEloSlope * (r_a - r_b)). Evaluated as u / (1 + u) with u a power of
// ten, so a 400-point gap gives exactly the double nearest 10/11.
double expected_win_probability(double r_a, double r_b);

// 2 p(a beats b) - 1, exactly antisymmetric in its arguments.
double expected_score(double r_a, double r_b);

// Dense skew-symmetric matrix of two-way match-up scores, row player's view.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;

  // Throws ConfigError unless `entries` is square, exactly skew-symmetric and
  // bounded by 1 in magnitude. An empty fill mask means "all predicted".
  explicit PayoffMatrix(Eigen::MatrixXd entries,
                        std::optional<BinScheme> scheme = std::nullopt,
                        Mask fill_mask = Mask(), std::size_t skipped_count = 0);

  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const Mask& fill_mask() const { return fill_mask_; }
  bool observed(std::size_t i, std::size_t j) const {
    return fill_mask_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const std::optional<BinScheme>& scheme() const { return scheme_; }
  std::size_t skipped_count() const { return skipped_count_; }

  // Midpoint of strategy i's bin, or i itself when no scheme is attached.
  double label(std::size_t i) const;

 private:
  Eigen::MatrixXd entries_;
  Mask fill_mask_;
  std::optional<BinScheme> scheme_;
  std::size_t skipped_count_ = 0;
};

// Averaged two-way match-up construction. For every bin pair i < j the two
// colour directions are resolved independently (mean observed score from bin
// i's side, else the Elo prediction at the bin midpoints) and averaged.
// Records with a rating outside the scheme are skipped and counted. Throws
// ConfigError on an empty scheme and DataError if no record is in range.
PayoffMatrix build_payoff_matrix(std::span<const GameRecord> records,
                                 const BinScheme& scheme);

}  // namespace spintop
