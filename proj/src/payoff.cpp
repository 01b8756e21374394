#include "spintop/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "spintop/error.hpp"

namespace spintop {

namespace {

// Returns (u - 1) / (u + 1) and u / (u + 1) for u = 10^(gap / 400), gap >= 0.
struct EloTerms {
  double score;
  double win;
};

EloTerms elo_terms_nonnegative(double gap) {
  const double u = std::pow(10.0, gap / 400.0);
  if (!std::isfinite(u)) return {1.0, 1.0};
  return {(u - 1.0) / (u + 1.0), u / (u + 1.0)};
}

}  // namespace

double expected_win_probability(double r_a, double r_b) {
  const double gap = r_a - r_b;
  if (gap >= 0.0) return elo_terms_nonnegative(gap).win;
  const double u = std::pow(10.0, -gap / 400.0);
  if (!std::isfinite(u)) return 0.0;
  return 1.0 / (1.0 + u);
}

double expected_score(double r_a, double r_b) {
  const double gap = r_a - r_b;
  if (gap >= 0.0) return elo_terms_nonnegative(gap).score;
  return -elo_terms_nonnegative(-gap).score;
}

PayoffMatrix::PayoffMatrix(Eigen::MatrixXd entries,
                           std::optional<BinScheme> scheme, Mask fill_mask,
                           std::size_t skipped_count)
    : entries_(std::move(entries)),
      fill_mask_(std::move(fill_mask)),
      scheme_(std::move(scheme)),
      skipped_count_(skipped_count) {
  const Eigen::Index m = entries_.rows();
  if (entries_.cols() != m) throw ConfigError("payoff matrix must be square");
  if (m == 0) throw ConfigError("payoff matrix must be non-empty");
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double v = entries_(i, j);
      if (!std::isfinite(v) || std::abs(v) > 1.0) {
        throw ConfigError("payoff entries must lie in [-1, 1]");
      }
      if (v != -entries_(j, i)) {
        throw ConfigError("payoff matrix is not skew-symmetric at (" +
                          std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  if (fill_mask_.size() == 0) {
    fill_mask_ = Mask::Constant(m, m, false);
  } else if (fill_mask_.rows() != m || fill_mask_.cols() != m) {
    throw ConfigError("fill mask shape does not match payoff matrix");
  }
  if (scheme_ && scheme_->size() != static_cast<std::size_t>(m)) {
    throw ConfigError("bin scheme size does not match payoff matrix");
  }
}

double PayoffMatrix::label(std::size_t i) const {
  return scheme_ ? scheme_->midpoint(i) : static_cast<double>(i);
}

namespace {

// Directional tallies: White in bin i, Black in bin j.
struct Tally {
  explicit Tally(std::size_t m) : m(m), score(m * m, 0), count(m * m, 0) {}
  std::size_t m;
  std::vector<std::int64_t> score;
  std::vector<std::int64_t> count;
  std::size_t skipped = 0;
  std::size_t used = 0;

  Tally& operator+=(const Tally& o) {
    for (std::size_t k = 0; k < score.size(); ++k) {
      score[k] += o.score[k];
      count[k] += o.count[k];
    }
    skipped += o.skipped;
    used += o.used;
    return *this;
  }
};

void accumulate(std::span<const GameRecord> records, const BinScheme& scheme,
                Tally& tally) {
  for (const GameRecord& r : records) {
    const auto w = scheme.locate(r.white_rating);
    const auto b = scheme.locate(r.black_rating);
    if (!w || !b) {
      ++tally.skipped;
      continue;
    }
    const std::size_t k = *w * tally.m + *b;
    tally.score[k] += white_score(r.outcome);
    tally.count[k] += 1;
    ++tally.used;
  }
}

}  // namespace

PayoffMatrix build_payoff_matrix(std::span<const GameRecord> records,
                                 const BinScheme& scheme) {
  if (scheme.empty()) throw ConfigError("bin scheme is empty");
  const std::size_t m = scheme.size();

  constexpr std::size_t kRecordsPerWorker = 250000;
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::clamp<std::size_t>(records.size() / kRecordsPerWorker, 1, hw);

  Tally total(m);
  if (workers == 1) {
    accumulate(records, scheme, total);
  } else {
    std::vector<Tally> partial(workers, Tally(m));
    std::vector<std::thread> threads;
    const std::size_t per = (records.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(records.size(), w * per);
      const std::size_t end = std::min(records.size(), begin + per);
      threads.emplace_back([&, w, begin, end] {
        accumulate(records.subspan(begin, end - begin), scheme, partial[w]);
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& p : partial) total += p;
  }
  if (total.used == 0) throw DataError("no in-range records");

  Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(m, m);
  Mask observed = Mask::Constant(m, m, false);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double predicted =
          expected_score(scheme.midpoint(i), scheme.midpoint(j));
      // Bin i holds White.
      const std::int64_t n_ij = total.count[i * m + j];
      const double rs_ij =
          n_ij > 0 ? static_cast<double>(total.score[i * m + j]) / n_ij
                   : predicted;
      // Bin i holds Black; negate White's score to stay on bin i's side.
      const std::int64_t n_ji = total.count[j * m + i];
      const double rs_ji =
          n_ji > 0 ? -static_cast<double>(total.score[j * m + i]) / n_ji
                   : predicted;
      const double value = (rs_ij + rs_ji) / 2.0;
      entries(i, j) = value;
      entries(j, i) = -value;
      const bool both = n_ij > 0 && n_ji > 0;
      observed(i, j) = both;
      observed(j, i) = both;
    }
  }
  return PayoffMatrix(std::move(entries), scheme, std::move(observed),
                      total.skipped);
}

}  // namespace spintop
