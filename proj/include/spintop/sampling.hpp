#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spintop/error.hpp"
#include "spintop/game_record.hpp"
#include "spintop/pgn.hpp"

namespace spintop {

struct SamplePlan {
  std::size_t per_month_quota = 120000;
  std::size_t chunk_size = 1000000;
  std::uint64_t seed = 0;

  // Throws ConfigError unless quota >= 1 and chunk_size >= quota.
  void validate() const;
};

// Derives an independent stream seed for a named unit of work (e.g. a month).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

// Streaming two-stage uniform sampler. Items arrive in chunks of `chunk_size`;
// each chunk keeps a reservoir of `d` items, and finish() draws `d` items
// uniformly from the pooled reservoirs. A trailing short chunk of h' items
// contributes min(d, h') reservoir entries.
template <class T>
class TwoStageSampler {
 public:
  TwoStageSampler(std::size_t d, std::size_t chunk_size, std::uint64_t seed)
      : d_(d), chunk_size_(chunk_size), rng_(seed) {
    if (d_ == 0) throw ConfigError("sample size must be positive");
    if (chunk_size_ < d_) {
      throw ConfigError("chunk size must be at least the sample size");
    }
    reservoir_.reserve(d_);
  }

  void push(T item) {
    const std::size_t position = seen_++;
    if (in_chunk_ < d_) {
      reservoir_.emplace_back(position, std::move(item));
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, in_chunk_);
      const std::size_t slot = pick(rng_);
      if (slot < d_) reservoir_[slot] = {position, std::move(item)};
    }
    if (++in_chunk_ == chunk_size_) flush_chunk();
  }

  std::size_t seen() const { return seen_; }

  // Returns min(d, seen) items ordered by arrival position.
  std::vector<T> finish() {
    flush_chunk();
    const std::size_t take = std::min(d_, pool_.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool_.size() - 1);
      std::swap(pool_[i], pool_[pick(rng_)]);
    }
    pool_.resize(take);
    std::sort(pool_.begin(), pool_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<T> out;
    out.reserve(take);
    for (auto& entry : pool_) out.push_back(std::move(entry.second));
    pool_.clear();
    return out;
  }

 private:
  void flush_chunk() {
    for (auto& entry : reservoir_) pool_.push_back(std::move(entry));
    reservoir_.clear();
    in_chunk_ = 0;
  }

  std::size_t d_;
  std::size_t chunk_size_;
  std::mt19937_64 rng_;
  std::size_t seen_ = 0;
  std::size_t in_chunk_ = 0;
  std::vector<std::pair<std::size_t, T>> reservoir_;
  std::vector<std::pair<std::size_t, T>> pool_;
};

// Draws exactly d elements of `universe` (order preserved). Chunk size comes
// from plan.chunk_size and must be >= d.
template <class T>
std::vector<T> two_stage_sample(std::span<const T> universe, std::size_t d,
                                const SamplePlan& plan) {
  if (d > universe.size()) throw ConfigError("sample larger than universe");
  TwoStageSampler<T> sampler(d, plan.chunk_size, plan.seed);
  for (const T& item : universe) sampler.push(item);
  return sampler.finish();
}

struct MonthArchive {
  std::string month_id;  // sortable, e.g. "2019-01"
  std::istream* stream = nullptr;
};

struct MonthSample {
  std::string month_id;
  ParseStats stats;
  std::size_t drawn = 0;
  bool below_quota = false;
};

struct ArchiveSample {
  std::vector<GameRecord> records;  // months in chronological order
  std::vector<MonthSample> months;
};

// Parses each month and keeps min(quota, available) records from it. Months
// run concurrently; the result does not depend on scheduling.
ArchiveSample sample_archive_by_month(std::span<const MonthArchive> archives,
                                      const SamplePlan& plan);

}  // namespace spintop
