#include "spintop/sampling.hpp"

#include <future>
#include <thread>

#include "spintop/log.hpp"

namespace spintop {

void SamplePlan::validate() const {
  if (per_month_quota == 0) throw ConfigError("per-month quota must be >= 1");
  if (chunk_size < per_month_quota) {
    throw ConfigError("chunk size (" + std::to_string(chunk_size) +
                      ") must be >= per-month quota (" +
                      std::to_string(per_month_quota) + ")");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  // splitmix64 finaliser
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

struct MonthResult {
  std::vector<GameRecord> records;
  MonthSample summary;
};

MonthResult sample_month(const MonthArchive& archive, const SamplePlan& plan) {
  if (archive.stream == nullptr) {
    throw DataError("month '" + archive.month_id + "' has no stream");
  }
  PgnReader reader(*archive.stream, archive.month_id);
  TwoStageSampler<GameRecord> sampler(plan.per_month_quota, plan.chunk_size,
                                      derive_seed(plan.seed, archive.month_id));
  while (auto record = reader.next()) sampler.push(std::move(*record));

  MonthResult result;
  result.records = sampler.finish();
  result.summary.month_id = archive.month_id;
  result.summary.stats = reader.stats();
  result.summary.drawn = result.records.size();
  result.summary.below_quota = reader.stats().records < plan.per_month_quota;
  return result;
}

}  // namespace

ArchiveSample sample_archive_by_month(std::span<const MonthArchive> archives,
                                      const SamplePlan& plan) {
  if (archives.empty()) throw ConfigError("no monthly archives given");
  plan.validate();

  std::vector<const MonthArchive*> ordered;
  for (const auto& a : archives) ordered.push_back(&a);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const MonthArchive* a, const MonthArchive* b) {
                     return a->month_id < b->month_id;
                   });

  const std::size_t workers =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<MonthResult> results(ordered.size());
  for (std::size_t begin = 0; begin < ordered.size(); begin += workers) {
    const std::size_t end = std::min(ordered.size(), begin + workers);
    std::vector<std::future<MonthResult>> jobs;
    for (std::size_t i = begin; i < end; ++i) {
      jobs.push_back(std::async(std::launch::async, sample_month,
                                std::cref(*ordered[i]), std::cref(plan)));
    }
    for (std::size_t i = begin; i < end; ++i) results[i] = jobs[i - begin].get();
  }

  ArchiveSample out;
  for (auto& r : results) {
    if (r.summary.below_quota) {
      warn("month '" + r.summary.month_id + "' has " +
           std::to_string(r.summary.stats.records) +
           " usable games, below the quota of " +
           std::to_string(plan.per_month_quota) + "; keeping all of them");
    }
    out.records.insert(out.records.end(),
                       std::make_move_iterator(r.records.begin()),
                       std::make_move_iterator(r.records.end()));
    out.months.push_back(std::move(r.summary));
  }
  return out;
}

}  // namespace spintop
