#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spintop/bins.hpp"
#include "spintop/dynamics.hpp"
#include "spintop/equilibrium.hpp"
#include "spintop/sampling.hpp"
#include "spintop/synthetic.hpp"

namespace spintop {

// Everything a pipeline run depends on. Serialises to a JSON object whose
// canonical dump is hashed and embedded in every artifact.
struct PipelineConfig {
  // PGN files for `ingest`; month archives for `sample` written as
  // "<month-id>=<path>" or a bare path (month id = file stem).
  std::vector<std::string> inputs;
  std::string records;  // record file for analyze (default <out_dir>/records.csv)
  std::string payoff;   // payoff JSON for cycles/fplay (default <out_dir>/payoff.json)
  std::string ratings;  // lichess,uscf,fide table for fit-ratings

  double bin_lo = 600.0;
  double bin_hi = 2900.0;
  double bin_width = 10.0;

  SamplePlan sample;
  SolverOptions solver;

  std::vector<std::size_t> k_list{1, 2, 5, 10, 20, 50};
  std::size_t max_iters = 0;  // 0 = 4 m^2
  Allocation allocation = Allocation::Uniform;

  SyntheticSpec synth{{1, 3, 5, 3, 1}, IntraLayer::RpsLike, 0.5, 1000.0, 100.0};
  std::uint64_t synth_seed = 0;

  std::string out_dir = "out";

  BinScheme bin_scheme() const { return make_bin_scheme(bin_lo, bin_hi, bin_width); }
  std::filesystem::path records_path() const;
  std::filesystem::path payoff_path() const;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

nlohmann::json to_json(const PipelineConfig& config);
// Missing keys keep their defaults; unknown keys are rejected (ConfigError).
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

// 64-bit FNV-1a of the canonical (sorted-key, compact) JSON dump, as 16 hex
// digits.
std::string fnv1a_hex(std::string_view bytes);
std::string config_hash(const PipelineConfig& config);

// Comma-separated list of positive integers, e.g. "1,3,5".
std::vector<std::size_t> parse_size_list(const std::string& text);
// "lo:hi" or "lo,hi".
std::pair<double, double> parse_range(const std::string& text);

}  // namespace spintop
