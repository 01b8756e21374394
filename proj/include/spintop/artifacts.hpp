#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spintop/cycles.hpp"
#include "spintop/dynamics.hpp"
#include "spintop/equilibrium.hpp"
#include "spintop/fitting.hpp"
#include "spintop/game_record.hpp"
#include "spintop/payoff.hpp"
#include "spintop/pgn.hpp"

namespace spintop {

// Identifies the run that produced an artifact. CSV files carry it on a
// leading "# config_hash=<hex> config=<json>" line, JSON files as top-level
// "config_hash" / "config" members.
struct Provenance {
  std::string config_hash;
  nlohmann::json config = nlohmann::json::object();
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);  // DataError if unreadable

std::string csv_escape(const std::string& cell);
// One RFC-4180 record (no embedded newlines).
std::vector<std::string> parse_csv_line(const std::string& line);

// CSV text split into the provenance line, header and rows.
struct CsvTable {
  std::optional<Provenance> provenance;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable parse_csv(std::istream& in);

// --- records: white_elo,black_elo,outcome,source_tag
std::string records_csv(std::span<const GameRecord> records, const Provenance& prov);
struct RecordFile {
  std::vector<GameRecord> records;
  std::optional<Provenance> provenance;
};
RecordFile read_records_csv(const std::filesystem::path& path);

nlohmann::json parse_stats_json(const ParseStats& stats);

// --- payoff matrix
// m x m grid; the header holds the bin midpoints (or indices).
std::string payoff_csv(const PayoffMatrix& matrix, const Provenance& prov);
struct PayoffCsv {
  std::vector<double> labels;
  Eigen::MatrixXd entries;
};
PayoffCsv read_payoff_csv(std::istream& in);

// {scheme: {edges}, entries, fill_mask, skipped_count} plus provenance and the
// hash of the records the matrix came from.
nlohmann::json payoff_json(const PayoffMatrix& matrix, const Provenance& prov,
                           const std::string& records_hash);
PayoffMatrix payoff_from_json(const nlohmann::json& j);
PayoffMatrix read_payoff_json(const std::filesystem::path& path);

// --- equilibrium / cycles / fitting / dynamics
nlohmann::json clustering_json(const Clustering& clustering,
                               const std::optional<BinScheme>& scheme,
                               const Provenance& prov);
std::string npp_csv(const Eigen::MatrixXd& npp, const Provenance& prov);
std::string cycles_csv(const PayoffMatrix& matrix, const std::vector<std::int64_t>& counts,
                       const Provenance& prov);
std::string histogram_csv(const EloHistogram& histogram, const BinScheme& scheme,
                          const Provenance& prov);
nlohmann::json skew_normal_json(const SkewNormalFit& fit);
nlohmann::json linear_map_json(const LinearMap& map);
std::string trace_csv(const FictitiousPlayRun& run, const PayoffMatrix& matrix,
                      const Provenance& prov);

nlohmann::json with_provenance(nlohmann::json body, const Provenance& prov);

}  // namespace spintop
