#include "spintop/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <system_error>

#include "spintop/error.hpp"

namespace spintop {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("cannot format double");
  return std::string(buf, ptr);
}

namespace {

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(what + ": bad number '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const std::string& what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(what + ": bad integer '" + s + "'");
  }
  return v;
}

std::string preamble(const Provenance& prov) {
  return "# config_hash=" + prov.config_hash + " config=" + prov.config.dump() + "\n";
}

std::optional<Provenance> parse_preamble(const std::string& line) {
  static const std::string kHash = "# config_hash=";
  if (line.rfind(kHash, 0) != 0) return std::nullopt;
  Provenance p;
  const std::size_t sp = line.find(' ', kHash.size());
  p.config_hash = line.substr(kHash.size(), sp - kHash.size());
  static const std::string kConfig = " config=";
  if (sp != std::string::npos && line.compare(sp, kConfig.size(), kConfig) == 0) {
    try {
      p.config = json::parse(line.substr(sp + kConfig.size()));
    } catch (const json::exception&) {
      throw DataError("malformed provenance line");
    }
  }
  return p;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  out += '\n';
  return out;
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw DataError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw DataError("cannot move " + tmp.string() + " to " + path.string() + ": " +
                    ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError("read failed for " + path.string());
  return ss.str();
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw DataError("unterminated quote in CSV line");
  cells.push_back(std::move(cell));
  return cells;
}

CsvTable parse_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header && !line.empty() && line[0] == '#') {
      if (auto p = parse_preamble(line)) t.provenance = std::move(p);
      continue;
    }
    if (line.empty()) continue;
    if (!have_header) {
      t.header = parse_csv_line(line);
      have_header = true;
    } else {
      t.rows.push_back(parse_csv_line(line));
    }
  }
  if (in.bad()) throw DataError("CSV read failed");
  if (!have_header) throw DataError("CSV has no header row");
  return t;
}

std::string records_csv(std::span<const GameRecord> records, const Provenance& prov) {
  std::string out = preamble(prov);
  out += "white_elo,black_elo,outcome,source_tag\n";
  for (const GameRecord& r : records) {
    out += std::to_string(r.white_rating);
    out += ',';
    out += std::to_string(r.black_rating);
    out += ',';
    out += std::to_string(white_score(r.outcome));
    out += ',';
    out += csv_escape(r.source_tag);
    out += '\n';
  }
  return out;
}

RecordFile read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open record file " + path.string());
  const CsvTable t = parse_csv(in);
  const std::vector<std::string> expected{"white_elo", "black_elo", "outcome", "source_tag"};
  if (t.header != expected) {
    throw DataError(path.string() + ": expected header white_elo,black_elo,outcome,source_tag");
  }
  RecordFile f;
  f.provenance = t.provenance;
  f.records.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::string where = path.string() + " row " + std::to_string(i + 1);
    if (row.size() != 4) throw DataError(where + ": expected 4 columns");
    GameRecord r;
    r.white_rating = static_cast<int>(parse_int(row[0], where));
    r.black_rating = static_cast<int>(parse_int(row[1], where));
    const auto outcome = outcome_from_score(static_cast<int>(parse_int(row[2], where)));
    if (!outcome) throw DataError(where + ": outcome must be 1, 0 or -1");
    if (r.white_rating <= 0 || r.black_rating <= 0) {
      throw DataError(where + ": ratings must be positive");
    }
    r.outcome = *outcome;
    r.source_tag = row[3];
    f.records.push_back(std::move(r));
  }
  return f;
}

json parse_stats_json(const ParseStats& s) {
  return json{{"games", s.games},
              {"records", s.records},
              {"skipped",
               {{"malformed", s.skipped_malformed},
                {"missing_tag", s.skipped_missing_tag},
                {"result", s.skipped_result},
                {"rating", s.skipped_rating}}}};
}

std::string payoff_csv(const PayoffMatrix& matrix, const Provenance& prov) {
  std::string out = preamble(prov);
  const std::size_t m = matrix.size();
  for (std::size_t j = 0; j < m; ++j) {
    if (j) out += ',';
    out += format_double(matrix.label(j));
  }
  out += '\n';
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j) out += ',';
      out += format_double(matrix(i, j));
    }
    out += '\n';
  }
  return out;
}

PayoffCsv read_payoff_csv(std::istream& in) {
  const CsvTable t = parse_csv(in);
  const std::size_t m = t.header.size();
  if (t.rows.size() != m) throw DataError("payoff CSV is not square");
  PayoffCsv p;
  for (const auto& h : t.header) p.labels.push_back(parse_double(h, "payoff CSV header"));
  p.entries.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (t.rows[i].size() != m) throw DataError("payoff CSV is not square");
    for (std::size_t j = 0; j < m; ++j) {
      p.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_double(t.rows[i][j], "payoff CSV");
    }
  }
  return p;
}

json with_provenance(json body, const Provenance& prov) {
  body["config_hash"] = prov.config_hash;
  body["config"] = prov.config;
  return body;
}

json payoff_json(const PayoffMatrix& matrix, const Provenance& prov,
                 const std::string& records_hash) {
  const std::size_t m = matrix.size();
  json entries = json::array(), mask = json::array();
  for (std::size_t i = 0; i < m; ++i) {
    json row = json::array(), mrow = json::array();
    for (std::size_t j = 0; j < m; ++j) {
      row.push_back(matrix(i, j));
      mrow.push_back(matrix.observed(i, j) ? 1 : 0);
    }
    entries.push_back(std::move(row));
    mask.push_back(std::move(mrow));
  }
  json body{{"entries", std::move(entries)},
            {"fill_mask", std::move(mask)},
            {"skipped_count", matrix.skipped_count()},
            {"records_hash", records_hash}};
  body["scheme"] = matrix.scheme() ? json{{"edges", matrix.scheme()->edges()}} : json(nullptr);
  return with_provenance(std::move(body), prov);
}

PayoffMatrix payoff_from_json(const json& j) {
  try {
    const auto& rows = j.at("entries");
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd e(m, m);
    Mask mask = Mask::Constant(m, m, false);
    const json* mask_rows = j.contains("fill_mask") ? &j.at("fill_mask") : nullptr;
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(row.size()) != m) throw DataError("payoff JSON is not square");
      for (Eigen::Index k = 0; k < m; ++k) {
        e(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
        if (mask_rows) {
          mask(i, k) = mask_rows->at(static_cast<std::size_t>(i))
                           .at(static_cast<std::size_t>(k))
                           .get<int>() != 0;
        }
      }
    }
    std::optional<BinScheme> scheme;
    if (j.contains("scheme") && !j.at("scheme").is_null()) {
      scheme = BinScheme(j.at("scheme").at("edges").get<std::vector<double>>());
      if (scheme->size() != static_cast<std::size_t>(m)) {
        throw DataError("payoff JSON scheme size does not match the matrix");
      }
    }
    const auto skipped = j.value("skipped_count", std::size_t{0});
    return PayoffMatrix(std::move(e), std::move(scheme), std::move(mask), skipped);
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed payoff JSON: ") + ex.what());
  } catch (const ConfigError& ex) {
    throw DataError(std::string("invalid payoff JSON: ") + ex.what());
  }
}

PayoffMatrix read_payoff_json(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return payoff_from_json(j);
}

json clustering_json(const Clustering& clustering, const std::optional<BinScheme>& scheme,
                     const Provenance& prov) {
  const auto profile = cluster_profile(clustering, scheme ? &*scheme : nullptr);
  json clusters = json::array();
  for (const auto& c : clustering.clusters()) {
    const auto& e = profile[c.ordinal - 1];
    json probs = json::array();
    for (std::size_t s : c.members) probs.push_back(c.ne[s]);
    json item{{"ordinal", c.ordinal},
              {"member_bin_indices", c.members},
              {"ne_probabilities", std::move(probs)},
              {"size", e.size},
              {"ts_winrate", e.ts_npp_winrate},
              {"ts_rpp_winrate", e.ts_rpp_winrate},
              {"npp_row", e.npp_row}};
    item["ts_elo"] = e.ts_elo ? json(*e.ts_elo) : json(nullptr);
    if (scheme) {
      json mids = json::array();
      for (std::size_t s : c.members) mids.push_back(scheme->midpoint(s));
      item["member_midpoints"] = std::move(mids);
    }
    clusters.push_back(std::move(item));
  }

  // Ordinals sorted for the two transitive-strength axes (strongest first;
  // ties keep ordinal order).
  std::vector<std::size_t> by_elo(profile.size()), by_wr(profile.size());
  std::iota(by_elo.begin(), by_elo.end(), std::size_t{1});
  std::iota(by_wr.begin(), by_wr.end(), std::size_t{1});
  std::stable_sort(by_wr.begin(), by_wr.end(), [&](std::size_t a, std::size_t b) {
    return profile[a - 1].ts_npp_winrate > profile[b - 1].ts_npp_winrate;
  });
  json body{{"strategy_count", clustering.strategy_count()},
            {"cluster_count", clustering.size()},
            {"clusters", std::move(clusters)},
            {"order_by_ts_winrate", by_wr}};
  if (scheme) {
    std::stable_sort(by_elo.begin(), by_elo.end(), [&](std::size_t a, std::size_t b) {
      return *profile[a - 1].ts_elo > *profile[b - 1].ts_elo;
    });
    body["order_by_ts_elo"] = by_elo;
  } else {
    body["order_by_ts_elo"] = nullptr;
  }
  return with_provenance(std::move(body), prov);
}

std::string npp_csv(const Eigen::MatrixXd& npp, const Provenance& prov) {
  std::string out = preamble(prov);
  out += "cluster";
  for (Eigen::Index j = 0; j < npp.cols(); ++j) out += "," + std::to_string(j + 1);
  out += '\n';
  for (Eigen::Index i = 0; i < npp.rows(); ++i) {
    out += std::to_string(i + 1);
    for (Eigen::Index j = 0; j < npp.cols(); ++j) out += "," + format_double(npp(i, j));
    out += '\n';
  }
  return out;
}

std::string cycles_csv(const PayoffMatrix& matrix, const std::vector<std::int64_t>& counts,
                       const Provenance& prov) {
  std::string out = preamble(prov);
  out += "strategy,bin_midpoint,cycle_count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out += std::to_string(i) + "," + format_double(matrix.label(i)) + "," +
           std::to_string(counts[i]) + "\n";
  }
  return out;
}

std::string histogram_csv(const EloHistogram& h, const BinScheme& scheme,
                          const Provenance& prov) {
  std::string out = preamble(prov);
  out += "bin_lower,bin_upper,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const EloBin b = scheme.bin(i);
    out += join_row({format_double(b.lower), format_double(b.upper), std::to_string(h.counts[i])});
  }
  out += join_row({"", "", std::to_string(h.overflow)});  // out-of-range ratings
  return out;
}

json skew_normal_json(const SkewNormalFit& f) {
  return json{{"amplitude", f.amplitude}, {"location", f.location}, {"scale", f.scale},
              {"shape", f.shape},         {"mse", f.mse},           {"peak_x", f.peak_x}};
}

json linear_map_json(const LinearMap& m) {
  return json{{"slope", m.slope},
              {"intercept", m.intercept},
              {"r_squared", m.r_squared},
              {"residual_std", m.residual_std},
              {"n", m.n}};
}

std::string trace_csv(const FictitiousPlayRun& run, const PayoffMatrix& matrix,
                      const Provenance& prov) {
  std::string out = preamble(prov);
  out += "iteration,wr,population_member_midpoints\n";
  for (const TracePoint& p : run.trace) {
    std::string members;
    for (std::size_t i = 0; i < p.members.size(); ++i) {
      if (i) members += ';';
      members += format_double(matrix.label(p.members[i]));
    }
    out += join_row({std::to_string(p.iteration), format_double(p.wr), members});
  }
  return out;
}

}  // namespace spintop
