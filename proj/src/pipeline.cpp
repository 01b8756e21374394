#include "spintop/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "spintop/artifacts.hpp"
#include "spintop/cycles.hpp"
#include "spintop/dynamics.hpp"
#include "spintop/equilibrium.hpp"
#include "spintop/error.hpp"
#include "spintop/fitting.hpp"
#include "spintop/log.hpp"
#include "spintop/payoff.hpp"
#include "spintop/pgn.hpp"
#include "spintop/sampling.hpp"
#include "spintop/synthetic.hpp"

namespace spintop {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const SolverError*>(&e)) return kExitSolver;
  return kExitData;
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

namespace {

Provenance provenance(const PipelineConfig& config) {
  return Provenance{config_hash(config), to_json(config)};
}

fs::path out(const PipelineConfig& config, const std::string& name) {
  return fs::path(config.out_dir) / name;
}

void write_json(const fs::path& path, const json& j) { write_atomic(path, j.dump(2) + "\n"); }

std::ifstream open_input(const std::string& path) {
  if (!fs::exists(path)) throw DataError("input not found: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input: " + path);
  return in;
}

}  // namespace

void cmd_ingest(const PipelineConfig& config) {
  config.validate();
  if (config.inputs.empty()) throw ConfigError("ingest needs at least one input file");
  const Provenance prov = provenance(config);
  std::vector<GameRecord> records;
  ParseStats total;
  json files = json::array();
  for (const std::string& path : config.inputs) {
    std::ifstream in = open_input(path);
    ParseStats stats;
    auto part = parse_archive(in, fs::path(path).filename().string(), &stats);
    records.insert(records.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    total += stats;
    json f = parse_stats_json(stats);
    f["path"] = path;
    files.push_back(std::move(f));
  }
  if (records.empty()) warn("ingest produced no records");
  write_atomic(out(config, "records.csv"), records_csv(records, prov));
  json report = parse_stats_json(total);
  report["files"] = std::move(files);
  write_json(out(config, "ingest_report.json"), with_provenance(std::move(report), prov));
}

void cmd_sample(const PipelineConfig& config) {
  config.validate();
  if (config.inputs.empty()) throw ConfigError("sample needs at least one month archive");
  const Provenance prov = provenance(config);
  std::vector<std::unique_ptr<std::ifstream>> streams;
  std::vector<MonthArchive> archives;
  for (const std::string& spec : config.inputs) {
    const std::size_t eq = spec.find('=');
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    const std::string month = eq == std::string::npos ? fs::path(path).stem().string()
                                                      : spec.substr(0, eq);
    streams.push_back(std::make_unique<std::ifstream>(open_input(path)));
    archives.push_back(MonthArchive{month, streams.back().get()});
  }
  const ArchiveSample sample = sample_archive_by_month(archives, config.sample);
  write_atomic(out(config, "records.csv"), records_csv(sample.records, prov));
  json months = json::array();
  for (const MonthSample& m : sample.months) {
    json j = parse_stats_json(m.stats);
    j["month"] = m.month_id;
    j["drawn"] = m.drawn;
    j["below_quota"] = m.below_quota;
    months.push_back(std::move(j));
  }
  write_json(out(config, "sample_report.json"),
             with_provenance(json{{"records", sample.records.size()}, {"months", months}}, prov));
}

void cmd_analyze(const PipelineConfig& config, bool force) {
  config.validate();
  const Provenance prov = provenance(config);
  const BinScheme scheme = config.bin_scheme();
  const fs::path records_path = config.records_path();
  if (!fs::exists(records_path)) throw DataError("record file not found: " + records_path.string());
  const std::string records_hash = fnv1a_hex(read_file(records_path));

  const fs::path payoff_path = out(config, "payoff.json");
  if (!force && fs::exists(payoff_path)) {
    json previous;
    try {
      previous = json::parse(read_file(payoff_path));
    } catch (const json::exception&) {
      throw ConfigError(payoff_path.string() + " exists but is unreadable; use --force");
    }
    const bool same_records = previous.value("records_hash", std::string()) == records_hash;
    const bool same_scheme = previous.contains("scheme") && previous["scheme"].is_object() &&
                             previous["scheme"].value("edges", std::vector<double>()) ==
                                 scheme.edges();
    if (!same_records || !same_scheme) {
      throw ConfigError("refusing to mix artifacts: " + config.out_dir +
                        " holds an analysis of a different record file or bin scheme "
                        "(use --force to overwrite)");
    }
  }

  const RecordFile records = read_records_csv(records_path);
  const PayoffMatrix matrix = build_payoff_matrix(records.records, scheme);
  write_atomic(out(config, "payoff.csv"), payoff_csv(matrix, prov));
  write_json(payoff_path, payoff_json(matrix, prov, records_hash));

  write_atomic(out(config, "histogram.csv"),
               histogram_csv(elo_histogram(records.records, scheme), scheme, prov));

  const auto counts = rps_cycle_counts(to_adjacency(matrix));
  write_atomic(out(config, "cycles.csv"), cycles_csv(matrix, counts, prov));

  const Clustering clustering = nash_clustering(matrix, config.solver);
  write_json(out(config, "clustering.json"), clustering_json(clustering, scheme, prov));
  write_atomic(out(config, "npp.csv"), npp_csv(npp_matrix(clustering), prov));

  // Cluster size against mean Elo; the fit needs at least five clusters.
  std::vector<Point> points;
  for (const auto& c : clustering.clusters()) {
    points.push_back({ts_cluster_elo(clustering, scheme, c.ordinal),
                      static_cast<double>(c.members.size())});
  }
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  json fit{{"points", json::array()}};
  std::vector<double> sizes;
  for (const Point& p : points) {
    fit["points"].push_back({{"ts_elo", p.x}, {"size", p.y}});
    sizes.push_back(p.y);
  }
  fit["profile_unimodal"] = is_unimodal(sizes);
  if (points.size() >= 5) {
    fit["skew_normal"] = skew_normal_json(fit_skew_normal(points));
  } else {
    warn("only " + std::to_string(points.size()) + " clusters; skew-normal fit skipped");
    fit["skew_normal"] = nullptr;
  }
  write_json(out(config, "fit.json"), with_provenance(std::move(fit), prov));

  write_json(out(config, "summary.json"),
             with_provenance(json{{"records", records.records.size()},
                                  {"skipped_out_of_range", matrix.skipped_count()},
                                  {"strategies", matrix.size()},
                                  {"clusters", clustering.size()},
                                  {"rps_cycles_total", total_rps_cycles(counts)},
                                  {"records_hash", records_hash}},
                             prov));
}

void cmd_cycles(const PipelineConfig& config) {
  config.validate();
  const Provenance prov = provenance(config);
  const PayoffMatrix matrix = read_payoff_json(config.payoff_path());
  const auto counts = rps_cycle_counts(to_adjacency(matrix));
  write_atomic(out(config, "cycles.csv"), cycles_csv(matrix, counts, prov));
  write_json(out(config, "cycles_summary.json"),
             with_provenance(json{{"strategies", matrix.size()},
                                  {"rps_cycles_total", total_rps_cycles(counts)}},
                             prov));
}

void cmd_fplay(const PipelineConfig& config) {
  config.validate();
  const Provenance prov = provenance(config);
  const PayoffMatrix matrix = read_payoff_json(config.payoff_path());
  const std::size_t m = matrix.size();
  const std::size_t max_iters = config.max_iters ? config.max_iters : 4 * m * m;
  const auto runs = run_fictitious_play(matrix.entries(), config.k_list, max_iters,
                                        config.allocation);
  json summary{{"allocation", to_string(config.allocation)},
               {"max_iters", max_iters},
               {"runs", json::array()}};
  try {
    summary["top_cluster_wr"] = top_cluster_wr(nash_clustering(matrix, config.solver));
  } catch (const SolverError& e) {
    warn(std::string("top-cluster WR unavailable: ") + e.what());
    summary["top_cluster_wr"] = nullptr;
  }
  for (const auto& [k, run] : runs) {
    json r{{"k", k}, {"converged", run.converged}};
    if (run.error) {
      warn("fictitious play with k=" + std::to_string(k) + " failed: " + *run.error);
      r["error"] = *run.error;
    } else {
      write_atomic(out(config, "fplay_k" + std::to_string(k) + ".csv"),
                   trace_csv(run, matrix, prov));
      r["iterations"] = run.trace.back().iteration;
      r["final_wr"] = run.trace.back().wr;
      r["final_members"] = run.final_members;
    }
    summary["runs"].push_back(std::move(r));
  }
  write_json(out(config, "fplay_summary.json"), with_provenance(std::move(summary), prov));
}

void cmd_fit_ratings(const PipelineConfig& config) {
  config.validate();
  if (config.ratings.empty()) throw ConfigError("fit-ratings needs a ratings table");
  const Provenance prov = provenance(config);
  std::ifstream in = open_input(config.ratings);
  const RatingTable table = read_rating_table(in);
  using S = RatingTable::System;

  json maps = json::object();
  auto fit = [&](S from, S to) {
    const LinearMap map = fit_linear_map(table.pairs(from, to));
    maps[std::string(to_string(from)) + "_to_" + to_string(to)] = linear_map_json(map);
    return map;
  };
  const LinearMap l2u = fit(S::Lichess, S::Uscf);
  const LinearMap u2f = fit(S::Uscf, S::Fide);
  const LinearMap l2f = fit(S::Lichess, S::Fide);

  // Direct versus chained translation over the observed Lichess range.
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& v : table.lichess) {
    if (v) {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  }
  double max_gap = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = lo + (hi - lo) * i / 100.0;
    max_gap = std::max(max_gap, std::abs(l2f.translate(x) - u2f.translate(l2u.translate(x))));
  }
  const double budget = l2f.residual_std + u2f.residual_std + std::abs(u2f.slope) * l2u.residual_std;
  write_json(out(config, "rating_maps.json"),
             with_provenance(json{{"maps", maps},
                                  {"composition",
                                   {{"max_gap", max_gap},
                                    {"residual_budget", budget},
                                    {"consistent", max_gap <= budget}}}},
                             prov));
}

void cmd_synth(const PipelineConfig& config) {
  config.validate();
  const Provenance prov = provenance(config);
  const PayoffMatrix matrix = generate_synthetic(config.synth, config.synth_seed);
  write_atomic(out(config, "payoff.csv"), payoff_csv(matrix, prov));
  write_json(out(config, "payoff.json"),
             payoff_json(matrix, prov, "synthetic:" + std::to_string(config.synth_seed)));
}

}  // namespace spintop
