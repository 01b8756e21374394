#include "spintop/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>

#include "spintop/error.hpp"

namespace spintop {

using nlohmann::json;

std::filesystem::path PipelineConfig::records_path() const {
  return records.empty() ? std::filesystem::path(out_dir) / "records.csv"
                         : std::filesystem::path(records);
}

std::filesystem::path PipelineConfig::payoff_path() const {
  return payoff.empty() ? std::filesystem::path(out_dir) / "payoff.json"
                        : std::filesystem::path(payoff);
}

void PipelineConfig::validate() const {
  if (!(bin_width > 0.0)) throw ConfigError("bin width must be positive");
  if (!(bin_hi - bin_lo >= 2.0 * bin_width)) {
    throw ConfigError("bin range must span at least two bins");
  }
  sample.validate();
  if (!(solver.support_threshold > 0.0) || !(solver.feasibility_tol > 0.0) ||
      !(solver.kkt_tol > 0.0) || !(solver.kkt_accept >= solver.kkt_tol) ||
      solver.max_iterations <= 0) {
    throw ConfigError("invalid solver tolerances");
  }
  for (std::size_t k : k_list) {
    if (k == 0) throw ConfigError("population sizes must be positive");
  }
  synth.validate();
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

json to_json(const PipelineConfig& c) {
  return json{
      {"inputs", c.inputs},
      {"records", c.records},
      {"payoff", c.payoff},
      {"ratings", c.ratings},
      {"bins", {{"lo", c.bin_lo}, {"hi", c.bin_hi}, {"width", c.bin_width}}},
      {"sample",
       {{"quota", c.sample.per_month_quota},
        {"chunk_size", c.sample.chunk_size},
        {"seed", c.sample.seed}}},
      {"solver",
       {{"support_threshold", c.solver.support_threshold},
        {"feasibility_tol", c.solver.feasibility_tol},
        {"kkt_tol", c.solver.kkt_tol},
        {"kkt_accept", c.solver.kkt_accept},
        {"max_iterations", c.solver.max_iterations}}},
      {"fplay",
       {{"k_list", c.k_list},
        {"max_iters", c.max_iters},
        {"allocation", to_string(c.allocation)}}},
      {"synth",
       {{"layers", c.synth.layer_sizes},
        {"intra", to_string(c.synth.intra)},
        {"margin", c.synth.margin},
        {"base_elo", c.synth.base_elo},
        {"bin_width", c.synth.bin_width},
        {"shuffle_labels", c.synth.shuffle_labels},
        {"seed", c.synth_seed}}},
      {"out_dir", c.out_dir},
  };
}

namespace {

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!ok.count(item.key())) {
      throw ConfigError("unknown config key '" + where + item.key() + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + key + "' has the wrong type");
  }
}

}  // namespace

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  check_keys(j, "", {"inputs", "records", "payoff", "ratings", "bins", "sample",
                     "solver", "fplay", "synth", "out_dir"});
  read(j, "inputs", c.inputs, "");
  read(j, "records", c.records, "");
  read(j, "payoff", c.payoff, "");
  read(j, "ratings", c.ratings, "");
  read(j, "out_dir", c.out_dir, "");
  if (j.contains("bins")) {
    const json& b = j["bins"];
    check_keys(b, "bins.", {"lo", "hi", "width"});
    read(b, "lo", c.bin_lo, "bins.");
    read(b, "hi", c.bin_hi, "bins.");
    read(b, "width", c.bin_width, "bins.");
  }
  if (j.contains("sample")) {
    const json& s = j["sample"];
    check_keys(s, "sample.", {"quota", "chunk_size", "seed"});
    read(s, "quota", c.sample.per_month_quota, "sample.");
    read(s, "chunk_size", c.sample.chunk_size, "sample.");
    read(s, "seed", c.sample.seed, "sample.");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, "solver.", {"support_threshold", "feasibility_tol", "kkt_tol",
                              "kkt_accept", "max_iterations"});
    read(s, "support_threshold", c.solver.support_threshold, "solver.");
    read(s, "feasibility_tol", c.solver.feasibility_tol, "solver.");
    read(s, "kkt_tol", c.solver.kkt_tol, "solver.");
    read(s, "kkt_accept", c.solver.kkt_accept, "solver.");
    read(s, "max_iterations", c.solver.max_iterations, "solver.");
  }
  if (j.contains("fplay")) {
    const json& f = j["fplay"];
    check_keys(f, "fplay.", {"k_list", "max_iters", "allocation"});
    read(f, "k_list", c.k_list, "fplay.");
    read(f, "max_iters", c.max_iters, "fplay.");
    std::string alloc = to_string(c.allocation);
    read(f, "allocation", alloc, "fplay.");
    c.allocation = allocation_from_string(alloc);
  }
  if (j.contains("synth")) {
    const json& s = j["synth"];
    check_keys(s, "synth.", {"layers", "intra", "margin", "base_elo", "bin_width",
                              "shuffle_labels", "seed"});
    read(s, "layers", c.synth.layer_sizes, "synth.");
    std::string intra = to_string(c.synth.intra);
    read(s, "intra", intra, "synth.");
    c.synth.intra = intra_layer_from_string(intra);
    read(s, "margin", c.synth.margin, "synth.");
    read(s, "base_elo", c.synth.base_elo, "synth.");
    read(s, "bin_width", c.synth.bin_width, "synth.");
    read(s, "shuffle_labels", c.synth.shuffle_labels, "synth.");
    read(s, "seed", c.synth_seed, "synth.");
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const PipelineConfig& config) {
  return fnv1a_hex(to_json(config).dump());
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || v == 0) {
      throw ConfigError("expected a comma-separated list of positive integers, got '" +
                        text + "'");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

std::pair<double, double> parse_range(const std::string& text) {
  const std::size_t sep = text.find_first_of(":,");
  auto number = [&](const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("expected a range lo:hi, got '" + text + "'");
    }
    return v;
  };
  if (sep == std::string::npos) throw ConfigError("expected a range lo:hi, got '" + text + "'");
  return {number(text.substr(0, sep)), number(text.substr(sep + 1))};
}

}  // namespace spintop
