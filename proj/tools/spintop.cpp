// Command-line front end: one subcommand per pipeline stage.
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "spintop/config.hpp"
#include "spintop/error.hpp"
#include "spintop/pipeline.hpp"

namespace {

struct Overrides {
  std::string config_file;
  std::vector<std::string> inputs;
  std::optional<double> bin_width;
  std::optional<std::string> bin_range;
  std::optional<std::size_t> quota;
  std::optional<std::size_t> chunk_size;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> k_list;
  std::optional<std::size_t> max_iters;
  std::optional<std::string> allocation;
  std::optional<std::string> out_dir;
  std::optional<std::string> records;
  std::optional<std::string> payoff;
  std::optional<std::string> ratings;
  std::optional<std::string> layers;
  std::optional<std::string> intra;
  std::optional<double> margin;
  bool force = false;
  bool shuffle = false;
};

spintop::PipelineConfig resolve(const Overrides& o, const std::string& command) {
  using namespace spintop;
  PipelineConfig c = o.config_file.empty() ? PipelineConfig{} : load_config(o.config_file);
  if (!o.inputs.empty()) c.inputs = o.inputs;
  if (o.bin_width) c.bin_width = *o.bin_width;
  if (o.bin_range) std::tie(c.bin_lo, c.bin_hi) = parse_range(*o.bin_range);
  if (o.quota) c.sample.per_month_quota = *o.quota;
  if (o.chunk_size) c.sample.chunk_size = *o.chunk_size;
  if (o.seed) (command == "synth" ? c.synth_seed : c.sample.seed) = *o.seed;
  if (o.k_list) c.k_list = parse_size_list(*o.k_list);
  if (o.max_iters) c.max_iters = *o.max_iters;
  if (o.allocation) c.allocation = allocation_from_string(*o.allocation);
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.records) c.records = *o.records;
  if (o.payoff) c.payoff = *o.payoff;
  if (o.ratings) c.ratings = *o.ratings;
  if (o.layers) c.synth.layer_sizes = parse_size_list(*o.layers);
  if (o.intra) c.synth.intra = intra_layer_from_string(*o.intra);
  if (o.margin) c.synth.margin = *o.margin;
  if (o.shuffle) c.synth.shuffle_labels = true;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure non-transitivity in rated match data"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_file, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--bin-width", o.bin_width, "Elo bin width");
  app.add_option("--bin-range", o.bin_range, "Elo range lo:hi");
  app.add_option("--quota", o.quota, "records sampled per month");
  app.add_option("--chunk-size", o.chunk_size, "sampling chunk size");
  app.add_option("--seed", o.seed, "sampling seed (synth: generator seed)");
  app.add_option("--k-list", o.k_list, "population sizes, e.g. 1,5,10");
  app.add_option("--max-iters", o.max_iters, "fictitious-play iteration cap (0 = 4 m^2)");
  app.add_option("--allocation", o.allocation, "population allocation: uniform or nash");
  app.add_option("--out-dir", o.out_dir, "output directory");

  auto* ingest = app.add_subcommand("ingest", "parse PGN files into a record file");
  ingest->add_option("inputs", o.inputs, "PGN files")->required();
  auto* sample = app.add_subcommand("sample", "two-stage sample of monthly PGN archives");
  sample->add_option("inputs", o.inputs, "month archives as [month=]path")->required();
  auto* analyze = app.add_subcommand("analyze", "payoff matrix, clustering, cycles and fit");
  analyze->add_option("--records", o.records, "record file (default <out-dir>/records.csv)");
  analyze->add_flag("--force", o.force, "overwrite an analysis of different inputs");
  auto* cycles = app.add_subcommand("cycles", "RPS cycle counts of a payoff matrix");
  cycles->add_option("--payoff", o.payoff, "payoff JSON (default <out-dir>/payoff.json)");
  auto* fplay = app.add_subcommand("fplay", "fixed-memory fictitious play");
  fplay->add_option("--payoff", o.payoff, "payoff JSON (default <out-dir>/payoff.json)");
  auto* fit = app.add_subcommand("fit-ratings", "linear maps between rating systems");
  fit->add_option("ratings", o.ratings, "CSV with columns lichess,uscf,fide")->required();
  auto* synth = app.add_subcommand("synth", "layered synthetic payoff matrix");
  synth->add_option("--layers", o.layers, "layer sizes, strongest first (e.g. 1,3,5,3,1)");
  synth->add_option("--intra", o.intra, "rps_like or draws");
  synth->add_option("--margin", o.margin, "inter-layer payoff in (0, 1]");
  synth->add_flag("--shuffle", o.shuffle, "permute each cyclic layer using --seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : spintop::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return spintop::run_guarded([&] {
    const spintop::PipelineConfig config = resolve(o, command);
    if (command == "ingest") spintop::cmd_ingest(config);
    else if (command == "sample") spintop::cmd_sample(config);
    else if (command == "analyze") spintop::cmd_analyze(config, o.force);
    else if (command == "cycles") spintop::cmd_cycles(config);
    else if (command == "fplay") spintop::cmd_fplay(config);
    else if (command == "fit-ratings") spintop::cmd_fit_ratings(config);
    else if (command == "synth") spintop::cmd_synth(config);
  });
}
