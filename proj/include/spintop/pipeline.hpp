#pragma once

#include <exception>
#include <functional>
#include <string>

#include "spintop/config.hpp"

namespace spintop {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitSolver = 4;

// Maps an exception to its exit code (unknown exceptions count as data errors).
int exit_code_for(const std::exception& e);

// Runs `body`, printing "error: ..." to stderr on failure; returns the exit code.
int run_guarded(const std::function<void()>& body);

// Each command writes its artifacts into config.out_dir and throws on failure.

// PGN inputs -> records.csv + ingest_report.json
void cmd_ingest(const PipelineConfig& config);
// Month archives -> records.csv + sample_report.json
void cmd_sample(const PipelineConfig& config);
// records -> payoff.{csv,json}, histogram.csv, cycles.csv, clustering.json,
// npp.csv, fit.json, summary.json. Refuses to write over an analysis of a
// different record file or bin scheme unless `force`. Artifacts finished
// before a solver failure are kept.
void cmd_analyze(const PipelineConfig& config, bool force = false);
// payoff.json -> cycles.csv + cycles_summary.json
void cmd_cycles(const PipelineConfig& config);
// payoff.json -> fplay_k<k>.csv per k + fplay_summary.json
void cmd_fplay(const PipelineConfig& config);
// rating table -> rating_maps.json
void cmd_fit_ratings(const PipelineConfig& config);
// synthetic layered game -> payoff.{csv,json}
void cmd_synth(const PipelineConfig& config);

}  // namespace spintop
