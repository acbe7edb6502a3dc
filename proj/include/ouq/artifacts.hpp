#pragma once

// Files written by a configured run: per-run convergence traces (CSV),
// per-run result documents (JSON) and a summary (JSON). Layouts are
// documented in docs/formats.md.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ouq/config.hpp"
#include "ouq/solver.hpp"

namespace ouq {

/// {"factors": [{"weights": [...], "positions": [...], "bounds": [lo, hi]}, ...]}
nlohmann::json measure_to_json(const ProductMeasure& measure);
ProductMeasure measure_from_json(const nlohmann::json& doc);

nlohmann::json result_to_json(const OUQResult& result, std::size_t run, std::uint64_t seed);

/// Header plus one row per generation: generation, best_cost, then the best
/// parameter vector in layout order. Numbers use %.17g.
std::string trace_csv(const SolveReport& report, const ParamLayout& layout);

struct RunSummary {
  std::size_t best_run = 0;
  double best_bound = 0.0;
  std::vector<double> bounds;
  std::vector<std::uint64_t> seeds;
};

nlohmann::json summary_to_json(const RunSummary& summary);

/// Runs config.runs independent solves with seeds seed, seed+1, ... and
/// writes trace_<k>.csv, result_<k>.json and summary.json into
/// config.output_dir (created if needed).
RunSummary run_solve(const RunConfig& config,
                     const ResponseRegistry& registry = ResponseRegistry::global());

void write_file(const std::filesystem::path& path, const std::string& content);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace ouq
