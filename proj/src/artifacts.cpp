#include "ouq/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ouq/errors.hpp"

namespace ouq {

using json = nlohmann::json;

namespace {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json measure_to_json(const ProductMeasure& measure) {
  json factors = json::array();
  for (const auto& f : measure.factors()) {
    factors.push_back({{"weights", f.weights()},
                       {"positions", f.coords()},
                       {"bounds", {f.lower(), f.upper()}}});
  }
  return {{"factors", factors}};
}

ProductMeasure measure_from_json(const json& doc) {
  try {
    std::vector<DiscreteMeasure> factors;
    for (const auto& f : doc.at("factors")) {
      const auto weights = f.at("weights").get<std::vector<double>>();
      const auto positions = f.at("positions").get<std::vector<double>>();
      const auto bounds = f.at("bounds").get<std::vector<double>>();
      if (bounds.size() != 2) raise(ErrorCode::ParseError, "bounds must hold [lower, upper]");
      factors.emplace_back(weights, positions, bounds[0], bounds[1]);
    }
    return pack(std::move(factors));
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, std::string("malformed measure document: ") + e.what());
  }
}

json result_to_json(const OUQResult& result, std::size_t run, std::uint64_t seed) {
  return {{"run", run},
          {"seed", seed},
          {"probability_bound", result.probability_bound},
          {"expectation", result.expectation_at_maximizer},
          {"generations", result.report.generations_run},
          {"evaluations", result.report.evaluations},
          {"terminated_by", result.report.terminated_by},
          {"maximizer", measure_to_json(result.maximizer)}};
}

std::string trace_csv(const SolveReport& report, const ParamLayout& layout) {
  std::ostringstream out;
  out << "generation,best_cost";
  for (std::size_t i = 0; i < layout.dimension(); ++i) {
    for (const char* kind : {"w", "x"}) {
      for (std::size_t j = 0; j < layout.npts_per_dim[i]; ++j) {
        out << ',' << kind << i + 1 << '_' << j + 1;
      }
    }
  }
  out << '\n';
  for (const auto& rec : report.trace) {
    out << rec.generation << ',' << format_number(rec.best_cost);
    for (double x : rec.best_params) out << ',' << format_number(x);
    out << '\n';
  }
  return out.str();
}

json summary_to_json(const RunSummary& summary) {
  return {{"runs", summary.bounds.size()},
          {"best_run", summary.best_run},
          {"best_bound", summary.best_bound},
          {"bounds", summary.bounds},
          {"seeds", summary.seeds}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) raise(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

RunSummary run_solve(const RunConfig& config, const ResponseRegistry& registry) {
  OUQProblem problem = to_problem(config, registry);
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    raise(ErrorCode::IoError,
          "cannot create output directory '" + config.output_dir.string() + "': " + ec.message());
  }

  RunSummary summary;
  for (std::size_t k = 0; k < config.runs; ++k) {
    const std::uint64_t seed = config.seed + k;
    problem.outer.seed = seed;
    const OUQResult result = ouq_solve(problem);

    const std::string tag = std::to_string(k);
    write_file(config.output_dir / ("trace_" + tag + ".csv"), trace_csv(result.report, problem.layout));
    write_file(config.output_dir / ("result_" + tag + ".json"),
               result_to_json(result, k, seed).dump(2) + "\n");

    summary.bounds.push_back(result.probability_bound);
    summary.seeds.push_back(seed);
    if (k == 0 || result.probability_bound > summary.best_bound) {
      summary.best_run = k;
      summary.best_bound = result.probability_bound;
    }
  }
  write_file(config.output_dir / "summary.json", summary_to_json(summary).dump(2) + "\n");
  return summary;
}

}  // namespace ouq
