#pragma once

// Run configuration documents (JSON; comments allowed). The schema is
// described in docs/formats.md. Unknown keys are rejected at every level.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ouq/de.hpp"
#include "ouq/registry.hpp"
#include "ouq/solver.hpp"
#include "ouq/surrogate.hpp"

namespace ouq {

/// Axis bounds in canonical units (mm, rad, km/s). `unit` keeps the tag the
/// document used; mils and degrees are converted on load.
struct AxisBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::string unit;
};

struct RunConfig {
  std::string response;
  std::optional<sphir::SurrogateParams> surrogate;
  std::vector<std::size_t> npts_per_dim;
  std::vector<AxisBounds> bounds_per_dim;
  double m1 = 0.0;
  double m2 = 0.0;
  double failure_tolerance = 0.0;
  DESettings outer{};
  DESettings inner{.npop = 20};
  TerminationRule outer_termination = ChangeOverGeneration{1e-4, 10};
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  std::filesystem::path output_dir = "ouq-out";

  ParamLayout layout() const;
  void validate() const;
};

RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Builds the solver problem, resolving the response by name. A
/// sphir-perforation config carrying its own surrogate block gets a response
/// built from those parameters instead of the registered default.
OUQProblem to_problem(const RunConfig& config,
                      const ResponseRegistry& registry = ResponseRegistry::global());

}  // namespace ouq
