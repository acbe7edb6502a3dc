#pragma once

// Differential evolution minimizer (Best1Exp) with box bounds, a parameter
// constraint hook applied before every cost evaluation, and termination
// rules evaluated on the per-generation best-cost history.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ouq/measure.hpp"
#include "ouq/rng.hpp"

namespace ouq {

using Vector = std::vector<double>;

enum class Strategy {
  /// Exponential crossover into a copy of the target vector.
  Best1ExpStandard,
  /// Whole-vector mutation: best + F*(c1 - c2) with probability CR, else best.
  Best1ExpPaperSnippet,
};

enum class BoundsMode {
  Clip,    // trials are projected onto the box
  Reject,  // out-of-box trials are discarded without evaluation
};

struct DESettings {
  std::size_t npop = 40;
  double cross_probability = 0.9;
  double scaling_factor = 0.9;
  Strategy strategy = Strategy::Best1ExpStandard;
  std::uint64_t seed = 0;
  std::size_t max_generations = 1000;
  BoundsMode bounds_mode = BoundsMode::Clip;
  /// Worker threads used to evaluate one generation's trials.
  unsigned threads = 1;

  void validate() const;
};

struct ChangeOverGeneration {
  double tolerance = 1e-4;
  std::size_t generations = 10;
};
struct ValueBelow {
  double tolerance = 0.0;
};
struct MaxGenerations {
  std::size_t limit = 1000;
};
using TerminationRule = std::variant<ChangeOverGeneration, ValueBelow, MaxGenerations>;

std::string_view rule_name(const TerminationRule& rule) noexcept;

/// Whether the rule fires on the best-cost history (one entry per
/// generation, oldest first). MaxGenerations never fires here; de_solve
/// applies it as a generation cap.
bool termination_met(const TerminationRule& rule, std::span<const double> history);

class Bounds {
 public:
  Bounds() = default;
  explicit Bounds(std::vector<Interval> box);
  static Bounds from_layout(const ParamLayout& layout);

  std::size_t size() const noexcept { return box_.size(); }
  const Interval& operator[](std::size_t i) const { return box_[i]; }
  const std::vector<Interval>& intervals() const noexcept { return box_; }

  bool contains(std::span<const double> x) const noexcept;
  void clip(std::span<double> x) const noexcept;

 private:
  std::vector<Interval> box_;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best_cost = 0.0;
  Vector best_params;
};

struct SolveReport {
  Vector opt_params;
  double opt_cost = 0.0;
  std::size_t generations_run = 0;
  std::size_t evaluations = 0;
  std::vector<GenerationRecord> trace;
  std::string terminated_by;
};

/// Identifies one trial inside a run; nested solvers seed from child_seed().
struct TrialContext {
  std::uint64_t seed = 0;
  std::size_t generation = 0;
  std::size_t slot = 0;

  std::uint64_t child_seed() const noexcept { return derive_seed(seed, generation, slot); }
};

using CostFunction = std::function<double(std::span<const double>)>;
/// Maps a trial onto the constraint set. Throwing ouq::Error marks the trial
/// infeasible; it is then discarded instead of evaluated.
using ConstrainFunction =
    std::function<Vector(std::span<const double>, const TrialContext&)>;
using TraceHook = std::function<void(const GenerationRecord&)>;

struct SolveHooks {
  /// Vectors placed into the first population slots instead of random draws.
  std::vector<Vector> initial_members;
  TraceHook on_generation;
};

Vector mutate_best1exp(std::span<const double> best, std::span<const double> c1,
                       std::span<const double> c2, std::span<const double> target,
                       const DESettings& settings, Rng& rng);

SolveReport de_solve(const CostFunction& cost, const Bounds& bounds,
                     const DESettings& settings, const ConstrainFunction& constrain,
                     const TerminationRule& termination, const SolveHooks& hooks = {});

/// Identity constraint.
Vector no_constraint(std::span<const double> x, const TrialContext&);

}  // namespace ouq
