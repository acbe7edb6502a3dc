#pragma once

// Optimal upper bound on a failure probability over product measures of
// weighted Dirac masses, subject to a band constraint on the mean response.
//
// The outer differential-evolution loop maximizes mu[|H| <= tol] by
// minimizing its negative. Before every evaluation, constrain_params
// normalizes each factor and, when the mean response falls outside the band,
// runs an inner differential-evolution loop that minimizes (E[H] - m)^2
// until it drops to d^2.

#include <cstdint>
#include <functional>
#include <span>

#include "ouq/de.hpp"
#include "ouq/measure.hpp"

namespace ouq {

/// Admissible band [m - d, m + d] for the mean response.
struct MeanConstraint {
  double m = 0.0;
  double d = 0.0;

  static MeanConstraint from_center(double m, double d);
  static MeanConstraint from_band(double m1, double m2);

  double lower() const noexcept { return m - d; }
  double upper() const noexcept { return m + d; }
  /// (e - m)^2 <= d^2, the same test the inner loop terminates on.
  bool admits(double e) const noexcept { return (e - m) * (e - m) <= d * d; }
};

/// Instrumentation callbacks; must be thread-safe when the outer loop uses
/// more than one thread.
struct SolverObserver {
  std::function<void(std::span<const double>)> on_cost_evaluation;
  std::function<void()> on_inner_loop;
};

struct OUQProblem {
  Response response;
  ParamLayout layout;
  MeanConstraint constraint;
  double failure_tolerance = 0.0;
  DESettings outer{};
  DESettings inner{.npop = 20};
  TerminationRule outer_termination = ChangeOverGeneration{1e-4, 10};
  std::size_t inner_max_generations = 1000;
  SolverObserver observer;

  void validate() const;
};

struct OUQResult {
  double probability_bound = 0.0;
  ProductMeasure maximizer;
  double expectation_at_maximizer = 0.0;
  SolveReport report;
};

/// Negative probability of the failure event |H| <= failure_tolerance.
double ouq_cost(std::span<const double> params, const OUQProblem& problem);

Vector constrain_params(std::span<const double> params, const OUQProblem& problem,
                        const TrialContext& context = {});

ProductMeasure impose_expectation(const ProductMeasure& product, const OUQProblem& problem,
                                  std::uint64_t seed);

OUQResult ouq_solve(const OUQProblem& problem, const TraceHook& on_generation = {});

}  // namespace ouq
