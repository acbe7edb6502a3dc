#include "ouq/solver.hpp"

#include <cmath>

#include "ouq/errors.hpp"

namespace ouq {

namespace {

// Normalizes every factor whose mass is not already 1 within tolerance.
std::vector<DiscreteMeasure> normalized_factors(const ProductMeasure& product) {
  std::vector<DiscreteMeasure> factors = unpack(product);
  for (auto& f : factors) {
    if (std::abs(f.mass() - 1.0) > kNormalizationTolerance) f = normalize(f);
  }
  return factors;
}

}  // namespace

MeanConstraint MeanConstraint::from_center(double m, double d) {
  if (!std::isfinite(m) || !(d > 0.0) || !std::isfinite(d)) {
    raise(ErrorCode::InvalidArgument, "mean constraint needs finite m and positive d");
  }
  return {m, d};
}

MeanConstraint MeanConstraint::from_band(double m1, double m2) {
  if (!(std::isfinite(m1) && std::isfinite(m2) && m1 < m2)) {
    raise(ErrorCode::InvalidArgument, "mean band needs finite m1 < m2");
  }
  return {0.5 * (m1 + m2), 0.5 * (m2 - m1)};
}

void OUQProblem::validate() const {
  if (!response) raise(ErrorCode::InvalidArgument, "problem has no response function");
  layout.validate();
  if (!std::isfinite(constraint.m) || !(constraint.d > 0.0)) {
    raise(ErrorCode::InvalidArgument, "mean constraint needs finite m and positive d");
  }
  if (!(failure_tolerance >= 0.0)) {
    raise(ErrorCode::InvalidArgument, "failure tolerance must be nonnegative");
  }
  outer.validate();
  inner.validate();
  if (inner_max_generations == 0) {
    raise(ErrorCode::InvalidArgument, "inner_max_generations must be positive");
  }
}

double ouq_cost(std::span<const double> params, const OUQProblem& problem) {
  if (problem.observer.on_cost_evaluation) problem.observer.on_cost_evaluation(params);
  const ProductMeasure product = unflatten(params, problem.layout);
  const double tol = problem.failure_tolerance;
  const Response& h = problem.response;
  return -event_probability(product, [&](std::span<const double> x) {
    return std::abs(h(x)) <= tol;
  });
}

ProductMeasure impose_expectation(const ProductMeasure& product, const OUQProblem& problem,
                                  std::uint64_t seed) {
  if (problem.observer.on_inner_loop) problem.observer.on_inner_loop();

  const ParamLayout& layout = problem.layout;
  const MeanConstraint& band = problem.constraint;
  const Response& h = problem.response;

  DESettings settings = problem.inner;
  settings.seed = seed;
  settings.max_generations = problem.inner_max_generations;
  settings.threads = 1;

  const CostFunction cost = [&](std::span<const double> q) {
    const double e = expectation(unflatten(q, layout), h);
    return (e - band.m) * (e - band.m);
  };
  const ConstrainFunction renormalize = [&](std::span<const double> q, const TrialContext&) {
    return flatten(pack(normalized_factors(unflatten(q, layout))));
  };

  SolveHooks hooks;
  hooks.initial_members.push_back(flatten(product));
  const SolveReport report = de_solve(cost, Bounds::from_layout(layout), settings, renormalize,
                                      ValueBelow{band.d * band.d}, hooks);
  if (report.terminated_by != rule_name(ValueBelow{})) {
    raise(ErrorCode::InnerLoopFailed,
          "mean response not brought within the band after " +
              std::to_string(report.generations_run) + " generations (best squared error " +
              std::to_string(report.opt_cost) + ")");
  }
  return unflatten(report.opt_params, layout);
}

Vector constrain_params(std::span<const double> params, const OUQProblem& problem,
                        const TrialContext& context) {
  const ProductMeasure trial = pack(normalized_factors(unflatten(params, problem.layout)));
  if (problem.constraint.admits(expectation(trial, problem.response))) return flatten(trial);

  Vector out = flatten(impose_expectation(trial, problem, context.child_seed()));
  Bounds::from_layout(problem.layout).clip(out);
  const double e = expectation(unflatten(out, problem.layout), problem.response);
  if (!problem.constraint.admits(e)) {
    raise(ErrorCode::InnerLoopFailed, "clipped inner-loop result left the mean band");
  }
  return out;
}

OUQResult ouq_solve(const OUQProblem& problem, const TraceHook& on_generation) {
  problem.validate();
  const CostFunction cost = [&](std::span<const double> x) { return ouq_cost(x, problem); };
  const ConstrainFunction constrain = [&](std::span<const double> x, const TrialContext& ctx) {
    return constrain_params(x, problem, ctx);
  };
  SolveHooks hooks;
  hooks.on_generation = on_generation;
  SolveReport report = de_solve(cost, Bounds::from_layout(problem.layout), problem.outer,
                                constrain, problem.outer_termination, hooks);

  ProductMeasure maximizer = unflatten(report.opt_params, problem.layout);
  const double e = expectation(maximizer, problem.response);
  return OUQResult{0.0 - report.opt_cost, std::move(maximizer), e, std::move(report)};
}

}  // namespace ouq
