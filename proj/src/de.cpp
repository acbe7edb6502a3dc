#include "ouq/de.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

#include "ouq/errors.hpp"

namespace ouq {

namespace {

constexpr double kRejected = std::numeric_limits<double>::infinity();

struct Evaluation {
  Vector params;
  double cost = kRejected;
  bool evaluated = false;
  std::optional<std::string> constrain_error;
  std::exception_ptr failure;
};

class Evaluator {
 public:
  Evaluator(const CostFunction& cost, const Bounds& bounds, const DESettings& settings,
            const ConstrainFunction& constrain)
      : cost_(cost), bounds_(bounds), settings_(settings), constrain_(constrain) {}

  Evaluation operator()(Vector trial, const TrialContext& ctx) const {
    Evaluation out;
    if (settings_.bounds_mode == BoundsMode::Reject && !bounds_.contains(trial)) {
      out.params = std::move(trial);
      return out;
    }
    bounds_.clip(trial);
    try {
      out.params = constrain_ ? constrain_(trial, ctx) : trial;
    } catch (const Error& e) {
      out.params = std::move(trial);
      out.constrain_error = e.what();
      return out;
    }
    if (out.params.size() != bounds_.size()) {
      raise(ErrorCode::DimensionMismatch, "constraint changed the parameter count");
    }
    bounds_.clip(out.params);
    const double value = cost_(out.params);
    out.evaluated = true;
    out.cost = std::isnan(value) ? kRejected : value;
    return out;
  }

  // Evaluates a batch, optionally on several threads. Results are indexed by
  // slot so the caller commits them in a fixed order.
  std::vector<Evaluation> batch(std::vector<Vector> trials, std::size_t generation) const {
    const std::size_t n = trials.size();
    std::vector<Evaluation> results(n);
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          results[i] = (*this)(std::move(trials[i]), TrialContext{settings_.seed, generation, i});
        } catch (...) {
          results[i].failure = std::current_exception();
        }
      }
    };
    const std::size_t workers = std::clamp<std::size_t>(settings_.threads, 1, n);
    if (workers == 1) {
      work(0, n);
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (n + workers - 1) / workers;
      for (std::size_t begin = 0; begin < n; begin += chunk) {
        pool.emplace_back(work, begin, std::min(n, begin + chunk));
      }
    }
    for (const auto& r : results) {
      if (r.failure) std::rethrow_exception(r.failure);
    }
    return results;
  }

 private:
  const CostFunction& cost_;
  const Bounds& bounds_;
  const DESettings& settings_;
  const ConstrainFunction& constrain_;
};

void check_feasible(const std::vector<Evaluation>& results, std::size_t generation) {
  std::size_t constrain_errors = 0;
  for (const auto& r : results) {
    if (r.constrain_error) ++constrain_errors;
  }
  if (constrain_errors == results.size()) {
    raise(ErrorCode::InfeasibleConstrain,
          "constraint rejected every trial of generation " + std::to_string(generation) +
              " (last: " + *results.back().constrain_error + ")");
  }
}

// Two distinct slots, both different from target.
std::pair<std::size_t, std::size_t> pick_candidates(std::size_t npop, std::size_t target,
                                                    Rng& rng) {
  std::size_t a = rng.index(npop - 1);
  if (a >= target) ++a;
  std::size_t b = rng.index(npop - 2);
  const std::size_t lo = std::min(a, target);
  const std::size_t hi = std::max(a, target);
  if (b >= lo) ++b;
  if (b >= hi) ++b;
  return {a, b};
}

}  // namespace

void DESettings::validate() const {
  if (npop < 4) raise(ErrorCode::InvalidArgument, "npop must be at least 4");
  if (!(cross_probability >= 0.0 && cross_probability <= 1.0)) {
    raise(ErrorCode::InvalidArgument, "cross_probability must lie in [0, 1]");
  }
  if (!(scaling_factor > 0.0) || !std::isfinite(scaling_factor)) {
    raise(ErrorCode::InvalidArgument, "scaling_factor must be positive");
  }
  if (max_generations == 0) raise(ErrorCode::InvalidArgument, "max_generations must be positive");
}

std::string_view rule_name(const TerminationRule& rule) noexcept {
  struct Visitor {
    std::string_view operator()(const ChangeOverGeneration&) const { return "ChangeOverGeneration"; }
    std::string_view operator()(const ValueBelow&) const { return "ValueBelow"; }
    std::string_view operator()(const MaxGenerations&) const { return "MaxGenerations"; }
  };
  return std::visit(Visitor{}, rule);
}

bool termination_met(const TerminationRule& rule, std::span<const double> history) {
  if (history.empty()) return false;
  const double last = history.back();
  if (const auto* cog = std::get_if<ChangeOverGeneration>(&rule)) {
    if (history.size() <= cog->generations) return false;
    const double earlier = history[history.size() - 1 - cog->generations];
    return std::abs(last - earlier) <= cog->tolerance;
  }
  if (const auto* vb = std::get_if<ValueBelow>(&rule)) return last <= vb->tolerance;
  return false;
}

Bounds::Bounds(std::vector<Interval> box) : box_(std::move(box)) {
  for (const auto& b : box_) {
    if (!(std::isfinite(b.lower) && std::isfinite(b.upper) && b.lower <= b.upper)) {
      raise(ErrorCode::InvalidArgument, "bounds must be finite with lower <= upper");
    }
  }
}

Bounds Bounds::from_layout(const ParamLayout& layout) {
  std::vector<Interval> box;
  box.reserve(layout.size());
  for (std::size_t i = 0; i < layout.dimension(); ++i) {
    const std::size_t k = layout.npts_per_dim[i];
    box.insert(box.end(), k, Interval{0.0, 1.0});
    box.insert(box.end(), k, layout.bounds_per_dim[i]);
  }
  return Bounds(std::move(box));
}

bool Bounds::contains(std::span<const double> x) const noexcept {
  if (x.size() != box_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= box_[i].lower && x[i] <= box_[i].upper)) return false;
  }
  return true;
}

void Bounds::clip(std::span<double> x) const noexcept {
  const std::size_t n = std::min(x.size(), box_.size());
  for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], box_[i].lower, box_[i].upper);
}

Vector mutate_best1exp(std::span<const double> best, std::span<const double> c1,
                       std::span<const double> c2, std::span<const double> target,
                       const DESettings& settings, Rng& rng) {
  const std::size_t dim = best.size();
  if (dim == 0 || c1.size() != dim || c2.size() != dim || target.size() != dim) {
    raise(ErrorCode::DimensionMismatch, "mutation operands differ in length");
  }
  const double f = settings.scaling_factor;

  if (settings.strategy == Strategy::Best1ExpPaperSnippet) {
    Vector trial(best.begin(), best.end());
    if (rng.uniform01() >= settings.cross_probability) return trial;
    for (std::size_t j = 0; j < dim; ++j) trial[j] = best[j] + f * (c1[j] - c2[j]);
    return trial;
  }

  Vector trial(target.begin(), target.end());
  std::size_t j = rng.index(dim);
  std::size_t copied = 0;
  do {
    trial[j] = best[j] + f * (c1[j] - c2[j]);
    j = (j + 1) % dim;
    ++copied;
  } while (copied < dim && rng.uniform01() < settings.cross_probability);
  return trial;
}

Vector no_constraint(std::span<const double> x, const TrialContext&) {
  return Vector(x.begin(), x.end());
}

SolveReport de_solve(const CostFunction& cost, const Bounds& bounds, const DESettings& settings,
                     const ConstrainFunction& constrain, const TerminationRule& termination,
                     const SolveHooks& hooks) {
  settings.validate();
  const std::size_t dim = bounds.size();
  if (dim == 0) raise(ErrorCode::DimensionMismatch, "problem has no parameters");
  if (hooks.initial_members.size() > settings.npop) {
    raise(ErrorCode::InvalidArgument, "more initial members than population slots");
  }
  for (const auto& m : hooks.initial_members) {
    if (m.size() != dim) raise(ErrorCode::DimensionMismatch, "initial member has wrong length");
  }

  std::size_t generation_cap = settings.max_generations;
  if (const auto* mg = std::get_if<MaxGenerations>(&termination)) {
    generation_cap = std::min(generation_cap, std::max<std::size_t>(mg->limit, 1));
  }

  Rng rng(settings.seed);
  const Evaluator evaluate(cost, bounds, settings, constrain);
  const std::size_t npop = settings.npop;

  std::vector<Vector> initial(npop, Vector(dim));
  for (auto& member : initial) {
    for (std::size_t j = 0; j < dim; ++j) member[j] = rng.uniform(bounds[j].lower, bounds[j].upper);
  }
  std::copy(hooks.initial_members.begin(), hooks.initial_members.end(), initial.begin());

  SolveReport report;
  std::vector<Evaluation> first = evaluate.batch(std::move(initial), 0);
  check_feasible(first, 0);

  std::vector<Vector> population(npop);
  std::vector<double> costs(npop);
  std::size_t best = 0;
  for (std::size_t i = 0; i < npop; ++i) {
    population[i] = std::move(first[i].params);
    costs[i] = first[i].cost;
    if (first[i].evaluated) ++report.evaluations;
    if (costs[i] < costs[best]) best = i;
  }

  std::vector<double> history;
  auto record = [&](std::size_t generation) {
    history.push_back(costs[best]);
    report.trace.push_back({generation, costs[best], population[best]});
    if (hooks.on_generation) hooks.on_generation(report.trace.back());
  };
  record(0);

  bool converged = termination_met(termination, history);
  std::size_t generation = 1;
  while (!converged && report.trace.size() < generation_cap) {
    std::vector<Vector> trials(npop);
    for (std::size_t i = 0; i < npop; ++i) {
      const auto [a, b] = pick_candidates(npop, i, rng);
      trials[i] = mutate_best1exp(population[best], population[a], population[b],
                                  population[i], settings, rng);
    }
    std::vector<Evaluation> results = evaluate.batch(std::move(trials), generation);
    check_feasible(results, generation);

    for (std::size_t i = 0; i < npop; ++i) {
      if (results[i].evaluated) ++report.evaluations;
      if (results[i].cost < costs[i]) {
        population[i] = std::move(results[i].params);
        costs[i] = results[i].cost;
      }
    }
    for (std::size_t i = 0; i < npop; ++i) {
      if (costs[i] < costs[best]) best = i;
    }
    record(generation);
    converged = termination_met(termination, history);
    ++generation;
  }

  report.opt_params = population[best];
  report.opt_cost = costs[best];
  report.generations_run = report.trace.size();
  report.terminated_by = converged ? std::string(rule_name(termination)) : "MaxGenerations";
  return report;
}

}  // namespace ouq
