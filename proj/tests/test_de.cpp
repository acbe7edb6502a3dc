#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>

#include "ouq/de.hpp"
#include "ouq/errors.hpp"

namespace ouq {
namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

Bounds box(std::size_t dim, double lo, double hi) {
  return Bounds(std::vector<Interval>(dim, Interval{lo, hi}));
}

TEST(Rng, EngineMatchesStandardSequence) {
  // 10000th output of mt19937_64 with its default seed is fixed by the standard
  Rng rng(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next();
  EXPECT_EQ(x, 9981545732273789042ULL);
}

TEST(Rng, DrawsStayInRange) {
  Rng rng(3);
  std::set<std::size_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform(-2.0, 3.0);
    ASSERT_GE(v, -2.0);
    ASSERT_LE(v, 3.0);
    seen.insert(rng.index(7));
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(*seen.rbegin(), 6u);
}

TEST(Rng, ChildSeedsDiffer) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t g = 0; g < 20; ++g)
    for (std::uint64_t s = 0; s < 40; ++s) seeds.insert(derive_seed(42, g, s));
  EXPECT_EQ(seeds.size(), 800u);
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
}

TEST(Mutation, ZeroScalingCopiesBest) {
  const Vector best{1, 2, 3, 4}, c1{9, 9, 9, 9}, c2{-5, 0, 5, 7}, target{10, 20, 30, 40};
  for (Strategy strategy : {Strategy::Best1ExpStandard, Strategy::Best1ExpPaperSnippet}) {
    DESettings s;
    s.strategy = strategy;
    s.scaling_factor = 0.0;
    Rng rng(1);
    for (int rep = 0; rep < 50; ++rep) {
      const Vector t = mutate_best1exp(best, c1, c2, target, s, rng);
      for (std::size_t j = 0; j < t.size(); ++j) EXPECT_TRUE(t[j] == best[j] || t[j] == target[j]);
    }
  }
}

TEST(Mutation, EqualCandidatesGiveBest) {
  const Vector best{1, 2, 3}, c{4, 4, 4}, target{7, 8, 9};
  DESettings s;
  Rng rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const Vector t = mutate_best1exp(best, c, c, target, s, rng);
    std::size_t mutated = 0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      EXPECT_TRUE(t[j] == best[j] || t[j] == target[j]);
      mutated += t[j] == best[j];
    }
    EXPECT_GE(mutated, 1u);
  }
}

TEST(Mutation, SnippetMutatesWholeVector) {
  DESettings s;
  s.strategy = Strategy::Best1ExpPaperSnippet;
  s.cross_probability = 1.0;  // forces the mutation branch
  s.scaling_factor = 0.9;
  Rng rng(3);
  const Vector t = mutate_best1exp(Vector{1, 1}, Vector{2, 0}, Vector{0, 0}, Vector{5, 5}, s, rng);
  EXPECT_DOUBLE_EQ(t[0], 2.8);
  EXPECT_DOUBLE_EQ(t[1], 1.0);

  s.cross_probability = 0.0;  // never mutates
  EXPECT_EQ(mutate_best1exp(Vector{1, 1}, Vector{2, 0}, Vector{0, 0}, Vector{5, 5}, s, rng),
            (Vector{1, 1}));
}

TEST(Mutation, StandardCrossoverRunLengths) {
  const Vector best{0, 0, 0, 0, 0}, c1{1, 1, 1, 1, 1}, c2{0, 0, 0, 0, 0}, target{9, 9, 9, 9, 9};
  DESettings s;
  s.scaling_factor = 1.0;
  Rng rng(4);

  s.cross_probability = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Vector t = mutate_best1exp(best, c1, c2, target, s, rng);
    EXPECT_EQ(std::count(t.begin(), t.end(), 1.0), 1);
  }
  s.cross_probability = 1.0;
  EXPECT_EQ(mutate_best1exp(best, c1, c2, target, s, rng), c1);

  // mutated coordinates form one cyclic run
  s.cross_probability = 0.5;
  for (int rep = 0; rep < 200; ++rep) {
    const Vector t = mutate_best1exp(best, c1, c2, target, s, rng);
    int boundaries = 0;
    for (std::size_t j = 0; j < t.size(); ++j) boundaries += (t[j] == 1.0) != (t[(j + 1) % t.size()] == 1.0);
    EXPECT_LE(boundaries, 2);
  }
}

TEST(Mutation, DimensionMismatch) {
  DESettings s;
  Rng rng(5);
  try {
    mutate_best1exp(Vector{1, 2}, Vector{1}, Vector{1, 2}, Vector{1, 2}, s, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Termination, ChangeOverGeneration) {
  const TerminationRule rule = ChangeOverGeneration{1e-4, 10};
  EXPECT_TRUE(termination_met(rule, std::vector<double>(11, 3.0)));
  EXPECT_FALSE(termination_met(rule, std::vector<double>(10, 3.0)));
  EXPECT_FALSE(termination_met(rule, std::vector<double>(5, 3.0)));
  std::vector<double> h(11, 1.0);
  h.back() = 1.0 - 2e-4;
  EXPECT_FALSE(termination_met(rule, h));
  h.back() = 1.0 - 5e-5;
  EXPECT_TRUE(termination_met(rule, h));
}

TEST(Termination, ValueBelow) {
  EXPECT_TRUE(termination_met(ValueBelow{1.0}, std::vector<double>{4.0, 2.0, 0.81}));
  EXPECT_TRUE(termination_met(ValueBelow{1.0}, std::vector<double>{1.0}));
  EXPECT_FALSE(termination_met(ValueBelow{1.0}, std::vector<double>{0.5, 1.2}));
  EXPECT_FALSE(termination_met(MaxGenerations{1}, std::vector<double>{0.0}));
}

TEST(DeSolve, Sphere3D) {
  DESettings s;
  s.seed = 7;
  s.max_generations = 500;
  const auto r = de_solve(sphere, box(3, -5, 5), s, no_constraint, MaxGenerations{500});
  EXPECT_LE(r.opt_cost, 1e-6);
  EXPECT_EQ(r.generations_run, 500u);
  EXPECT_EQ(r.trace.size(), r.generations_run);
  EXPECT_EQ(r.terminated_by, "MaxGenerations");
  EXPECT_EQ(r.opt_cost, sphere(r.opt_params));
}

TEST(DeSolve, OneDimensionalQuadratic) {
  DESettings s;
  s.seed = 1;
  s.max_generations = 300;
  const auto cost = [](std::span<const double> x) { return (x[0] - 2.0) * (x[0] - 2.0); };
  const auto r = de_solve(cost, box(1, 0, 5), s, no_constraint, ChangeOverGeneration{1e-12, 30});
  EXPECT_NEAR(r.opt_params[0], 2.0, 1e-4);
}

TEST(DeSolve, ConstraintAppliedBeforeEveryEvaluation) {
  DESettings s;
  s.seed = 9;
  s.max_generations = 100;
  std::atomic<int> bad{0};
  const auto cost = [&](std::span<const double> x) {
    if (x[0] != 1.0) ++bad;
    return sphere(x);
  };
  const auto pin = [](std::span<const double> x, const TrialContext&) {
    Vector out(x.begin(), x.end());
    out[0] = 1.0;
    return out;
  };
  const auto r = de_solve(cost, box(3, -5, 5), s, pin, MaxGenerations{100});
  EXPECT_EQ(r.opt_params[0], 1.0);
  EXPECT_EQ(bad.load(), 0);
}

TEST(DeSolve, EvaluationsStayInBoundsAndHistoryIsMonotone) {
  for (BoundsMode mode : {BoundsMode::Clip, BoundsMode::Reject}) {
    DESettings s;
    s.seed = 21;
    s.bounds_mode = mode;
    s.max_generations = 200;
    const Bounds b(std::vector<Interval>{{-1, 2}, {0, 0.5}, {3, 4}, {-10, -9}});
    std::size_t outside = 0;
    const auto cost = [&](std::span<const double> x) {
      if (!b.contains(x)) ++outside;
      // minimum lies outside the box, so trials keep pressing on the bounds
      return std::pow(x[0] - 5, 2) + std::pow(x[1] + 1, 2) + x[2] + std::abs(x[3]);
    };
    const auto r = de_solve(cost, b, s, no_constraint, MaxGenerations{200});
    EXPECT_EQ(outside, 0u);
    for (std::size_t g = 1; g < r.trace.size(); ++g) {
      EXPECT_LE(r.trace[g].best_cost, r.trace[g - 1].best_cost);
      EXPECT_EQ(r.trace[g].generation, g);
    }
    EXPECT_NEAR(r.opt_params[0], 2.0, 1e-6);
    EXPECT_NEAR(r.opt_params[1], 0.0, 1e-6);
  }
}

TEST(DeSolve, DeterministicAndThreadIndependent) {
  DESettings s;
  s.seed = 1234;
  s.max_generations = 60;
  const auto run = [&](unsigned threads) {
    DESettings t = s;
    t.threads = threads;
    return de_solve(sphere, box(4, -3, 3), t, no_constraint, MaxGenerations{60});
  };
  const auto a = run(1);
  const auto b = run(1);
  const auto c = run(4);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t g = 0; g < a.trace.size(); ++g) {
    EXPECT_EQ(a.trace[g].best_cost, b.trace[g].best_cost);
    EXPECT_EQ(a.trace[g].best_params, b.trace[g].best_params);
    EXPECT_EQ(a.trace[g].best_params, c.trace[g].best_params);
  }
  EXPECT_EQ(a.evaluations, c.evaluations);
  EXPECT_EQ(a.evaluations, 60u * s.npop);
}

TEST(DeSolve, ValueBelowStopsAtGenerationZeroForSeededMember) {
  DESettings s;
  s.npop = 20;
  SolveHooks hooks;
  hooks.initial_members.push_back(Vector{0.01, 0.0});
  std::vector<std::size_t> generations;
  hooks.on_generation = [&](const GenerationRecord& rec) { generations.push_back(rec.generation); };
  const auto r = de_solve(sphere, box(2, -5, 5), s, no_constraint, ValueBelow{1e-3}, hooks);
  EXPECT_EQ(r.generations_run, 1u);
  EXPECT_EQ(r.terminated_by, "ValueBelow");
  EXPECT_LE(r.opt_cost, 1e-4);
  EXPECT_EQ(generations, (std::vector<std::size_t>{0}));
}

TEST(DeSolve, InfeasibleConstraint) {
  DESettings s;
  s.max_generations = 10;
  const auto reject_all = [](std::span<const double>, const TrialContext&) -> Vector {
    raise(ErrorCode::ZeroMassMeasure, "always");
  };
  try {
    de_solve(sphere, box(2, -1, 1), s, reject_all, MaxGenerations{10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleConstrain);
  }
}

TEST(DeSolve, RejectedTrialsNeverBecomeIncumbent) {
  DESettings s;
  s.seed = 4;
  s.max_generations = 50;
  const auto reject_positive = [](std::span<const double> x, const TrialContext&) {
    if (x[0] > 0.0) raise(ErrorCode::InnerLoopFailed, "positive");
    return Vector(x.begin(), x.end());
  };
  const auto r = de_solve(sphere, box(2, -1, 1), s, reject_positive, MaxGenerations{50});
  EXPECT_LE(r.opt_params[0], 0.0);
  EXPECT_TRUE(std::isfinite(r.opt_cost));
  EXPECT_LT(r.evaluations, 50u * s.npop);
}

TEST(DeSettings, Validation) {
  DESettings s;
  s.npop = 3;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.cross_probability = 1.5;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.scaling_factor = 0.0;
  EXPECT_THROW(s.validate(), Error);
}

}  // namespace
}  // namespace ouq
