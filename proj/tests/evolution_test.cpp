// Copyright 2026 The tdp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tdp/evolution.hpp"

#include <array>
#include <set>

#include "doctest.h"
#include "tdp/errors.hpp"

namespace tdp {
namespace {

constexpr ModelKind kP{Model::kClassical, false};
constexpr ModelKind kPStar{Model::kClassical, true};
constexpr ModelKind kD{Model::kAlternative, false};

Genotype catfood_table8() {
  return Genotype::from_columns(Model::kClassical,
                                {{1, 1, 1, 2, 2, 2, 0}, {0, 0, 0, 0, 0, 2, 7}});
}

std::vector<int> col(const Genotype& g, int j) {
  return {g.column(j).begin(), g.column(j).end()};
}

TEST_CASE("tournament selection") {
  const auto inst = builtin_instance("catfood");
  Rng rng(1);
  std::vector<Member> pop = {
      {random_genotype(inst, kP, rng), Fitness{0, 10}},
      {random_genotype(inst, kP, rng), Fitness{0, 20}},
  };
  int better = 0;
  for (int k = 0; k < 1000; ++k) better += tournament_select(pop, rng) == 0;
  CHECK(better >= 700);
  CHECK(better <= 800);

  std::vector<Member> flat;
  for (int k = 0; k < 4; ++k) flat.push_back({random_genotype(inst, kP, rng), Fitness{1, 1}});
  std::array<int, 4> hits{};
  for (int k = 0; k < 8000; ++k) ++hits[tournament_select(flat, rng)];
  for (int h : hits) CHECK((h > 1700 && h < 2300));

  CHECK_THROWS_AS(tournament_select(std::span<const Member>(pop.data(), 1), rng),
                  InvalidParameter);
  EvoParams tiny;
  tiny.popsize = 1;
  CHECK_THROWS_AS(Evolution(inst, kP, tiny, 1), InvalidParameter);
}

TEST_CASE("uniform crossover") {
  const auto inst = builtin_instance("magazine");
  Rng rng(2);
  const auto g = random_genotype(inst, kP, rng);
  const std::vector<Genotype> same(3, g);
  CHECK(uniform_crossover(same, kP, rng) == g);

  std::vector<Genotype> parents;
  for (int k = 0; k < 4; ++k) parents.push_back(random_genotype(inst, kP, rng));
  std::array<std::array<int, 4>, 3> source{};
  for (int n = 0; n < 10000; ++n) {
    const auto child = uniform_crossover(parents, kP, rng);
    for (int j = 0; j < 3; ++j) {
      int from = -1;
      for (int k = 0; k < 4; ++k) {
        if (col(child, j) == col(parents[k], j)) from = k;
      }
      REQUIRE(from >= 0);
      ++source[j][from];
    }
  }
  // Each parent supplies a column with probability 1/4.
  for (const auto& row : source) {
    for (int c : row) CHECK((c > 2300 && c < 2700));
  }

  const auto sb = uniform_crossover(parents, kPStar, rng);
  CHECK(is_canonical(sb, kPStar));
}

TEST_CASE("greedy crossover") {
  const auto inst = builtin_instance("catfood");
  Rng rng(3);
  Evaluator eval(inst);
  const auto g = random_genotype(inst, kP, rng);
  const std::vector<Genotype> same(2, g);
  CHECK(*greedy_crossover(eval, same, kP) == g);
  CHECK(eval.used() == 0);  // no real choice, nothing charged

  const std::vector<Genotype> parents = {catfood_table8(), random_genotype(inst, kP, rng)};
  const auto child = greedy_crossover(eval, parents, kP);
  REQUIRE(child.has_value());
  CHECK((col(*child, 0) == col(parents[0], 0) || col(*child, 0) == col(parents[1], 0)));
  CHECK(eval.used() == 4);

  // Each position holds the arg-min candidate given the earlier choices.
  Evaluator audit(inst);
  for (int j = 0; j < 2; ++j) {
    Fitness chosen{};
    std::vector<Fitness> options;
    for (const auto& p : parents) {
      auto trial = *child;
      std::copy(p.column(j).begin(), p.column(j).end(), trial.column(j).begin());
      options.push_back(*audit.evaluate_partial(trial, j + 1));
    }
    chosen = *audit.evaluate_partial(*child, j + 1);
    for (const auto& f : options) CHECK(chosen <= f);
  }

  Evaluator dry(inst, 1);
  CHECK_FALSE(greedy_crossover(dry, parents, kP).has_value());
}

TEST_CASE("mutation") {
  const auto inst = builtin_instance("catfood");
  Rng rng(4);
  const auto g = random_genotype(inst, kD, rng);
  CHECK(mutate(g, kD, 0.0, 7, rng) == g);
  CHECK(gene_count(inst, Model::kClassical) == 14);
  CHECK(gene_count(inst, Model::kAlternative) == 18);

  // Alternative genes change exactly one cell each, so the Hamming distance
  // counts triggered genes.
  const double p = 1.0 / gene_count(inst, Model::kAlternative);
  double total = 0;
  for (int k = 0; k < 10000; ++k) total += hamming_distance(g, mutate(g, kD, p, 7, rng));
  CHECK(total / 10000 == doctest::Approx(1.0).epsilon(0.1));

  const auto c = random_genotype(inst, kP, rng);
  for (int k = 0; k < 200; ++k) {
    CHECK_NOTHROW(validate_genotype(mutate(c, kP, 0.5, 7, rng), inst));
  }
}

TEST_CASE("population stays distinct and full") {
  const auto inst = builtin_instance("catfood");
  for (Crossover x : {Crossover::kUniform, Crossover::kGreedy}) {
    GeneticSpec spec{kPStar, 2, x};
    auto params = genetic_params(spec, 4200);
    params.popsize = 30;
    Evolution evo(inst, kPStar, params, 5);
    Evaluator eval(inst, 4200);
    for (int slice = 0; slice < 20; ++slice) {
      evo.run(eval, 210);
      if (evo.population().size() < 30u) continue;
      CHECK(evo.population().size() == 30u);
      std::set<Genotype> distinct;
      for (const auto& m : evo.population()) {
        distinct.insert(m.genotype);
        CHECK(is_canonical(m.genotype, kPStar));
      }
      CHECK(distinct.size() == evo.population().size());
    }
    CHECK(eval.used() == 4200);
    REQUIRE(evo.has_best());
    for (const auto& m : evo.population()) CHECK(evo.best().fitness <= m.fitness);
  }
}

TEST_CASE("runs are exact and deterministic") {
  const auto inst = builtin_instance("catfood");
  const GeneticSpec ga{kD, 4, Crossover::kGreedy};
  const auto a = run_ga(inst, ga, 1500, 9);
  const auto b = run_ga(inst, ga, 1500, 9);
  CHECK(a == b);
  CHECK(a.evals_used == 1500);
  CHECK_THROWS_AS(run_ga(inst, ga, 50, 9), BudgetError);

  const MemeticSpec ma{SearchMethod::kTabuSearch, kPStar, 2, Crossover::kUniform};
  const auto m = run_ma(inst, ma, 3000, 4);
  CHECK(m.evals_used == 3000);
  CHECK(m == run_ma(inst, ma, 3000, 4));
}

TEST_CASE("memetic with zero local search probability is the plain GA") {
  const auto inst = builtin_instance("catfood");
  const MemeticSpec ma{SearchMethod::kHillClimbing, kPStar, 2, Crossover::kUniform};
  const GeneticSpec ga{kPStar, 2, Crossover::kUniform};
  auto mp = memetic_params(ma, 4200);
  mp.p_local_search = 0.0;
  const auto a = run_evolution(inst, "x", kPStar, mp, 4200, 12);
  const auto b = run_evolution(inst, "x", kPStar, genetic_params(ga, 4200), 4200, 12);
  CHECK(a == b);
}

}  // namespace
}  // namespace tdp
