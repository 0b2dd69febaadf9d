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

#include "tdp/pressing.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "doctest.h"
#include "tdp/errors.hpp"

namespace tdp {
namespace {

using Columns = std::vector<std::vector<int>>;

// Expands (count, repeat) runs into a column.
std::vector<int> runs(std::initializer_list<std::pair<int, int>> items) {
  std::vector<int> out;
  for (auto [count, repeat] : items) out.insert(out.end(), repeat, count);
  return out;
}

Genotype design(const Columns& columns) {
  return Genotype::from_columns(Model::kClassical, columns);
}

Genotype catfood_table8() {
  return design({{1, 1, 1, 2, 2, 2, 0}, {0, 0, 0, 0, 0, 2, 7}});
}

ProblemInstance toy(std::vector<int64_t> q, int t, int s, double tol = 0.1) {
  const std::size_t v = q.size();
  return ProblemInstance("toy", static_cast<int>(v), t, s, std::move(q),
                         std::vector<double>(v, tol), std::vector<double>(v, tol));
}

// Grid wide enough to hold any optimum: past max Q (1 + u) every variation
// on the template is over its band.
std::vector<PressingRange> full_grid(const ProblemInstance& inst) {
  int64_t top = 0;
  for (const auto& b : inst.bands()) top = std::max(top, b.high);
  return std::vector<PressingRange>(inst.templates(), {0, top + 1});
}

TEST_CASE("catfood fixture accounting") {
  const auto inst = builtin_instance("catfood");
  const std::vector<int64_t> r = {250000, 157143};
  const auto plan = evaluate_with_pressings(inst, catfood_table8(), r);
  CHECK(plan.waste == 29287);
  CHECK(plan.feasible);
  CHECK(plan.violation == 0);
  const std::vector<int64_t> dev = {0, -5000, -10000, 0, 0, 14286, 1};
  for (int i = 0; i < 7; ++i) {
    CHECK(plan.production[i] - inst.demand(i) == dev[i]);
  }
  const auto report = deviation_report(inst, plan);
  CHECK(std::abs(report.overall_percent - 0.80) <= 0.01);
  CHECK(std::abs(report.min_percent + 3.85) <= 0.01);
  CHECK(std::abs(report.max_percent - 1.79) <= 0.01);
}

TEST_CASE("zero pressings and bad input") {
  const auto inst = builtin_instance("catfood");
  const auto plan = evaluate_with_pressings(inst, catfood_table8(),
                                            std::vector<int64_t>{0, 0});
  CHECK(plan.waste == inst.total_demand());
  CHECK_FALSE(plan.feasible);
  for (int64_t p : plan.production) CHECK(p == 0);
  CHECK_THROWS_AS(evaluate_with_pressings(inst, catfood_table8(),
                                          std::vector<int64_t>{-1, 0}),
                  InvalidPressings);
  CHECK_THROWS_AS(evaluate_with_pressings(inst, catfood_table8(),
                                          std::vector<int64_t>{1}),
                  InvalidPressings);
}

TEST_CASE("catfood fixture is optimal") {
  const auto inst = builtin_instance("catfood");
  const auto plan = optimize_pressings(inst, catfood_table8());
  CHECK(plan.waste == 29287);
  CHECK(plan.feasible);
  const std::vector<PressingRange> box = {{240000, 260000}, {150000, 165000}};
  const auto brute = brute_force_pressings(inst, catfood_table8(), box);
  CHECK(brute.fitness() == plan.fitness());
  CHECK(fitness(inst, catfood_table8()) == Fitness{0, 29287});
}

TEST_CASE("published herbs and magazine designs") {
  const auto herbs = builtin_instance("herbs");
  const auto mag = builtin_instance("magazine");

  const auto h8 = design({runs({{1, 15}, {0, 1}, {1, 7}, {2, 3}, {3, 2}, {4, 2}}),
                          runs({{0, 9}, {1, 6}, {6, 1}, {1, 3}, {2, 4}, {1, 1},
                                {6, 2}, {2, 2}, {1, 2}})});
  const auto p8 = optimize_pressings(herbs, h8);
  CHECK(p8.waste == 104548);
  CHECK(p8.feasible);

  const auto h9 = design({runs({{1, 10}, {0, 1}, {1, 7}, {0, 1}, {1, 4}, {2, 1},
                                {3, 3}, {2, 1}, {4, 2}}),
                          runs({{0, 9}, {1, 1}, {5, 1}, {1, 7}, {6, 1}, {2, 4},
                                {1, 1}, {2, 3}, {6, 1}, {1, 2}})});
  const auto at = evaluate_with_pressings(herbs, h9, std::vector<int64_t>{66000, 16000});
  CHECK(at.waste == 104000);
  CHECK(at.feasible);
  CHECK(optimize_pressings(herbs, h9).waste == 104000);

  const auto m8 = design({runs({{1, 6}, {2, 5}, {0, 14}, {1, 11}, {2, 6}, {0, 4},
                                {1, 1}, {0, 3}}),
                          runs({{0, 4}, {1, 2}, {0, 4}, {1, 1}, {0, 11}, {1, 3},
                                {0, 7}, {1, 4}, {0, 6}, {3, 4}, {2, 3}, {12, 1}}),
                          runs({{0, 11}, {1, 36}, {2, 2}, {0, 1}})});
  const auto pm8 = optimize_pressings(mag, m8);
  CHECK(pm8.waste == 277500);
  CHECK(pm8.feasible);

  const auto m9 = design({runs({{0, 11}, {1, 36}, {2, 2}, {0, 1}}),
                          runs({{1, 3}, {0, 1}, {1, 2}, {2, 5}, {0, 14}, {1, 11},
                                {2, 6}, {1, 1}, {0, 3}, {1, 1}, {0, 3}}),
                          runs({{0, 3}, {2, 1}, {1, 2}, {0, 4}, {1, 1}, {0, 11},
                                {1, 3}, {0, 7}, {1, 4}, {0, 6}, {1, 1}, {3, 3},
                                {2, 3}, {12, 1}})});
  const auto pm9 = optimize_pressings(mag, m9);
  CHECK(pm9.waste == 246000);
  CHECK(pm9.feasible);
}

TEST_CASE("tiny exact covers") {
  const auto one = toy({100}, 1, 1, 0.0);
  const auto p1 = optimize_pressings(one, design({{1}}));
  CHECK(p1.pressings == std::vector<int64_t>{100});
  CHECK(p1.waste == 0);

  const auto two = toy({10, 10}, 1, 2, 0.0);
  const auto p2 = optimize_pressings(two, design({{1, 1}}));
  CHECK(p2.pressings == std::vector<int64_t>{10});
  CHECK(p2.waste == 0);

  const std::vector<PressingRange> range = {{0, 30}};
  const auto b2 = brute_force_pressings(two, design({{1, 1}}), range);
  CHECK(b2.pressings == std::vector<int64_t>{10});
  CHECK(b2.waste == 0);
}

TEST_CASE("brute force guards") {
  const auto inst = builtin_instance("catfood");
  const std::vector<PressingRange> empty = {{5, 4}, {0, 1}};
  CHECK_THROWS_AS(brute_force_pressings(inst, catfood_table8(), empty), BudgetError);
  const std::vector<PressingRange> huge = {{0, 1'000'000}, {0, 1'000'000}};
  CHECK_THROWS_AS(brute_force_pressings(inst, catfood_table8(), huge), BudgetError);
}

TEST_CASE("structurally infeasible design") {
  const auto inst = builtin_instance("catfood");
  const auto g = design({{9, 0, 0, 0, 0, 0, 0}, {9, 0, 0, 0, 0, 0, 0}});
  CHECK(fitness(inst, g).violation > 0);
}

// Oracle equivalence: the solver against exhaustive search on small
// instances, two and three templates.
TEST_CASE("solver matches brute force on random small designs") {
  Rng rng(2026);
  std::uniform_int_distribution<int64_t> demand(5, 60);
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    const int t = k < 70 ? 2 : 3;
    const int v = t == 2 ? 4 : 3;
    const int s = t == 2 ? 5 : 4;
    std::vector<int64_t> q(v);
    for (auto& x : q) x = t == 2 ? demand(rng) : demand(rng) / 3 + 2;
    const double tol = (k % 3 == 0) ? 0.0 : 0.1;
    const auto inst = toy(q, t, s, tol);
    const auto g = random_genotype(inst, {Model::kClassical, false}, rng);
    const auto fast = optimize_pressings(inst, g, 1'000'000);
    const auto brute = brute_force_pressings(inst, g, full_grid(inst));
    CHECK(fast.fitness() == brute.fitness());
    CHECK(evaluate_with_pressings(inst, g, fast.pressings).fitness() ==
          fast.fitness());
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("never worse than vertex enumeration") {
  for (const char* name : {"catfood", "herbs"}) {
    const auto inst = builtin_instance(name);
    Rng rng(17);
    for (int k = 0; k < 40; ++k) {
      const auto g = random_genotype(inst, {Model::kClassical, false}, rng);
      CHECK(optimize_pressings(inst, g).fitness() <=
            vertex_enumeration_pressings(inst, g).fitness());
    }
  }
}

TEST_CASE("fitness is invariant under template and variation order") {
  const auto inst = builtin_instance("catfood");
  Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    const auto g = random_genotype(inst, {Model::kClassical, false}, rng);
    const auto f = fitness(inst, g);
    CHECK(fitness(inst, canonicalize(g, {Model::kClassical, true})) == f);
    CHECK(fitness(inst, classical_to_alternative(g, inst.slots())) == f);

    // Relabel variations: permute rows and demands together.
    std::vector<int> perm(inst.variations());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int64_t> q(perm.size());
    std::vector<int> cells(g.cells().size());
    for (int i = 0; i < inst.variations(); ++i) {
      q[i] = inst.demand(perm[i]);
      for (int j = 0; j < g.cols(); ++j) {
        cells[static_cast<std::size_t>(j) * g.rows() + i] = g.at(perm[i], j);
      }
    }
    const auto relabeled = toy(q, inst.templates(), inst.slots());
    const Genotype h(Model::kClassical, g.rows(), g.cols(), cells);
    CHECK(fitness(relabeled, h) == f);
  }
}

TEST_CASE("scaling demands tenfold scales the optimum at most tenfold") {
  Rng rng(31);
  std::uniform_int_distribution<int64_t> demand(1, 30);
  for (int k = 0; k < 30; ++k) {
    std::vector<int64_t> q(4);
    for (auto& x : q) x = 10 * demand(rng);
    std::vector<int64_t> q10 = q;
    for (auto& x : q10) x *= 10;
    const auto base = toy(q, 2, 5);
    const auto big = toy(q10, 2, 5);
    const auto g = random_genotype(base, {Model::kClassical, false}, rng);
    const auto f = fitness(base, g);
    const auto f10 = fitness(big, g);
    CHECK(f10 <= Fitness{10 * f.violation, 10 * f.waste});
    CHECK(f10.feasible() >= f.feasible());
  }
}

TEST_CASE("exact solve") {
  const std::vector<int64_t> a = {2, 1, 1, 3};
  const std::vector<int64_t> b = {5, 10};
  std::vector<__int128> num;
  __int128 den = 0;
  REQUIRE(solve_exact(a, b, num, den));
  // x = (1, 3)
  CHECK(static_cast<int64_t>(num[0] * 1) == static_cast<int64_t>(den));
  CHECK(static_cast<int64_t>(num[1]) == static_cast<int64_t>(3 * den));
  const std::vector<int64_t> singular = {1, 2, 2, 4};
  CHECK_FALSE(solve_exact(singular, b, num, den));
}

}  // namespace
}  // namespace tdp
