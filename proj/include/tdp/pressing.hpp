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

#ifndef TDP_PRESSING_HPP_
#define TDP_PRESSING_HPP_

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "tdp/genotype.hpp"
#include "tdp/instance.hpp"

namespace tdp {

// Candidate quality, compared lexicographically: units produced outside the
// tolerance bands first, then total waste. Smaller is better.
struct Fitness {
  int64_t violation = 0;
  int64_t waste = 0;

  bool feasible() const { return violation == 0; }

  auto operator<=>(const Fitness&) const = default;
  bool operator==(const Fitness&) const = default;
};

// Outcome of pressing a fixed design R_j times per template.
struct PressingPlan {
  std::vector<int64_t> pressings;   // R_j, one per template
  std::vector<int64_t> production;  // sum_j s_ij R_j, one per variation
  std::vector<int64_t> under;       // U_i
  std::vector<int64_t> over;        // O_i
  int64_t waste = 0;
  int64_t violation = 0;
  bool feasible = false;

  Fitness fitness() const { return {violation, waste}; }
};

// Exact integer accounting for a classical design. Throws InvalidPressings for
// negative or mis-sized R, InvalidGenotype for a malformed design.
PressingPlan evaluate_with_pressings(const ProblemInstance& inst,
                                     const Genotype& design,
                                     std::span<const int64_t> pressings);

// Default for optimize_pressings: exact search on designs of at most two
// templates, heuristic plan alone on larger ones.
inline constexpr int64_t kAutoSearchBudget = -1;

// Best non-negative integer pressings for a classical design, minimizing
// (violation, waste). Deterministic.
//
// The continuous relaxation is a convex piecewise-linear program in t
// variables whose pieces break where a variation's production crosses its
// lower band, its demand or its upper band. A vertex walk over that
// arrangement gives the continuous optimum; its floor/ceil roundings,
// refined by exact coordinate line searches and unit-box moves, give an
// incumbent plan.
//
// With a positive search_budget the incumbent then seeds a branch and bound
// over one template count at a time, pruned by LP dual certificates checked
// in exact integer arithmetic. The returned plan is optimal whenever that
// search finishes inside the budget; otherwise it is the best plan found.
PressingPlan optimize_pressings(const ProblemInstance& inst,
                                const Genotype& design,
                                int64_t search_budget = kAutoSearchBudget);

// Fitness of either model; alternative genotypes are counted first.
Fitness fitness(const ProblemInstance& inst, const Genotype& g);

// Inclusive integer range for one template's pressing count.
struct PressingRange {
  int64_t lo = 0;
  int64_t hi = 0;
};

// Upper bound on grid points brute_force_pressings will enumerate.
inline constexpr int64_t kBruteForceGridLimit = 500'000'000;

// Exhaustive minimum over the grid; ties go to the lexicographically smallest
// R. Throws BudgetError when a range is empty or the grid exceeds
// kBruteForceGridLimit.
PressingPlan brute_force_pressings(const ProblemInstance& inst,
                                   const Genotype& design,
                                   std::span<const PressingRange> bounds);

// Reference bound: for every t-subset of variations solve the exact-demand
// system over the rationals, then try the integer roundings of each
// non-negative vertex within one unit, plus the single-template candidates
// R_j = round(Q_i / s_ij). Slow (C(v, t) systems); used to check the fast
// solver never does worse.
PressingPlan vertex_enumeration_pressings(const ProblemInstance& inst,
                                          const Genotype& design);

// Solves the square integer system A x = b exactly by fraction-free
// elimination. Returns false for singular systems; otherwise x = num / den
// with den > 0. A is row-major n x n.
bool solve_exact(std::span<const int64_t> a, std::span<const int64_t> b,
                 std::vector<__int128>& num, __int128& den);

// Production deviations in the style of published solution tables.
struct DeviationReport {
  std::vector<double> percent;  // 100 (production_i - Q_i) / Q_i
  double overall_percent = 0;   // 100 waste / sum Q_i
  double min_percent = 0;
  double max_percent = 0;
};

DeviationReport deviation_report(const ProblemInstance& inst,
                                 const PressingPlan& plan);

}  // namespace tdp

#endif  // TDP_PRESSING_HPP_
