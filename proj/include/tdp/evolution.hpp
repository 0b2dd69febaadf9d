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

#ifndef TDP_EVOLUTION_HPP_
#define TDP_EVOLUTION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tdp/algspec.hpp"
#include "tdp/evaluator.hpp"
#include "tdp/genotype.hpp"
#include "tdp/instance.hpp"
#include "tdp/records.hpp"

namespace tdp {

struct EvoParams {
  int popsize = 100;
  double p_crossover = 0.9;
  double p_mutation = -1;  // negative: 1 / genes
  int arity = 2;
  Crossover crossover = Crossover::kUniform;
  // Memetic part; p_local_search = 0 gives the plain GA.
  double p_local_search = 0.0;
  SearchMethod ls_method = SearchMethod::kHillClimbing;
  int64_t ls_cap = 0;  // 0: the stagnation limit
  int tenure = 10;
  double restart_keep = 0.10;
  int64_t stagnation_limit = 1;  // evaluations without a new best
};

// Defaults for a run of `budget` evaluations: stagnation limit budget / 10,
// embedded local search probability 0.005 when memetic.
EvoParams genetic_params(const GeneticSpec& spec, int64_t budget);
EvoParams memetic_params(const MemeticSpec& spec, int64_t budget);

// Genes per genotype: v t classical, s t alternative.
int gene_count(const ProblemInstance& inst, Model model);

// Index of the better of two uniformly drawn members; the first drawn wins
// ties. Throws InvalidParameter for fewer than two members.
std::size_t tournament_select(std::span<const Member> pop, Rng& rng);

// Each template column comes whole from a uniformly chosen parent.
Genotype uniform_crossover(std::span<const Genotype> parents, ModelKind kind,
                           Rng& rng);

// Columns chosen left to right: at each position the parents' candidate
// columns are tried against the columns already fixed (later templates
// pressed zero times) and the best (violation, waste) is kept, lowest parent
// index on ties. Each distinct candidate costs one evaluation; a forced
// choice costs none. Returns nullopt when the evaluator runs dry.
std::optional<Genotype> greedy_crossover(Evaluator& eval,
                                         std::span<const Genotype> parents,
                                         ModelKind kind);

// Each gene independently triggers, with probability p, one neighborhood
// move at its position: classical gene (i, j) receives a slot from another
// variation of template j; alternative gene (h, j) takes a new label.
Genotype mutate(const Genotype& g, ModelKind kind, double p, int variations,
                Rng& rng);

// Steady-state (mu + 1) GA, memetic when p_local_search > 0. Can be advanced
// in slices.
class Evolution {
 public:
  Evolution(const ProblemInstance& inst, ModelKind kind, EvoParams params,
            uint64_t seed);

  void run(Evaluator& eval, int64_t evals);

  std::vector<Member>& population() { return pop_; }
  const std::vector<Member>& population() const { return pop_; }
  bool has_best() const { return best_.has_value(); }
  const Member& best() const { return *best_; }
  ModelKind kind() const { return kind_; }
  int capacity() const { return params_.popsize; }

  // Notes an externally inserted member (migration).
  void note(const Member& m);

 private:
  bool fill(Evaluator& eval, int64_t stop_at);
  bool breed(Evaluator& eval, int64_t stop_at);
  void admit(Member child);
  void restart();
  bool contains(const Genotype& g) const;
  std::optional<Fitness> charge(Evaluator& eval, const Genotype& g,
                                int64_t stop_at);

  const ProblemInstance& inst_;
  ModelKind kind_;
  EvoParams params_;
  Rng rng_;
  std::vector<Member> pop_;
  std::optional<Member> best_;
  int64_t since_improvement_ = 0;
  bool filling_ = true;
  int duplicate_draws_ = 0;
};

RunRecord run_ga(const ProblemInstance& inst, const GeneticSpec& spec,
                 int64_t budget, uint64_t seed);
RunRecord run_ma(const ProblemInstance& inst, const MemeticSpec& spec,
                 int64_t budget, uint64_t seed);

// Same, with explicit parameters (tests vary them).
RunRecord run_evolution(const ProblemInstance& inst, const std::string& name,
                        ModelKind kind, const EvoParams& params, int64_t budget,
                        uint64_t seed);

}  // namespace tdp

#endif  // TDP_EVOLUTION_HPP_
