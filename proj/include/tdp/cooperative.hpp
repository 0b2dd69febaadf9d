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

#ifndef TDP_COOPERATIVE_HPP_
#define TDP_COOPERATIVE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "tdp/algspec.hpp"
#include "tdp/evaluator.hpp"
#include "tdp/evolution.hpp"
#include "tdp/local_search.hpp"
#include "tdp/records.hpp"

namespace tdp {

inline constexpr int kDefaultCycles = 5;

// One search process with its own solution pool: the population for GA and
// MA agents, an elite archive for local search agents.
class Agent {
 public:
  // `budget` is the agent's total evaluation share; it sets the stagnation
  // limit (budget / 10) as for a standalone run.
  Agent(const ProblemInstance& inst, const MemberSpec& spec, int64_t budget,
        uint64_t seed);

  void run(Evaluator& eval, int64_t evals);

  const MemberSpec& spec() const { return spec_; }
  ModelKind kind() const { return kind_of(spec_); }
  std::vector<Member>& pool();
  const std::vector<Member>& pool() const;
  int pool_capacity() const;
  std::optional<Member> best() const;

  // Called after the acceptance policy placed `m` in the pool.
  void accepted(const Member& m);

 private:
  MemberSpec spec_;
  std::variant<std::unique_ptr<LocalSearch>, std::unique_ptr<Evolution>> engine_;
};

// Emigrant index in `pool`. Random: uniform. Worst: worst fitness.
// Diverse: the member whose minimum distance to `receiver` (in the
// receiver's encoding) is largest. Ties go to the first in pool order.
// Throws EmptyPool.
std::size_t select_emigrant(const std::vector<Member>& pool, Policy policy,
                            const std::vector<Member>& receiver,
                            ModelKind receiver_kind,
                            const ProblemInstance& inst, Rng& rng);

// Tries to place `candidate` (already in the pool's encoding) into a pool of
// at most `capacity` members. Duplicates are always rejected. A pool below
// capacity grows instead of replacing. Random replaces a uniform member,
// Worst replaces the worst, Diverse replaces the worst only when the
// candidate's minimum distance to the pool exceeds the pool's minimum
// pairwise distance. Returns true when the candidate entered.
bool accept_immigrant(std::vector<Member>& pool, int capacity,
                      const Member& candidate, Policy policy, Rng& rng);

// Pairs (sender, receiver) for one synchronization; broadcast senders are
// resolved by sync_exchange.
std::vector<std::pair<int, int>> exchange_pattern(Topology topology, int agents,
                                                  Rng& rng);

// One synchronization point. Emigrants are all chosen before any pool
// changes. Broadcast sends the best pooled solution to every other agent
// regardless of the migration policy.
void sync_exchange(std::vector<Agent>& agents, const CooperativeSpec& spec,
                   const ProblemInstance& inst, Rng& rng);

// Theta cycles; in each, every agent in listed order runs E_max / (Theta n)
// evaluations (the final cycle also takes the floor-division remainder), then
// the agents synchronize. Throws BudgetError when E_max < Theta n.
RunRecord run_cooperative(const ProblemInstance& inst,
                          const CooperativeSpec& spec, int64_t e_max,
                          int cycles, uint64_t seed);

// Seed of agent k in a run seeded with `seed`.
uint64_t agent_seed(uint64_t seed, int k);

}  // namespace tdp

#endif  // TDP_COOPERATIVE_HPP_
