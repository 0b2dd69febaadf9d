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

#include "tdp/cooperative.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "tdp/errors.hpp"

namespace tdp {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

LocalSearchParams agent_ls_params(const LocalSearchSpec& spec, int64_t budget) {
  LocalSearchParams p;
  p.method = spec.method;
  p.stagnation_limit = std::max<int64_t>(1, budget / 10);
  return p;
}

int min_distance(const Genotype& g, const std::vector<Member>& pool) {
  int best = std::numeric_limits<int>::max();
  for (const Member& m : pool) best = std::min(best, hamming_distance(g, m.genotype));
  return best;
}

int min_pairwise_distance(const std::vector<Member>& pool) {
  int best = std::numeric_limits<int>::max();
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = a + 1; b < pool.size(); ++b) {
      best = std::min(best, hamming_distance(pool[a].genotype, pool[b].genotype));
    }
  }
  return best;
}

std::size_t worst_index(const std::vector<Member>& pool) {
  std::size_t worst = 0;
  for (std::size_t k = 1; k < pool.size(); ++k) {
    if (pool[worst].fitness < pool[k].fitness) worst = k;
  }
  return worst;
}

const Member& best_of(const std::vector<Member>& pool) {
  return *std::min_element(pool.begin(), pool.end(),
                           [](const Member& a, const Member& b) {
                             return a.fitness < b.fitness;
                           });
}

Member to_receiver(const Member& m, ModelKind kind, const ProblemInstance& inst) {
  return {convert_genotype(m.genotype, kind, inst), m.fitness};
}

void deliver(Agent& receiver, const Member& emigrant, Policy acceptance,
             const ProblemInstance& inst, Rng& rng) {
  const Member candidate = to_receiver(emigrant, receiver.kind(), inst);
  if (accept_immigrant(receiver.pool(), receiver.pool_capacity(), candidate,
                       acceptance, rng)) {
    receiver.accepted(candidate);
  }
}

}  // namespace

uint64_t agent_seed(uint64_t seed, int k) { return seed + kGolden * uint64_t(k); }

Agent::Agent(const ProblemInstance& inst, const MemberSpec& spec,
             int64_t budget, uint64_t seed)
    : spec_(spec) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LocalSearchSpec>) {
          engine_ = std::make_unique<LocalSearch>(
              inst, s.kind, agent_ls_params(s, budget), seed);
        } else if constexpr (std::is_same_v<T, GeneticSpec>) {
          engine_ = std::make_unique<Evolution>(
              inst, s.kind, genetic_params(s, budget), seed);
        } else {
          engine_ = std::make_unique<Evolution>(
              inst, s.kind, memetic_params(s, budget), seed);
        }
      },
      spec);
}

void Agent::run(Evaluator& eval, int64_t evals) {
  std::visit([&](auto& e) { e->run(eval, evals); }, engine_);
}

std::vector<Member>& Agent::pool() {
  if (auto* ls = std::get_if<std::unique_ptr<LocalSearch>>(&engine_)) {
    return (*ls)->mutable_archive();
  }
  return std::get<std::unique_ptr<Evolution>>(engine_)->population();
}

const std::vector<Member>& Agent::pool() const {
  if (auto* ls = std::get_if<std::unique_ptr<LocalSearch>>(&engine_)) {
    return (*ls)->archive();
  }
  return std::get<std::unique_ptr<Evolution>>(engine_)->population();
}

int Agent::pool_capacity() const {
  if (std::holds_alternative<std::unique_ptr<LocalSearch>>(engine_)) {
    return LocalSearch::kArchiveSize;
  }
  return std::get<std::unique_ptr<Evolution>>(engine_)->capacity();
}

std::optional<Member> Agent::best() const {
  return std::visit(
      [](const auto& e) -> std::optional<Member> {
        if (!e->has_best()) return std::nullopt;
        return e->best();
      },
      engine_);
}

void Agent::accepted(const Member& m) {
  if (auto* ls = std::get_if<std::unique_ptr<LocalSearch>>(&engine_)) {
    (*ls)->adopt(m);
  } else {
    std::get<std::unique_ptr<Evolution>>(engine_)->note(m);
  }
}

std::size_t select_emigrant(const std::vector<Member>& pool, Policy policy,
                            const std::vector<Member>& receiver,
                            ModelKind receiver_kind,
                            const ProblemInstance& inst, Rng& rng) {
  if (pool.empty()) throw EmptyPool("no emigrant in an empty pool");
  switch (policy) {
    case Policy::kRandom:
      return std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
    case Policy::kWorst:
      return worst_index(pool);
    case Policy::kDiverse: {
      std::size_t chosen = 0;
      int best = -1;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        const Genotype g = convert_genotype(pool[k].genotype, receiver_kind, inst);
        const int d = min_distance(g, receiver);
        if (d > best) {
          best = d;
          chosen = k;
        }
      }
      return chosen;
    }
  }
  return 0;
}

bool accept_immigrant(std::vector<Member>& pool, int capacity,
                      const Member& candidate, Policy policy, Rng& rng) {
  for (const Member& m : pool) {
    if (m.genotype == candidate.genotype) return false;
  }
  if (policy == Policy::kDiverse && pool.size() >= 2 &&
      min_distance(candidate.genotype, pool) <= min_pairwise_distance(pool)) {
    return false;
  }
  if (static_cast<int>(pool.size()) < capacity) {
    pool.push_back(candidate);
  } else if (policy == Policy::kRandom) {
    pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)] =
        candidate;
  } else {
    pool[worst_index(pool)] = candidate;
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Member& a, const Member& b) {
    return a.fitness < b.fitness;
  });
  return true;
}

std::vector<std::pair<int, int>> exchange_pattern(Topology topology, int agents,
                                                  Rng& rng) {
  std::vector<std::pair<int, int>> out;
  if (agents < 2) return out;
  for (int a = 0; a < agents; ++a) {
    switch (topology) {
      case Topology::kRing:
        out.emplace_back(a, (a + 1) % agents);
        break;
      case Topology::kRandom: {
        int to = std::uniform_int_distribution<int>(0, agents - 2)(rng);
        if (to >= a) ++to;
        out.emplace_back(a, to);
        break;
      }
      case Topology::kBroadcast:
        break;
    }
  }
  return out;
}

void sync_exchange(std::vector<Agent>& agents, const CooperativeSpec& spec,
                   const ProblemInstance& inst, Rng& rng) {
  const int n = static_cast<int>(agents.size());
  if (n < 2) return;
  if (spec.topology == Topology::kBroadcast) {
    int sender = -1;
    for (int a = 0; a < n; ++a) {
      const auto& pool = agents[a].pool();
      if (pool.empty()) continue;
      if (sender < 0 ||
          best_of(pool).fitness < best_of(agents[sender].pool()).fitness) {
        sender = a;
      }
    }
    if (sender < 0) return;
    const Member best = best_of(agents[sender].pool());
    for (int a = 0; a < n; ++a) {
      if (a != sender) deliver(agents[a], best, spec.acceptance, inst, rng);
    }
    return;
  }
  std::vector<std::pair<int, Member>> mail;
  for (auto [from, to] : exchange_pattern(spec.topology, n, rng)) {
    const auto& pool = agents[from].pool();
    if (pool.empty()) continue;
    const std::size_t k = select_emigrant(pool, spec.migration, agents[to].pool(),
                                          agents[to].kind(), inst, rng);
    mail.emplace_back(to, pool[k]);
  }
  for (const auto& [to, m] : mail) {
    deliver(agents[to], m, spec.acceptance, inst, rng);
  }
}

RunRecord run_cooperative(const ProblemInstance& inst,
                          const CooperativeSpec& spec, int64_t e_max,
                          int cycles, uint64_t seed) {
  if (cycles < 1) throw InvalidParameter("at least one cycle is needed");
  const std::vector<MemberSpec> members = expand_members(spec);
  const int n = static_cast<int>(members.size());
  if (e_max < int64_t(cycles) * n) {
    throw BudgetError("budget below one evaluation per agent and cycle");
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Agent> agents;
  for (int k = 0; k < n; ++k) {
    agents.emplace_back(inst, members[k], e_max / n, agent_seed(seed, k));
  }
  Rng rng(seed ^ 0xC2B2AE3D27D4EB4FULL);
  Evaluator eval(inst, e_max);
  const int64_t quota = e_max / (int64_t(cycles) * n);
  for (int c = 0; c < cycles; ++c) {
    const bool last = c + 1 == cycles;
    const int64_t left = e_max - int64_t(cycles - 1) * n * quota;
    for (int k = 0; k < n; ++k) {
      const int64_t share = last ? left / n + (k < left % n ? 1 : 0) : quota;
      agents[k].run(eval, share);
    }
    if (!last) sync_exchange(agents, spec, inst, rng);
  }
  std::optional<Member> best;
  ModelKind kind = agents[0].kind();
  for (const Agent& a : agents) {
    for (const auto& m : {a.best(), a.pool().empty()
                                        ? std::optional<Member>{}
                                        : std::optional<Member>(best_of(a.pool()))}) {
      if (m && (!best || m->fitness < best->fitness)) {
        best = m;
        kind = a.kind();
      }
    }
  }
  RunRecord r = make_record(inst, format_spec(AlgorithmSpec(spec)), seed,
                            eval.used(), kind, best);
  r.wall_time = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace tdp
