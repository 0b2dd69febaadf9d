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

#ifndef TDP_ALGSPEC_HPP_
#define TDP_ALGSPEC_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tdp/genotype.hpp"

namespace tdp {

// Algorithm notation, e.g.
//
//   Hc.P*                 hill climbing, classical model, symmetry breaking
//   Ga.D.A4.Gd            GA, alternative model, 4-parent greedy crossover
//   Ma.Ts.P*.A2.Ux        memetic GA with tabu search, uniform crossover
//   Bc5(Ts.D,Ma.Hc.P*.A2.Ux)RD
//                         5 cooperating agents, broadcast topology, random
//                         migration, diversity-based acceptance
//
// Heads are case-insensitive and whitespace is ignored.

enum class SearchMethod { kHillClimbing, kTabuSearch };
enum class Crossover { kUniform, kGreedy };
enum class Topology { kRing, kBroadcast, kRandom };
enum class Policy { kRandom, kDiverse, kWorst };

struct LocalSearchSpec {
  SearchMethod method = SearchMethod::kHillClimbing;
  ModelKind kind;

  bool operator==(const LocalSearchSpec&) const = default;
};

struct GeneticSpec {
  ModelKind kind;
  int arity = 2;
  Crossover crossover = Crossover::kUniform;

  bool operator==(const GeneticSpec&) const = default;
};

struct MemeticSpec {
  SearchMethod ls_method = SearchMethod::kHillClimbing;
  ModelKind kind;
  int arity = 2;
  Crossover crossover = Crossover::kUniform;

  bool operator==(const MemeticSpec&) const = default;
};

// Anything that can run as a single agent.
using MemberSpec = std::variant<LocalSearchSpec, GeneticSpec, MemeticSpec>;

struct CooperativeSpec {
  Topology topology = Topology::kRing;
  int agents = 2;
  // (copies, algorithm) in listed order; copies sum to `agents`.
  std::vector<std::pair<int, MemberSpec>> members;
  Policy migration = Policy::kRandom;
  Policy acceptance = Policy::kRandom;
  // Spelling only: set when the text carried multipliers. Not compared.
  bool written_counts = false;

  bool operator==(const CooperativeSpec& o) const {
    return topology == o.topology && agents == o.agents &&
           members == o.members && migration == o.migration &&
           acceptance == o.acceptance;
  }
};

using AlgorithmSpec =
    std::variant<LocalSearchSpec, GeneticSpec, MemeticSpec, CooperativeSpec>;

// Throws ParseError (column = 1-based offset into `text`) on syntax errors
// and SpecError when member copies cannot add up to the agent count.
// Unmultiplied member lists shorter than the agent count are spread evenly,
// earlier members taking the surplus.
AlgorithmSpec parse_spec(std::string_view text);

// Canonical text. Multipliers are omitted when they match the even split of
// the listed members and `written_counts` is unset; otherwise only counts
// above one are written. Either way parse_spec(format_spec(x)) == x.
std::string format_spec(const AlgorithmSpec& spec);
std::string format_spec(const MemberSpec& spec);

// One entry per agent, listed order preserved. Throws SpecError when the
// copies do not sum to the agent count.
std::vector<MemberSpec> expand_members(const CooperativeSpec& spec);

// Copies per listed member for an unmultiplied list of `listed` members.
std::vector<int> even_split(int listed, int agents);

ModelKind kind_of(const MemberSpec& spec);

// The six supported pairs migrate a random or a diverse candidate. Pairs
// migrating the worst candidate still parse; the harness warns about them.
bool is_supported_policy_pair(Policy migration, Policy acceptance);

char policy_letter(Policy p);

}  // namespace tdp

#endif  // TDP_ALGSPEC_HPP_
