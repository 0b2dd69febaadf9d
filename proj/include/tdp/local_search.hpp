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

#ifndef TDP_LOCAL_SEARCH_HPP_
#define TDP_LOCAL_SEARCH_HPP_

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tdp/algspec.hpp"
#include "tdp/evaluator.hpp"
#include "tdp/genotype.hpp"
#include "tdp/instance.hpp"

namespace tdp {

// One neighborhood step inside template `col`.
//   classical:   one slot moves from variation `from` to variation `to`
//                (0-based rows); `slot` is unused.
//   alternative: slot `slot` changes label `from` to `to` (1-based labels).
struct Move {
  int col = 0;
  int from = 0;
  int to = 0;
  int slot = -1;

  bool operator==(const Move&) const = default;
};

// round(1000 t v (v - 1) percent). Throws InvalidParameter unless
// 0 < percent <= 1.
int64_t compute_budget(const ProblemInstance& inst, double percent);

// Nominal neighborhood size: t v (v - 1) classical, s t (v - 1) alternative.
int64_t neighborhood_size(const ProblemInstance& inst, Model model);

// Throws InvalidMove when the donor slot is empty, the labels coincide or an
// index is out of range. Canonicalizes under symmetry breaking.
Genotype apply_move(const Genotype& g, const Move& m, ModelKind kind,
                    int variations);

// Move restoring g after m (before any canonicalization).
Move reverse_move(const Move& m);

std::vector<Move> all_moves(const Genotype& g, int variations);

// Uniform over all_moves(g); nullopt when g has no neighbor.
std::optional<Move> random_move(const Genotype& g, int variations, Rng& rng);

struct Neighbor {
  Move move;
  Genotype genotype;
};

// Up to k distinct neighbors in random order (distinct after
// canonicalization under symmetry breaking).
std::vector<Neighbor> sample_neighbors(const ProblemInstance& inst,
                                       const Genotype& g, ModelKind kind,
                                       Rng& rng, int k);

struct LocalSearchParams {
  SearchMethod method = SearchMethod::kHillClimbing;
  int tenure = 10;
  // Evaluations without improving the best point since the last (re)start;
  // then restart from a random genotype, or stop when restarts are off.
  int64_t stagnation_limit = 1;
  bool restart = true;
  // Neighbors examined per iteration; 0 picks max(1, size / 100) for hill
  // climbing and twice that for tabu search.
  int sample = 0;
};

// Hill climbing (first improvement over a sample) or tabu search (best
// admissible move of a sample) that can be advanced in slices, as the
// cooperative scheme requires.
class LocalSearch {
 public:
  static constexpr int kArchiveSize = 10;

  LocalSearch(const ProblemInstance& inst, ModelKind kind,
              LocalSearchParams params, uint64_t seed);

  // Next run() starts from g instead of a random genotype.
  void start_from(Genotype g);
  // Same, with g already evaluated.
  void start_from(Member m);

  // Advances until `evals` more evaluations are charged, the evaluator runs
  // dry or (without restarts) the search stagnates.
  void run(Evaluator& eval, int64_t evals);

  bool stopped() const { return stopped_; }
  bool has_best() const { return best_.has_value(); }
  const Member& best() const { return *best_; }
  ModelKind kind() const { return kind_; }

  // Best distinct solutions seen, best first.
  const std::vector<Member>& archive() const { return archive_; }

  // Accepted immigrant: becomes the current point when it beats it. The
  // archive itself is edited by the caller's acceptance policy.
  void adopt(const Member& m);
  std::vector<Member>& mutable_archive() { return archive_; }

 private:
  void record(const Member& m);
  bool step(Evaluator& eval, int64_t stop_at);
  bool hill_climb_step(Evaluator& eval, int64_t stop_at);
  bool tabu_step(Evaluator& eval, int64_t stop_at);
  void set_current(Member m);
  uint64_t tabu_key(const Move& m) const;

  const ProblemInstance& inst_;
  ModelKind kind_;
  LocalSearchParams params_;
  Rng rng_;
  int sample_;

  std::optional<Genotype> pending_;
  std::optional<Member> current_;
  std::optional<Member> best_;
  std::optional<Fitness> since_restart_best_;
  int64_t since_improvement_ = 0;
  int64_t iteration_ = 0;
  bool stopped_ = false;
  std::unordered_map<uint64_t, int64_t> tabu_until_;
  std::vector<Member> archive_;
};

struct SearchResult {
  Genotype best;
  Fitness fitness;
  int64_t evals = 0;
};

// Standalone runs with the default stagnation limit budget / 10.
SearchResult hill_climb(const ProblemInstance& inst, ModelKind kind,
                        const Genotype& start, int64_t budget, uint64_t seed);
SearchResult tabu_search(const ProblemInstance& inst, ModelKind kind,
                         const Genotype& start, int64_t budget, int tenure,
                         uint64_t seed);

}  // namespace tdp

#endif  // TDP_LOCAL_SEARCH_HPP_
