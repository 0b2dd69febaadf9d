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

#ifndef TDP_EVALUATOR_HPP_
#define TDP_EVALUATOR_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tdp/genotype.hpp"
#include "tdp/instance.hpp"
#include "tdp/pressing.hpp"

namespace tdp {

// A genotype with its fitness, as kept in populations and pools.
struct Member {
  Genotype genotype;
  Fitness fitness;

  bool operator==(const Member&) const = default;
};

// Charged fitness evaluation. Every call to evaluate() or evaluate_partial()
// costs one evaluation, cached or not; once the limit is reached both return
// nullopt without charging.
//
// Results are memoized on the canonical classical form, which is sound
// because fitness is invariant under template and slot permutations.
class Evaluator {
 public:
  static constexpr int64_t kUnlimited = std::numeric_limits<int64_t>::max();

  explicit Evaluator(const ProblemInstance& inst, int64_t limit = kUnlimited);

  const ProblemInstance& instance() const { return inst_; }

  std::optional<Fitness> evaluate(const Genotype& g);

  // Fitness of the first `columns` templates of g alone, i.e. with the
  // remaining templates pressed zero times.
  std::optional<Fitness> evaluate_partial(const Genotype& g, int columns);

  int64_t used() const { return used_; }
  int64_t limit() const { return limit_; }
  int64_t remaining() const { return limit_ - used_; }
  bool exhausted() const { return used_ >= limit_; }

  // Raising or lowering the limit never refunds evaluations already charged.
  void set_limit(int64_t limit) { limit_ = limit; }

  // Called once per charged evaluation (tests use it to audit accounting).
  void set_observer(std::function<void(const Genotype&, const Fitness&)> fn) {
    observer_ = std::move(fn);
  }

  void set_caching(bool on);

 private:
  Fitness compute(const Genotype& classical, int columns);

  const ProblemInstance& inst_;
  std::vector<ProblemInstance> prefixes_;  // prefixes_[k] has k + 1 templates
  int64_t limit_;
  int64_t used_ = 0;
  bool caching_ = true;
  std::unordered_map<Genotype, Fitness, GenotypeHash> cache_;
  std::function<void(const Genotype&, const Fitness&)> observer_;
};

}  // namespace tdp

#endif  // TDP_EVALUATOR_HPP_
