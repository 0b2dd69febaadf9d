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

#include "tdp/evaluator.hpp"

#include <algorithm>

#include "tdp/errors.hpp"

namespace tdp {

namespace {

constexpr std::size_t kCacheCapacity = 1 << 17;

Genotype leading_columns(const Genotype& g, int columns) {
  auto cells = g.cells();
  return Genotype(g.model(), g.rows(), columns,
                  {cells.begin(), cells.begin() + std::size_t(g.rows()) * columns});
}

}  // namespace

Evaluator::Evaluator(const ProblemInstance& inst, int64_t limit)
    : inst_(inst), limit_(limit) {
  for (int k = 1; k < inst.templates(); ++k) {
    prefixes_.push_back(inst.with_templates(k));
  }
}

void Evaluator::set_caching(bool on) {
  caching_ = on;
  if (!on) cache_.clear();
}

std::optional<Fitness> Evaluator::evaluate(const Genotype& g) {
  if (exhausted()) return std::nullopt;
  validate_genotype(g, inst_);
  const Fitness f = compute(as_classical(g, inst_), inst_.templates());
  ++used_;
  if (observer_) observer_(g, f);
  return f;
}

std::optional<Fitness> Evaluator::evaluate_partial(const Genotype& g,
                                                   int columns) {
  if (columns < 1 || columns > g.cols()) {
    throw IndexError("partial design needs 1.." + std::to_string(g.cols()) +
                     " templates");
  }
  if (columns == g.cols()) return evaluate(g);
  if (exhausted()) return std::nullopt;
  validate_genotype(g, inst_);
  const Genotype part = leading_columns(as_classical(g, inst_), columns);
  const Fitness f = compute(part, columns);
  ++used_;
  if (observer_) observer_(g, f);
  return f;
}

Fitness Evaluator::compute(const Genotype& classical, int columns) {
  const ProblemInstance& target =
      columns == inst_.templates() ? inst_ : prefixes_[columns - 1];
  if (!caching_) return optimize_pressings(target, classical).fitness();
  Genotype key = canonicalize(classical, {Model::kClassical, true});
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const Fitness f = optimize_pressings(target, classical).fitness();
  if (cache_.size() >= kCacheCapacity) cache_.clear();
  cache_.emplace(std::move(key), f);
  return f;
}

}  // namespace tdp
