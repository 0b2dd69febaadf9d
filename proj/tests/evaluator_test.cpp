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

#include "doctest.h"

namespace tdp {
namespace {

TEST_CASE("every call is charged") {
  const auto inst = builtin_instance("catfood");
  Evaluator eval(inst, 5);
  int seen = 0;
  eval.set_observer([&](const Genotype&, const Fitness&) { ++seen; });
  Rng rng(1);
  const auto g = random_genotype(inst, {Model::kClassical, false}, rng);
  const auto first = eval.evaluate(g);
  REQUIRE(first.has_value());
  CHECK(eval.evaluate(g) == first);  // cached, still charged
  CHECK(eval.used() == 2);
  CHECK(eval.evaluate_partial(g, 1).has_value());
  CHECK(eval.used() == 3);
  CHECK(eval.evaluate(g).has_value());
  CHECK(eval.evaluate(g).has_value());
  CHECK(eval.exhausted());
  CHECK_FALSE(eval.evaluate(g).has_value());
  CHECK_FALSE(eval.evaluate_partial(g, 1).has_value());
  CHECK(eval.used() == 5);
  CHECK(seen == 5);
  CHECK(eval.remaining() == 0);
}

TEST_CASE("cached and uncached results agree") {
  const auto inst = builtin_instance("herbs");
  Evaluator cached(inst);
  Evaluator plain(inst);
  plain.set_caching(false);
  Rng rng(2);
  for (int k = 0; k < 30; ++k) {
    const auto g = random_genotype(inst, {Model::kAlternative, false}, rng);
    CHECK(cached.evaluate(g) == plain.evaluate(g));
    CHECK(cached.evaluate(canonicalize(g, {Model::kAlternative, true})) ==
          plain.evaluate(g));
    CHECK(*cached.evaluate(g) == fitness(inst, g));
  }
}

TEST_CASE("partial evaluation drops later templates") {
  const auto inst = builtin_instance("magazine");
  Rng rng(3);
  Evaluator eval(inst);
  for (int k = 0; k < 10; ++k) {
    const auto g = random_genotype(inst, {Model::kClassical, false}, rng);
    for (int cols = 1; cols <= 3; ++cols) {
      std::vector<std::vector<int>> prefix;
      for (int j = 0; j < cols; ++j) {
        prefix.emplace_back(g.column(j).begin(), g.column(j).end());
      }
      const auto part = Genotype::from_columns(Model::kClassical, prefix);
      CHECK(*eval.evaluate_partial(g, cols) ==
            fitness(inst.with_templates(cols), part));
    }
  }
}

}  // namespace
}  // namespace tdp
