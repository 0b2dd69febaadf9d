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

#include "tdp/records.hpp"

#include <sstream>

#include "doctest.h"
#include "tdp/errors.hpp"
#include "tdp/experiment.hpp"

namespace tdp {
namespace {

std::vector<RunRecord> sample_records() {
  const auto inst = builtin_instance("catfood");
  std::vector<RunRecord> out;
  out.push_back(run_algorithm(inst, parse_spec("Hc.P*"), 600, 1));
  out.push_back(run_algorithm(inst, parse_spec("Ts.D"), 600, 2));
  out.push_back(run_algorithm(inst, parse_spec("Ga.P.A2.Ux"), 600, 3));
  out.push_back(make_record(inst, "Hc.P", 4, 0, {Model::kClassical, false}, std::nullopt));
  return out;
}

TEST_CASE("make_record recomputes the plan") {
  const auto inst = builtin_instance("catfood");
  const auto g = Genotype::from_columns(Model::kClassical,
                                        {{1, 1, 1, 2, 2, 2, 0}, {0, 0, 0, 0, 0, 2, 7}});
  const auto r = make_record(inst, "Hc.P", 9, 100, {Model::kClassical, false},
                             Member{g, Fitness{0, 29287}});
  CHECK(r.feasible);
  CHECK(r.best_waste == 29287);
  CHECK(r.pressings == std::vector<int64_t>{250000, 157143});

  const auto none = make_record(inst, "Hc.P", 9, 0, {Model::kClassical, false}, std::nullopt);
  CHECK_FALSE(none.feasible);
  CHECK_FALSE(none.best_waste.has_value());
}

TEST_CASE("csv round trip") {
  const auto records = sample_records();
  std::stringstream csv;
  write_records_csv(csv, records);
  CHECK(csv.str().rfind(
            "algorithm,instance,seed,evals_used,feasible,best_waste,best_violation,wall_time\n",
            0) == 0);
  const auto back = read_records_csv(csv);
  REQUIRE(back.size() == records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    CHECK(back[k].algorithm == records[k].algorithm);
    CHECK(back[k].instance == records[k].instance);
    CHECK(back[k].seed == records[k].seed);
    CHECK(back[k].evals_used == records[k].evals_used);
    CHECK(back[k].feasible == records[k].feasible);
    CHECK(back[k].best_waste == records[k].best_waste);
    CHECK(back[k].best_violation == records[k].best_violation);
    CHECK(back[k].wall_time == records[k].wall_time);
  }

  std::stringstream bad("algorithm,instance\nx,y\n");
  CHECK_THROWS_AS(read_records_csv(bad), ParseError);
}

TEST_CASE("csv without timing is reproducible") {
  std::stringstream a, b;
  write_records_csv(a, sample_records(), false);
  write_records_csv(b, sample_records(), false);
  CHECK(a.str() == b.str());
}

TEST_CASE("json sidecar restores solutions") {
  const auto records = sample_records();
  std::stringstream csv, json;
  write_records_csv(csv, records);
  write_solutions_json(json, records);
  auto back = read_records_csv(csv);
  read_solutions_json(json, back);
  REQUIRE(back.size() == records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    CHECK(back[k] == records[k]);
  }
}

}  // namespace
}  // namespace tdp
