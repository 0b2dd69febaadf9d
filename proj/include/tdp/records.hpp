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

#ifndef TDP_RECORDS_HPP_
#define TDP_RECORDS_HPP_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tdp/evaluator.hpp"
#include "tdp/genotype.hpp"
#include "tdp/instance.hpp"

namespace tdp {

// Outcome of one seeded run.
struct RunRecord {
  std::string algorithm;  // canonical spec text
  std::string instance;
  uint64_t seed = 0;
  int64_t evals_used = 0;
  bool feasible = false;
  std::optional<int64_t> best_waste;  // absent when no solution was evaluated
  int64_t best_violation = 0;
  ModelKind kind;
  std::optional<Genotype> best_genotype;  // in the encoding of `kind`
  std::vector<int64_t> pressings;
  double wall_time = 0;  // seconds

  // Wall time is excluded: it is the only schedule-dependent field.
  bool operator==(const RunRecord& other) const;
};

// Fills fitness and pressings from the best member (pressings are recomputed,
// not charged).
RunRecord make_record(const ProblemInstance& inst, std::string algorithm,
                      uint64_t seed, int64_t evals_used, ModelKind kind,
                      const std::optional<Member>& best);

// One row per record:
// algorithm,instance,seed,evals_used,feasible,best_waste,best_violation,wall_time
// With include_timing false the wall_time column is written as 0, so reruns
// produce byte-identical files.
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records,
                       bool include_timing = true);
// Throws ParseError with the offending line.
std::vector<RunRecord> read_records_csv(std::istream& in);

// Best solutions keyed by (algorithm, instance, seed).
void write_solutions_json(std::ostream& out,
                          const std::vector<RunRecord>& records);
// Attaches the sidecar's solutions to matching records.
void read_solutions_json(std::istream& in, std::vector<RunRecord>& records);

}  // namespace tdp

#endif  // TDP_RECORDS_HPP_
