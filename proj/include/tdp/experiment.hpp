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

#ifndef TDP_EXPERIMENT_HPP_
#define TDP_EXPERIMENT_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tdp/algspec.hpp"
#include "tdp/cooperative.hpp"
#include "tdp/instance.hpp"
#include "tdp/records.hpp"

namespace tdp {

// Single seeded run of any algorithm. Local search starts from a random
// genotype drawn from the run's generator.
RunRecord run_algorithm(const ProblemInstance& inst, const AlgorithmSpec& spec,
                        int64_t budget, uint64_t seed,
                        int cycles = kDefaultCycles);

struct ExperimentOptions {
  int runs = 20;
  double percent = 0.05;
  uint64_t seed0 = 1;
  std::optional<int64_t> budget;  // overrides compute_budget
  int cycles = kDefaultCycles;
  int workers = 1;
  // Cooperative specs run `agents` x this many times ("n x 10").
  int cooperative_runs_per_agent = 10;
  // Called after each finished run (from worker threads, serialized).
  std::function<void(const RunRecord&)> progress;
};

// Runs per (spec, instance): `runs`, or agents x cooperative_runs_per_agent
// for cooperative specs; run r uses seed seed0 + r. Records come back sorted
// by (spec order, instance order, seed) whatever the worker count.
std::vector<RunRecord> run_experiment(
    const std::vector<ProblemInstance>& instances,
    const std::vector<AlgorithmSpec>& specs, const ExperimentOptions& options);

int runs_for(const AlgorithmSpec& spec, const ExperimentOptions& options);

}  // namespace tdp

#endif  // TDP_EXPERIMENT_HPP_
