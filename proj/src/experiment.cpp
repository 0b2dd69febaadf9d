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

#include "tdp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "tdp/errors.hpp"
#include "tdp/evolution.hpp"
#include "tdp/local_search.hpp"

namespace tdp {

namespace {

RunRecord run_local_search(const ProblemInstance& inst,
                           const LocalSearchSpec& spec, int64_t budget,
                           uint64_t seed) {
  if (budget < 1) throw BudgetError("budget must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  LocalSearchParams p;
  p.method = spec.method;
  p.stagnation_limit = std::max<int64_t>(1, budget / 10);
  LocalSearch ls(inst, spec.kind, p, seed);
  Evaluator eval(inst, budget);
  ls.run(eval, budget);
  std::optional<Member> best;
  if (ls.has_best()) best = ls.best();
  RunRecord r = make_record(inst, format_spec(MemberSpec(spec)), seed,
                            eval.used(), spec.kind, best);
  r.wall_time = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct Job {
  std::size_t spec;
  std::size_t instance;
  uint64_t seed;
};

}  // namespace

RunRecord run_algorithm(const ProblemInstance& inst, const AlgorithmSpec& spec,
                        int64_t budget, uint64_t seed, int cycles) {
  return std::visit(
      [&](const auto& s) -> RunRecord {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LocalSearchSpec>) {
          return run_local_search(inst, s, budget, seed);
        } else if constexpr (std::is_same_v<T, GeneticSpec>) {
          return run_ga(inst, s, budget, seed);
        } else if constexpr (std::is_same_v<T, MemeticSpec>) {
          return run_ma(inst, s, budget, seed);
        } else {
          return run_cooperative(inst, s, budget, cycles, seed);
        }
      },
      spec);
}

int runs_for(const AlgorithmSpec& spec, const ExperimentOptions& options) {
  if (const auto* c = std::get_if<CooperativeSpec>(&spec)) {
    return c->agents * options.cooperative_runs_per_agent;
  }
  return options.runs;
}

std::vector<RunRecord> run_experiment(
    const std::vector<ProblemInstance>& instances,
    const std::vector<AlgorithmSpec>& specs, const ExperimentOptions& options) {
  if (instances.empty() || specs.empty()) {
    throw EmptyInput("need at least one instance and one algorithm");
  }
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const int runs = runs_for(specs[s], options);
      for (int r = 0; r < runs; ++r) jobs.push_back({s, i, options.seed0 + r});
    }
  }
  std::vector<RunRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t k; (k = next++) < jobs.size();) {
      const Job& job = jobs[k];
      const ProblemInstance& inst = instances[job.instance];
      try {
        const int64_t budget =
            options.budget ? *options.budget
                           : compute_budget(inst, options.percent);
        out[k] = run_algorithm(inst, specs[job.spec], budget, job.seed,
                               options.cycles);
        std::lock_guard lock(mu);
        if (options.progress) options.progress(out[k]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace tdp
