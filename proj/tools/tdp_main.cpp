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

// tdp: solve, evaluate and compare template design runs.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tdp/algspec.hpp"
#include "tdp/errors.hpp"
#include "tdp/experiment.hpp"
#include "tdp/pressing.hpp"
#include "tdp/records.hpp"
#include "tdp/statistics.hpp"

namespace {

using namespace tdp;

std::vector<RunRecord> load_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open " + path);
  return read_records_csv(in);
}

int solve(const std::vector<std::string>& instance_sources,
          const std::vector<std::string>& algos, ExperimentOptions options,
          const std::string& out_path) {
  std::vector<ProblemInstance> instances;
  for (const auto& src : instance_sources) {
    instances.push_back(resolve_instance(src));
  }
  std::vector<AlgorithmSpec> specs;
  for (const auto& text : algos) {
    specs.push_back(parse_spec(text));
    if (const auto* c = std::get_if<CooperativeSpec>(&specs.back())) {
      if (!is_supported_policy_pair(c->migration, c->acceptance)) {
        std::cerr << "warning: " << text
                  << " migrates the worst candidate; this pair is outside "
                     "the six supported policy pairs\n";
      }
    }
  }
  options.progress = [](const RunRecord& r) {
    std::cerr << fmt::format("{} {} seed {}: {} waste {} ({} evals, {:.1f}s)\n",
                             r.algorithm, r.instance, r.seed,
                             r.feasible ? "feasible" : "infeasible",
                             r.best_waste ? std::to_string(*r.best_waste) : "-",
                             r.evals_used, r.wall_time);
  };
  const auto records = run_experiment(instances, specs, options);
  if (out_path.empty()) {
    write_records_csv(std::cout, records);
  } else {
    std::ofstream csv(out_path);
    write_records_csv(csv, records);
    std::ofstream sidecar(out_path + ".json");
    write_solutions_json(sidecar, records);
  }
  for (const auto& cell : feasibility_summary(records)) {
    std::cerr << fmt::format("{:<40} {:<10} {}\n", cell.algorithm,
                             cell.instance, cell.text());
  }
  return 0;
}

int evaluate(const std::string& instance_source, const std::string& path) {
  const ProblemInstance inst = resolve_instance(instance_source);
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open " + path);
  const SolutionDocument doc = read_solution(in);
  const Genotype design = as_classical(doc.genotype, inst);
  const PressingPlan plan =
      doc.pressings ? evaluate_with_pressings(inst, design, *doc.pressings)
                    : optimize_pressings(inst, design);
  const DeviationReport dev = deviation_report(inst, plan);

  fmt::print("instance {}  v={} t={} s={}\n", inst.name(), inst.variations(),
             inst.templates(), inst.slots());
  fmt::print("pressings");
  for (int64_t r : plan.pressings) fmt::print(" {}", r);
  fmt::print("{}\n", doc.pressings ? "" : "  (optimized)");
  fmt::print("{:>4} {:>10} {:>10} {:>9}\n", "var", "demand", "produced",
             "dev %");
  for (int i = 0; i < inst.variations(); ++i) {
    fmt::print("{:>4} {:>10} {:>10} {:>9.2f}\n", i + 1, inst.demand(i),
               plan.production[i], dev.percent[i]);
  }
  fmt::print("waste {}\n", plan.waste);
  fmt::print("overall deviation {:.2f} %\n", dev.overall_percent);
  fmt::print("extreme deviations {:.2f} % / {:.2f} %\n", dev.min_percent,
             dev.max_percent);
  fmt::print("violation {}\n", plan.violation);
  fmt::print("feasible {}\n", plan.feasible ? "yes" : "no");
  return plan.feasible ? 0 : 3;
}

int rank(const std::string& path, bool stats, double alpha) {
  const auto records = load_results(path);
  for (const auto& cell : feasibility_summary(records)) {
    fmt::print("{:<40} {:<10} {}\n", cell.algorithm, cell.instance, cell.text());
  }
  const RankTable table = rank_algorithms(records);
  const auto avg = table.average();
  std::vector<std::size_t> order(avg.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return avg[a] < avg[b]; });
  fmt::print("\naverage ranking\n");
  for (std::size_t j : order) {
    fmt::print("{:<40} {:.2f}\n", table.algorithms[j], avg[j]);
  }
  if (!stats) return 0;
  if (table.k() < 2 || table.n() < 2) {
    fmt::print("\nstatistics need at least two algorithms and two instances\n");
    return 0;
  }
  const double chi2 = friedman_statistic(table);
  const auto crit = critical_values(alpha, table.n(), table.k());
  fmt::print("\nFriedman chi2 {:.6f} (critical {:.6f})\n", chi2, crit.chi2);
  try {
    fmt::print("Iman-Davenport {:.6f} (critical {:.6f})\n",
               iman_davenport(chi2, table.n(), table.k()), crit.f);
  } catch (const InvalidParameter&) {
    fmt::print("Iman-Davenport undefined (complete agreement)\n");
  }
  const std::string control = table.algorithms[order.front()];
  fmt::print("\nHolm versus {}\n", control);
  fmt::print("{:>3} {:<40} {:>10} {:>10} {:>10}\n", "i", "algorithm", "z", "p",
             "alpha/i");
  for (const auto& row : holm_versus_control(table, control, alpha)) {
    fmt::print("{:>3} {:<40} {:>10.3e} {:>10.3e} {:>10.3e} {}\n", row.i,
               row.label, row.z, row.p, row.threshold,
               row.significant ? "significant" : "");
  }
  return 0;
}

int compare(const std::string& path, const std::string& control_text,
            double alpha) {
  const auto records = load_results(path);
  const std::string control = format_spec(parse_spec(control_text));
  std::map<std::pair<std::string, std::string>, std::vector<Fitness>> runs;
  std::set<std::string> instances;
  for (const RunRecord& r : records) {
    runs[{r.algorithm, r.instance}].push_back(
        {r.best_violation, r.best_waste.value_or(0)});
    instances.insert(r.instance);
  }
  std::set<std::string> algorithms;
  for (const auto& [key, v] : runs) algorithms.insert(key.first);
  if (!algorithms.count(control)) throw InvalidInput("no runs of " + control);
  fmt::print("{:<40}", "algorithm");
  for (const auto& inst : instances) fmt::print(" {:>12}", inst);
  fmt::print("\n");
  for (const auto& alg : algorithms) {
    if (alg == control) continue;
    fmt::print("{:<40}", alg);
    for (const auto& inst : instances) {
      const auto a = runs.find({control, inst});
      const auto b = runs.find({alg, inst});
      if (a == runs.end() || b == runs.end()) {
        fmt::print(" {:>12}", "-");
        continue;
      }
      // Runs are ordered by (violation, waste); the test sees ordinal scores.
      std::vector<Fitness> all = a->second;
      all.insert(all.end(), b->second.begin(), b->second.end());
      std::sort(all.begin(), all.end());
      auto score = [&](const std::vector<Fitness>& fs) {
        std::vector<double> out;
        for (const Fitness& f : fs) {
          out.push_back(double(std::lower_bound(all.begin(), all.end(), f) -
                               all.begin()));
        }
        return out;
      };
      const double p = ranksum_test(score(a->second), score(b->second));
      fmt::print(" {:>9.3e} {}", p, p < alpha ? "*" : " ");
    }
    fmt::print("\n");
  }
  fmt::print("* significant at alpha = {}\n", alpha);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Template design problem solver"};
  app.require_subcommand(1);

  std::vector<std::string> instances;
  std::vector<std::string> algos;
  ExperimentOptions options;
  int64_t budget = 0;
  std::string out_path;
  auto* solve_cmd = app.add_subcommand("solve", "run algorithms on instances");
  solve_cmd->add_option("--instance", instances, "builtin:<name> or a path")
      ->required();
  solve_cmd->add_option("--algo", algos, "algorithm notation")->required();
  solve_cmd->add_option("--runs", options.runs, "runs per non-cooperative spec");
  solve_cmd->add_option("--seed", options.seed0, "seed of the first run");
  solve_cmd->add_option("--percent", options.percent,
                        "fraction of the neighborhood scale used as budget");
  solve_cmd->add_option("--budget", budget, "evaluations per run (overrides)");
  solve_cmd->add_option("--cycles", options.cycles, "cooperative cycles");
  solve_cmd->add_option("--workers", options.workers, "concurrent runs");
  solve_cmd->add_option("--out", out_path,
                        "results CSV (solutions go to <out>.json)");

  std::string instance;
  std::string solution;
  auto* eval_cmd = app.add_subcommand("eval", "report on one solution");
  eval_cmd->add_option("--instance", instance)->required();
  eval_cmd->add_option("--solution", solution)->required();

  std::string results;
  bool stats = false;
  double alpha = 0.05;
  auto* rank_cmd = app.add_subcommand("rank", "feasibility counts and ranks");
  rank_cmd->add_option("--results", results)->required();
  rank_cmd->add_flag("--stats", stats, "Friedman, Iman-Davenport and Holm");
  rank_cmd->add_option("--alpha", alpha);

  std::string control;
  auto* compare_cmd = app.add_subcommand("compare", "rank-sum head to head");
  compare_cmd->add_option("--results", results)->required();
  compare_cmd->add_option("--control", control)->required();
  compare_cmd->add_option("--alpha", alpha);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve_cmd) {
      if (budget > 0) options.budget = budget;
      return solve(instances, algos, options, out_path);
    }
    if (*eval_cmd) return evaluate(instance, solution);
    if (*rank_cmd) return rank(results, stats, alpha);
    if (*compare_cmd) return compare(results, control, alpha);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
