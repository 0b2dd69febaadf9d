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

// Acceptance harness: one PASS/FAIL line per criterion, non-zero exit when
// any criterion fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "tdp/algspec.hpp"
#include "tdp/cooperative.hpp"
#include "tdp/evaluator.hpp"
#include "tdp/evolution.hpp"
#include "tdp/experiment.hpp"
#include "tdp/local_search.hpp"
#include "tdp/pressing.hpp"
#include "tdp/statistics.hpp"

namespace tdp {
namespace {

constexpr double kPercentTol = 0.01;      // deviation percentages
constexpr double kIdTol = 1e-4;           // Iman-Davenport statistic
constexpr double kCriticalTol = 5e-3;     // chi-square and F quantiles
constexpr double kBudgetPercent = 0.05;   // %_v for the stochastic runs
constexpr int kRuns = 20;
constexpr int kCoopCatfoodRuns = 10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Columns = std::vector<std::vector<int>>;

std::vector<int> runs(std::initializer_list<std::pair<int, int>> items) {
  std::vector<int> out;
  for (auto [count, repeat] : items) out.insert(out.end(), repeat, count);
  return out;
}

Genotype design(const Columns& c) { return Genotype::from_columns(Model::kClassical, c); }

Genotype catfood_t8() { return design({{1, 1, 1, 2, 2, 2, 0}, {0, 0, 0, 0, 0, 2, 7}}); }

Genotype herbs_t8() {
  return design({runs({{1, 15}, {0, 1}, {1, 7}, {2, 3}, {3, 2}, {4, 2}}),
                 runs({{0, 9}, {1, 6}, {6, 1}, {1, 3}, {2, 4}, {1, 1}, {6, 2},
                       {2, 2}, {1, 2}})});
}

Genotype magazine_t8() {
  return design({runs({{1, 6}, {2, 5}, {0, 14}, {1, 11}, {2, 6}, {0, 4}, {1, 1}, {0, 3}}),
                 runs({{0, 4}, {1, 2}, {0, 4}, {1, 1}, {0, 11}, {1, 3}, {0, 7},
                       {1, 4}, {0, 6}, {3, 4}, {2, 3}, {12, 1}}),
                 runs({{0, 11}, {1, 36}, {2, 2}, {0, 1}})});
}

Genotype herbs_t9() {
  return design({runs({{1, 10}, {0, 1}, {1, 7}, {0, 1}, {1, 4}, {2, 1}, {3, 3},
                       {2, 1}, {4, 2}}),
                 runs({{0, 9}, {1, 1}, {5, 1}, {1, 7}, {6, 1}, {2, 4}, {1, 1},
                       {2, 3}, {6, 1}, {1, 2}})});
}

Genotype magazine_t9() {
  return design({runs({{0, 11}, {1, 36}, {2, 2}, {0, 1}}),
                 runs({{1, 3}, {0, 1}, {1, 2}, {2, 5}, {0, 14}, {1, 11}, {2, 6},
                       {1, 1}, {0, 3}, {1, 1}, {0, 3}}),
                 runs({{0, 3}, {2, 1}, {1, 2}, {0, 4}, {1, 1}, {0, 11}, {1, 3},
                       {0, 7}, {1, 4}, {0, 6}, {1, 1}, {3, 3}, {2, 3}, {12, 1}})});
}

Outcome criterion1() {
  const auto inst = builtin_instance("catfood");
  const auto plan = evaluate_with_pressings(inst, catfood_t8(),
                                            std::vector<int64_t>{250000, 157143});
  const auto dev = deviation_report(inst, plan);
  const bool ok = plan.waste == 29287 && plan.feasible &&
                  std::abs(dev.overall_percent - 0.80) <= kPercentTol &&
                  std::abs(dev.min_percent + 3.85) <= kPercentTol &&
                  std::abs(dev.max_percent - 1.79) <= kPercentTol;
  return {ok, fmt::format("catfood waste {} overall {:.2f}% extremes {:.2f}%/{:+.2f}%",
                          plan.waste, dev.overall_percent, dev.min_percent,
                          dev.max_percent)};
}

Outcome criterion2() {
  const auto herbs = builtin_instance("herbs");
  const auto mag = builtin_instance("magazine");
  const auto h8 = optimize_pressings(herbs, herbs_t8());
  const auto m8 = optimize_pressings(mag, magazine_t8());
  const auto h9 = optimize_pressings(herbs, herbs_t9());
  const auto m9 = optimize_pressings(mag, magazine_t9());
  const bool ok = h8.waste == 104548 && m8.waste == 277500 && h9.waste == 104000 &&
                  m9.waste == 246000 && h8.feasible && m8.feasible && h9.feasible &&
                  m9.feasible;
  return {ok, fmt::format("herbs {} / {}, magazine {} / {}", h8.waste, h9.waste,
                          m8.waste, m9.waste)};
}

Outcome criterion3() {
  const auto inst = builtin_instance("catfood");
  const auto fast = optimize_pressings(inst, catfood_t8());
  const std::vector<PressingRange> box = {{240000, 260000}, {150000, 165000}};
  const auto brute = brute_force_pressings(inst, catfood_t8(), box);
  const bool ok = fast.waste == 29287 && fast.fitness() == brute.fitness();
  return {ok, fmt::format("solver {} brute force {}", fast.waste, brute.waste)};
}

Outcome criterion4() {
  const double f = iman_davenport(51.557143, 3, 20);
  return {std::abs(f - 18.944882) <= kIdTol, fmt::format("F_ID = {:.6f}", f)};
}

Outcome criterion5() {
  const auto cv = critical_values(0.05, 3, 20);
  const bool ok = std::abs(cv.chi2 - 30.1435) <= kCriticalTol &&
                  std::abs(cv.f - 1.8673) <= kCriticalTol;
  return {ok, fmt::format("chi2 {:.4f} F {:.4f}", cv.chi2, cv.f)};
}

Outcome criterion6() {
  std::vector<std::pair<std::string, double>> ps;
  for (int k = 0; k < 11; ++k) ps.emplace_back(std::to_string(k), 1.0 - 0.01 * k);
  const auto rows = holm_test(ps, 0.05);
  const std::vector<std::string> expected = {
      "5.000e-02", "2.500e-02", "1.667e-02", "1.250e-02", "1.000e-02", "8.333e-03",
      "7.143e-03", "6.250e-03", "5.556e-03", "5.000e-03", "4.545e-03"};
  bool ok = rows.size() == expected.size();
  for (std::size_t i = 0; ok && i < rows.size(); ++i) {
    ok = rows[i].i == static_cast<int>(i) + 1 &&
         fmt::format("{:.3e}", rows[i].threshold) == expected[i];
  }
  return {ok, fmt::format("thresholds {} ... {}", fmt::format("{:.3e}", rows.front().threshold),
                          fmt::format("{:.3e}", rows.back().threshold))};
}

// Runs seeds 1..runs; stops early once `needed` feasible runs are in when
// `stop_when_met` is set.
struct Tally {
  int feasible = 0;
  int runs = 0;
};

Tally tally(const std::string& instance, const std::string& algo, int runs,
            int needed = 0, bool stop_when_met = false) {
  const auto inst = builtin_instance(instance);
  const auto spec = parse_spec(algo);
  const int64_t budget = compute_budget(inst, kBudgetPercent);
  Tally t;
  for (int s = 1; s <= runs; ++s) {
    const auto r = run_algorithm(inst, spec, budget, s);
    ++t.runs;
    t.feasible += r.feasible;
    if (stop_when_met && t.feasible >= needed) break;
  }
  return t;
}

std::string share(const Tally& t, const std::string& what) {
  return fmt::format("{} {}/{}", what, t.feasible, t.runs);
}

// At least `percent` of `runs`, rounded up.
int needed(double percent, int runs) {
  return static_cast<int>(std::ceil(percent * runs - 1e-9));
}

Outcome criterion7() {
  const auto p = tally("catfood", "Hc.P*", kRuns);
  const auto d = tally("catfood", "Hc.D*", kRuns);
  const int need = needed(0.70, kRuns);
  return {p.feasible >= need && d.feasible >= need,
          fmt::format("{}, {} (need {} each)", share(p, "Hc.P*"), share(d, "Hc.D*"), need)};
}

Outcome criterion8() {
  const auto c = tally("catfood", "Ga.P.A4.Gd", kRuns);
  const auto h = tally("herbs", "Ga.P.A4.Gd", kRuns);
  const int nc = needed(0.60, kRuns);
  const int nh = needed(0.50, kRuns);
  return {c.feasible >= nc && h.feasible >= nh,
          fmt::format("{} (need {}), {} (need {})", share(c, "catfood"), nc,
                      share(h, "herbs"), nh)};
}

Outcome criterion9() {
  const std::string algo = "Ma.Hc.P*.A2.Ux";
  const auto c = tally("catfood", algo, kRuns);
  const auto h = tally("herbs", algo, kRuns);
  const auto m = tally("magazine", algo, kRuns, 1, true);
  const int need = needed(0.60, kRuns);
  return {c.feasible >= need && h.feasible >= need && m.feasible >= 1,
          fmt::format("{}, {} (need {} each), {} (need 1)", share(c, "catfood"),
                      share(h, "herbs"), need, share(m, "magazine"))};
}

Outcome criterion10() {
  const std::string algo = "Bc5(Ts.D,Ma.Hc.P*.A2.Ux)RD";
  const auto c = tally("catfood", algo, kCoopCatfoodRuns);
  const auto m = tally("magazine", algo, kRuns, 1, true);
  const int need = needed(0.80, kCoopCatfoodRuns);
  return {c.feasible >= need && m.feasible >= 1,
          fmt::format("{} (need {}), {} (need 1)", share(c, "catfood"), need,
                      share(m, "magazine"))};
}

// Property suites.

bool encoding_round_trip() {
  for (const auto& name : builtin_instance_names()) {
    const auto inst = builtin_instance(name);
    Rng rng(101);
    for (int k = 0; k < 300; ++k) {
      const auto g = random_genotype(inst, {Model::kClassical, false}, rng);
      const auto alt = classical_to_alternative(g, inst.slots());
      if (alternative_to_classical(alt, inst.variations()) != g) return false;
      const auto a = random_genotype(inst, {Model::kAlternative, true}, rng);
      const auto back = classical_to_alternative(as_classical(a, inst), inst.slots());
      if (canonicalize(back, {Model::kAlternative, true}) != a) return false;
    }
  }
  return true;
}

bool canonical_idempotent() {
  const auto inst = builtin_instance("magazine");
  Rng rng(102);
  for (Model model : {Model::kClassical, Model::kAlternative}) {
    const ModelKind sb{model, true};
    for (int k = 0; k < 300; ++k) {
      const auto c = canonicalize(random_genotype(inst, {model, false}, rng), sb);
      if (!is_canonical(c, sb) || canonicalize(c, sb) != c) return false;
    }
  }
  return true;
}

bool symmetry_invariant() {
  const auto inst = builtin_instance("catfood");
  Rng rng(103);
  for (int k = 0; k < 100; ++k) {
    const auto g = random_genotype(inst, {Model::kClassical, false}, rng);
    const auto f = fitness(inst, g);
    if (fitness(inst, canonicalize(g, {Model::kClassical, true})) != f) return false;
    auto alt = classical_to_alternative(g, inst.slots());
    std::reverse(alt.column(0).begin(), alt.column(0).end());
    if (fitness(inst, alt) != f) return false;
  }
  return true;
}

bool population_distinct() {
  const auto inst = builtin_instance("catfood");
  for (const char* name : {"Ga.P.A4.Gd", "Ga.D*.A2.Ux", "Ma.Ts.P*.A2.Ux"}) {
    const auto spec = parse_spec(name);
    EvoParams params;
    ModelKind kind;
    if (const auto* g = std::get_if<GeneticSpec>(&spec)) {
      params = genetic_params(*g, 4200);
      kind = g->kind;
    } else {
      const auto& m = std::get<MemeticSpec>(spec);
      params = memetic_params(m, 4200);
      params.p_local_search = 0.2;
      kind = m.kind;
    }
    Evolution evo(inst, kind, params, 104);
    Evaluator eval(inst, 4200);
    while (!eval.exhausted()) {
      evo.run(eval, 100);
      std::set<Genotype> seen;
      for (const auto& m : evo.population()) {
        if (!seen.insert(m.genotype).second) return false;
      }
    }
  }
  return true;
}

bool budget_exact() {
  const auto inst = builtin_instance("catfood");
  for (const char* name : {"Hc.D", "Ts.P*", "Ga.P.A2.Gd", "Ma.Ts.D.A4.Ux"}) {
    const auto r = run_algorithm(inst, parse_spec(name), 3000, 105);
    if (r.evals_used != 3000) return false;
  }
  const auto coop = parse_spec("Ri3(Ts.D,Ma.Hc.P*.A2.Ux)RD");
  if (run_algorithm(inst, coop, 4200, 105).evals_used != 4200) return false;

  // Counted independently of the evaluator's own tally.
  LocalSearchParams lp;
  lp.method = SearchMethod::kTabuSearch;
  lp.stagnation_limit = 300;
  LocalSearch ls(inst, {Model::kAlternative, false}, lp, 105);
  Evaluator eval(inst, 3000);
  int64_t calls = 0;
  eval.set_observer([&](const Genotype&, const Fitness&) { ++calls; });
  ls.run(eval, 3000);
  return calls == 3000 && eval.used() == 3000;
}

bool parser_round_trip() {
  std::vector<std::string> names;
  for (const char* m : {"Hc", "Ts"}) {
    for (const char* k : {"P", "P*", "D", "D*"}) names.push_back(fmt::format("{}.{}", m, k));
  }
  for (const char* prefix : {"Ga", "Ma.Hc", "Ma.Ts"}) {
    for (const char* k : {"P", "P*", "D", "D*"}) {
      for (int a : {2, 4}) {
        for (const char* x : {"Ux", "Gd"}) {
          names.push_back(fmt::format("{}.{}.A{}.{}", prefix, k, a, x));
        }
      }
    }
  }
  if (names.size() != 8 + 16 + 32) return false;
  for (const char* coop :
       {"Bc2(Ts.D,Ma.Hc.P*.A2.Ux)RD", "Ra3(Ts.D,Ma.Hc.P*.A2.Ux)RD",
        "Ri3(Ts.D,Ma.Hc.P*.A2.Ux)RD", "Bc4(Ts.D,Ma.Hc.P*.A2.Ux)RD",
        "Bc5(Ts.D,Ma.Hc.P*.A2.Ux)RD", "Ri5(Ts.D,Ma.Hc.P*.A2.Ux)RD",
        "Ra2(Ts.D,Ga.D*.A4.Gd)DW", "Ri3(Ts.D,Ga.D*.A4.Gd)RD",
        "Bc4(Ts.D,Ga.D*.A4.Gd)RD", "Bc5(Ts.D,Ga.D*.A4.Gd)RD",
        "Ra5(Ts.D,Ga.D*.A4.Gd)RD", "Ri5(Ts.D,Ga.D*.A4.Gd)RD",
        "Bc2(Ts.D,Ma.Ts.P.A2.Gd)RD", "Bc4(Ts.D,Ma.Ts.P.A2.Gd)RD",
        "Bc5(Ts.D,Ma.Ts.P.A2.Gd)RD", "Ra5(Ts.D,Ma.Ts.P.A2.Gd)RD",
        "Ri5(Ts.D,Ma.Ts.P.A2.Gd)RD", "Bc4(3Ts.P,Ma.Ts.D*.A4.Gd)RD",
        "Ra5(3Ts.P,2Ma.Ts.P.A2.Gd)DW"}) {
    names.push_back(coop);
  }
  for (const auto& n : names) {
    if (format_spec(parse_spec(n)) != n) return false;
  }
  for (const char* loose : {"Bc4(Ts.P,Ts.P,Ts.P,MA.Ts.D*.A4.Gd)RD",
                            "Ra2(Ts.P, MA.Ts.D.A2.Gd)RW",
                            "Ri3(Ts.P, MA.Ts.P.A2.Gd, MA.Ts.D.A4.Gd)RD"}) {
    const auto spec = parse_spec(loose);
    if (parse_spec(format_spec(spec)) != spec) return false;
  }
  return true;
}

bool oracle_equivalence() {
  Rng rng(106);
  std::uniform_int_distribution<int64_t> demand(5, 60);
  for (int k = 0; k < 100; ++k) {
    const int t = k % 2 ? 2 : 3;
    const int v = t == 2 ? 4 : 3;
    std::vector<int64_t> q(v);
    for (auto& x : q) x = t == 2 ? demand(rng) : demand(rng) / 3 + 2;
    const ProblemInstance inst("small", v, t, 4, q, std::vector<double>(v, 0.1),
                               std::vector<double>(v, 0.1));
    int64_t top = 0;
    for (const auto& b : inst.bands()) top = std::max(top, b.high);
    const std::vector<PressingRange> grid(t, {0, top + 1});
    const auto g = random_genotype(inst, {Model::kClassical, false}, rng);
    if (optimize_pressings(inst, g, 1'000'000).fitness() !=
        brute_force_pressings(inst, g, grid).fitness()) {
      return false;
    }
  }
  return true;
}

Outcome criterion11() {
  const std::vector<std::pair<const char*, std::function<bool()>>> suites = {
      {"encoding", encoding_round_trip},   {"canonical", canonical_idempotent},
      {"symmetry", symmetry_invariant},    {"population", population_distinct},
      {"budget", budget_exact},            {"parser", parser_round_trip},
      {"oracle", oracle_equivalence},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, fn] : suites) {
    const bool pass = fn();
    ok = ok && pass;
    detail += fmt::format("{}{}={}", detail.empty() ? "" : " ", name, pass ? "ok" : "FAILED");
  }
  return {ok, detail};
}

}  // namespace
}  // namespace tdp

int main() {
  using Criterion = std::function<tdp::Outcome()>;
  const std::vector<std::pair<int, Criterion>> criteria = {
      {1, tdp::criterion1}, {2, tdp::criterion2},   {3, tdp::criterion3},
      {4, tdp::criterion4}, {5, tdp::criterion5},   {6, tdp::criterion6},
      {7, tdp::criterion7}, {8, tdp::criterion8},   {9, tdp::criterion9},
      {10, tdp::criterion10}, {11, tdp::criterion11},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    tdp::Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("criterion {:>2}: {} - {} ({:.1f} s)\n", id, out.pass ? "PASS" : "FAIL",
               out.detail, secs);
    std::fflush(stdout);
    failed += !out.pass;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
