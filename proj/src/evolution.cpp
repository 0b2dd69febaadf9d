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

#include "tdp/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tdp/errors.hpp"
#include "tdp/local_search.hpp"

namespace tdp {

namespace {

void check_parents(std::span<const Genotype> parents) {
  if (parents.size() < 2) throw InvalidParameter("crossover needs >= 2 parents");
  for (const Genotype& p : parents) {
    if (p.model() != parents[0].model() || p.rows() != parents[0].rows() ||
        p.cols() != parents[0].cols()) {
      throw InvalidGenotype("parents differ in shape or model");
    }
  }
}

bool chance(double p, Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace

int gene_count(const ProblemInstance& inst, Model model) {
  return (model == Model::kClassical ? inst.variations() : inst.slots()) *
         inst.templates();
}

EvoParams genetic_params(const GeneticSpec& spec, int64_t budget) {
  EvoParams p;
  p.arity = spec.arity;
  p.crossover = spec.crossover;
  p.stagnation_limit = std::max<int64_t>(1, budget / 10);
  return p;
}

EvoParams memetic_params(const MemeticSpec& spec, int64_t budget) {
  EvoParams p;
  p.arity = spec.arity;
  p.crossover = spec.crossover;
  p.stagnation_limit = std::max<int64_t>(1, budget / 10);
  p.p_local_search = 0.005;
  p.ls_method = spec.ls_method;
  p.ls_cap = p.stagnation_limit;
  return p;
}

std::size_t tournament_select(std::span<const Member> pop, Rng& rng) {
  if (pop.size() < 2) throw InvalidParameter("tournament needs >= 2 members");
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  const std::size_t a = pick(rng);
  const std::size_t b = pick(rng);
  return pop[b].fitness < pop[a].fitness ? b : a;
}

Genotype uniform_crossover(std::span<const Genotype> parents, ModelKind kind,
                           Rng& rng) {
  check_parents(parents);
  Genotype child = parents[0];
  std::uniform_int_distribution<std::size_t> pick(0, parents.size() - 1);
  for (int j = 0; j < child.cols(); ++j) {
    const auto src = parents[pick(rng)].column(j);
    std::copy(src.begin(), src.end(), child.column(j).begin());
  }
  canonicalize_in_place(child, kind);
  return child;
}

std::optional<Genotype> greedy_crossover(Evaluator& eval,
                                         std::span<const Genotype> parents,
                                         ModelKind kind) {
  check_parents(parents);
  Genotype child = parents[0];
  for (int j = 0; j < child.cols(); ++j) {
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      const auto col = parents[k].column(j);
      const bool repeat = std::any_of(
          candidates.begin(), candidates.end(), [&](std::size_t c) {
            const auto other = parents[c].column(j);
            return std::equal(col.begin(), col.end(), other.begin());
          });
      if (!repeat) candidates.push_back(k);
    }
    std::size_t chosen = candidates[0];
    if (candidates.size() > 1) {
      std::optional<Fitness> best;
      for (std::size_t c : candidates) {
        const auto src = parents[c].column(j);
        std::copy(src.begin(), src.end(), child.column(j).begin());
        const auto f = eval.evaluate_partial(child, j + 1);
        if (!f) return std::nullopt;
        if (!best || *f < *best) {
          best = f;
          chosen = c;
        }
      }
    }
    const auto src = parents[chosen].column(j);
    std::copy(src.begin(), src.end(), child.column(j).begin());
  }
  canonicalize_in_place(child, kind);
  return child;
}

Genotype mutate(const Genotype& g, ModelKind kind, double p, int variations,
                Rng& rng) {
  Genotype out = g;
  if (p <= 0.0) return out;
  for (int j = 0; j < out.cols(); ++j) {
    for (int r = 0; r < out.rows(); ++r) {
      if (!chance(p, rng)) continue;
      if (out.model() == Model::kAlternative) {
        if (variations < 2) continue;
        int w = std::uniform_int_distribution<int>(1, variations - 1)(rng);
        if (w >= out.at(r, j)) ++w;
        out.at(r, j) = w;
        continue;
      }
      int donors = 0;
      for (int a = 0; a < out.rows(); ++a) donors += a != r && out.at(a, j) > 0;
      if (donors == 0) continue;
      int pick = std::uniform_int_distribution<int>(0, donors - 1)(rng);
      for (int a = 0; a < out.rows(); ++a) {
        if (a == r || out.at(a, j) == 0) continue;
        if (pick-- == 0) {
          --out.at(a, j);
          ++out.at(r, j);
          break;
        }
      }
    }
  }
  canonicalize_in_place(out, kind);
  return out;
}

Evolution::Evolution(const ProblemInstance& inst, ModelKind kind,
                     EvoParams params, uint64_t seed)
    : inst_(inst), kind_(kind), params_(params), rng_(seed) {
  if (params_.popsize < 2) throw InvalidParameter("popsize must be >= 2");
  if (params_.arity < 2) throw InvalidParameter("arity must be >= 2");
  for (double p : {params_.p_crossover, params_.p_local_search,
                   params_.restart_keep}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidParameter("probabilities must lie in [0, 1]");
    }
  }
  if (params_.p_mutation < 0) {
    params_.p_mutation = 1.0 / gene_count(inst, kind.model);
  }
  if (params_.p_mutation > 1.0) throw InvalidParameter("p_mutation > 1");
  params_.stagnation_limit = std::max<int64_t>(1, params_.stagnation_limit);
  if (params_.ls_cap <= 0) params_.ls_cap = params_.stagnation_limit;
}

std::optional<Fitness> Evolution::charge(Evaluator& eval, const Genotype& g,
                                         int64_t stop_at) {
  if (eval.used() >= stop_at) return std::nullopt;
  const auto f = eval.evaluate(g);
  if (f) ++since_improvement_;
  return f;
}

bool Evolution::contains(const Genotype& g) const {
  return std::any_of(pop_.begin(), pop_.end(),
                     [&](const Member& m) { return m.genotype == g; });
}

void Evolution::note(const Member& m) {
  if (!best_ || m.fitness < best_->fitness) {
    best_ = m;
    since_improvement_ = 0;
  }
}

void Evolution::run(Evaluator& eval, int64_t evals) {
  const int64_t stop_at =
      evals >= eval.remaining() ? eval.limit() : eval.used() + evals;
  while (eval.used() < stop_at) {
    if (filling_) {
      if (!fill(eval, stop_at)) return;
      continue;
    }
    if (!breed(eval, stop_at)) return;
    if (since_improvement_ >= params_.stagnation_limit) restart();
  }
}

bool Evolution::fill(Evaluator& eval, int64_t stop_at) {
  if (static_cast<int>(pop_.size()) >= params_.popsize) {
    filling_ = false;
    return true;
  }
  Genotype g = random_genotype(inst_, kind_, rng_);
  if (contains(g)) {
    // Tiny instances may not have popsize distinct genotypes.
    if (++duplicate_draws_ > 10 * params_.popsize) {
      filling_ = pop_.empty();
      if (pop_.empty()) return false;
    }
    return true;
  }
  const auto f = charge(eval, g, stop_at);
  if (!f) return false;
  Member m{std::move(g), *f};
  note(m);
  pop_.push_back(std::move(m));
  return true;
}

bool Evolution::breed(Evaluator& eval, int64_t stop_at) {
  Genotype child;
  if (pop_.size() >= 2 && chance(params_.p_crossover, rng_)) {
    std::vector<Genotype> parents;
    for (int k = 0; k < params_.arity; ++k) {
      parents.push_back(pop_[tournament_select(pop_, rng_)].genotype);
    }
    if (params_.crossover == Crossover::kUniform) {
      child = uniform_crossover(parents, kind_, rng_);
    } else {
      const int64_t before = eval.used();
      auto g = greedy_crossover(eval, parents, kind_);
      since_improvement_ += eval.used() - before;
      if (!g) return false;
      child = std::move(*g);
    }
  } else {
    child = pop_.size() >= 2 ? pop_[tournament_select(pop_, rng_)].genotype
                             : pop_[0].genotype;
  }
  child = mutate(child, kind_, params_.p_mutation, inst_.variations(), rng_);

  Member offspring;
  if (params_.p_local_search > 0 && chance(params_.p_local_search, rng_)) {
    LocalSearchParams lp;
    lp.method = params_.ls_method;
    lp.tenure = params_.tenure;
    lp.restart = false;
    lp.stagnation_limit = std::max<int64_t>(1, params_.ls_cap / 10);
    LocalSearch ls(inst_, kind_, lp, rng_());
    ls.start_from(std::move(child));
    const int64_t before = eval.used();
    ls.run(eval, std::min(params_.ls_cap, stop_at - before));
    since_improvement_ += eval.used() - before;
    if (!ls.has_best()) return false;
    offspring = ls.best();
  } else {
    const auto f = charge(eval, child, stop_at);
    if (!f) return false;
    offspring = {std::move(child), *f};
  }
  note(offspring);
  admit(std::move(offspring));
  return true;
}

void Evolution::admit(Member child) {
  if (contains(child.genotype)) return;
  if (static_cast<int>(pop_.size()) < params_.popsize) {
    pop_.push_back(std::move(child));
    return;
  }
  std::size_t worst = 0;
  for (std::size_t k = 1; k < pop_.size(); ++k) {
    if (pop_[worst].fitness < pop_[k].fitness) worst = k;
  }
  if (!(pop_[worst].fitness < child.fitness)) pop_[worst] = std::move(child);
}

void Evolution::restart() {
  std::stable_sort(pop_.begin(), pop_.end(),
                   [](const Member& a, const Member& b) {
                     return a.fitness < b.fitness;
                   });
  const auto keep = static_cast<std::size_t>(std::max(
      1.0, std::ceil(params_.restart_keep * params_.popsize)));
  if (pop_.size() > keep) pop_.resize(keep);
  filling_ = true;
  duplicate_draws_ = 0;
  since_improvement_ = 0;
}

RunRecord run_evolution(const ProblemInstance& inst, const std::string& name,
                        ModelKind kind, const EvoParams& params, int64_t budget,
                        uint64_t seed) {
  if (budget < params.popsize) {
    throw BudgetError("budget must cover the initial population");
  }
  const auto t0 = std::chrono::steady_clock::now();
  Evaluator eval(inst, budget);
  Evolution evo(inst, kind, params, seed);
  evo.run(eval, budget);
  std::optional<Member> best;
  if (evo.has_best()) best = evo.best();
  RunRecord r = make_record(inst, name, seed, eval.used(), kind, best);
  r.wall_time = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0).count();
  return r;
}

RunRecord run_ga(const ProblemInstance& inst, const GeneticSpec& spec,
                 int64_t budget, uint64_t seed) {
  return run_evolution(inst, format_spec(MemberSpec(spec)), spec.kind,
                       genetic_params(spec, budget), budget, seed);
}

RunRecord run_ma(const ProblemInstance& inst, const MemeticSpec& spec,
                 int64_t budget, uint64_t seed) {
  return run_evolution(inst, format_spec(MemberSpec(spec)), spec.kind,
                       memetic_params(spec, budget), budget, seed);
}

}  // namespace tdp
