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

#include "tdp/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tdp/errors.hpp"

namespace tdp {

namespace {

int64_t move_count(const Genotype& g, int variations) {
  if (g.model() == Model::kAlternative) {
    return int64_t(g.rows()) * g.cols() * (variations - 1);
  }
  int64_t donors = 0;
  for (int x : g.cells()) donors += x > 0;
  return donors * (variations - 1);
}

std::optional<Fitness> charge(Evaluator& eval, const Genotype& g,
                              int64_t stop_at) {
  if (eval.used() >= stop_at) return std::nullopt;
  return eval.evaluate(g);
}

}  // namespace

int64_t compute_budget(const ProblemInstance& inst, double percent) {
  if (!(percent > 0.0 && percent <= 1.0)) {
    throw InvalidParameter("percent must lie in (0, 1]");
  }
  const double v = inst.variations();
  return std::llround(1000.0 * inst.templates() * v * (v - 1) * percent);
}

int64_t neighborhood_size(const ProblemInstance& inst, Model model) {
  const int64_t v = inst.variations();
  const int64_t per_template =
      model == Model::kClassical ? v * (v - 1) : inst.slots() * (v - 1);
  return inst.templates() * per_template;
}

Genotype apply_move(const Genotype& g, const Move& m, ModelKind kind,
                    int variations) {
  if (m.col < 0 || m.col >= g.cols()) throw InvalidMove("template out of range");
  Genotype out = g;
  if (g.model() == Model::kClassical) {
    if (m.from < 0 || m.from >= g.rows() || m.to < 0 || m.to >= g.rows()) {
      throw InvalidMove("variation out of range");
    }
    if (m.from == m.to) throw InvalidMove("donor and recipient coincide");
    if (out.at(m.from, m.col) < 1) throw InvalidMove("donor has no slot");
    --out.at(m.from, m.col);
    ++out.at(m.to, m.col);
  } else {
    if (m.slot < 0 || m.slot >= g.rows()) throw InvalidMove("slot out of range");
    if (out.at(m.slot, m.col) != m.from) {
      throw InvalidMove("slot does not hold the old label");
    }
    if (m.to < 1 || m.to > variations || m.to == m.from) {
      throw InvalidMove("invalid new label");
    }
    out.at(m.slot, m.col) = m.to;
  }
  canonicalize_in_place(out, kind);
  return out;
}

Move reverse_move(const Move& m) { return {m.col, m.to, m.from, m.slot}; }

std::vector<Move> all_moves(const Genotype& g, int variations) {
  std::vector<Move> out;
  for (int j = 0; j < g.cols(); ++j) {
    if (g.model() == Model::kClassical) {
      for (int a = 0; a < g.rows(); ++a) {
        if (g.at(a, j) == 0) continue;
        for (int b = 0; b < g.rows(); ++b) {
          if (b != a) out.push_back({j, a, b, -1});
        }
      }
    } else {
      for (int h = 0; h < g.rows(); ++h) {
        for (int w = 1; w <= variations; ++w) {
          if (w != g.at(h, j)) out.push_back({j, g.at(h, j), w, h});
        }
      }
    }
  }
  return out;
}

std::optional<Move> random_move(const Genotype& g, int variations, Rng& rng) {
  const int64_t total = move_count(g, variations);
  if (total == 0) return std::nullopt;
  int64_t k = std::uniform_int_distribution<int64_t>(0, total - 1)(rng);
  const int64_t others = variations - 1;
  if (g.model() == Model::kAlternative) {
    const int64_t cell = k / others;
    const int j = static_cast<int>(cell / g.rows());
    const int h = static_cast<int>(cell % g.rows());
    const int old = g.at(h, j);
    int w = static_cast<int>(k % others) + 1;
    if (w >= old) ++w;
    return Move{j, old, w, h};
  }
  for (int j = 0; j < g.cols(); ++j) {
    for (int a = 0; a < g.rows(); ++a) {
      if (g.at(a, j) == 0) continue;
      if (k < others) {
        int b = static_cast<int>(k);
        if (b >= a) ++b;
        return Move{j, a, b, -1};
      }
      k -= others;
    }
  }
  return std::nullopt;
}

std::vector<Neighbor> sample_neighbors(const ProblemInstance& inst,
                                       const Genotype& g, ModelKind kind,
                                       Rng& rng, int k) {
  std::vector<Neighbor> out;
  if (k < 1) return out;
  const int v = inst.variations();
  std::unordered_set<Genotype, GenotypeHash> seen;
  auto offer = [&](const Move& m) {
    Genotype n = apply_move(g, m, kind, v);
    if (seen.insert(n).second) out.push_back({m, std::move(n)});
  };
  if (k >= move_count(g, v)) {
    std::vector<Move> moves = all_moves(g, v);
    std::shuffle(moves.begin(), moves.end(), rng);
    for (const Move& m : moves) {
      if (static_cast<int>(out.size()) == k) break;
      offer(m);
    }
    return out;
  }
  for (int tries = 4 * k + 16; tries > 0 && static_cast<int>(out.size()) < k;
       --tries) {
    offer(*random_move(g, v, rng));
  }
  return out;
}

LocalSearch::LocalSearch(const ProblemInstance& inst, ModelKind kind,
                         LocalSearchParams params, uint64_t seed)
    : inst_(inst), kind_(kind), params_(params), rng_(seed) {
  if (params_.tenure < 1) throw InvalidParameter("tabu tenure must be >= 1");
  if (params_.stagnation_limit < 1) params_.stagnation_limit = 1;
  sample_ = params_.sample;
  if (sample_ <= 0) {
    sample_ = static_cast<int>(
        std::max<int64_t>(1, neighborhood_size(inst, kind.model) / 100));
    if (params_.method == SearchMethod::kTabuSearch) sample_ *= 2;
  }
}

void LocalSearch::start_from(Genotype g) {
  canonicalize_in_place(g, kind_);
  pending_ = std::move(g);
  current_.reset();
}

void LocalSearch::start_from(Member m) {
  canonicalize_in_place(m.genotype, kind_);
  pending_.reset();
  set_current(m);
  record(m);
}

void LocalSearch::set_current(Member m) {
  current_ = std::move(m);
  since_restart_best_ = current_->fitness;
  since_improvement_ = 0;
  tabu_until_.clear();
}

void LocalSearch::record(const Member& m) {
  if (!best_ || m.fitness < best_->fitness) best_ = m;
  if (static_cast<int>(archive_.size()) == kArchiveSize &&
      !(m.fitness < archive_.back().fitness)) {
    return;
  }
  for (const Member& a : archive_) {
    if (a.genotype == m.genotype) return;
  }
  auto at = std::upper_bound(
      archive_.begin(), archive_.end(), m.fitness,
      [](const Fitness& f, const Member& a) { return f < a.fitness; });
  archive_.insert(at, m);
  if (static_cast<int>(archive_.size()) > kArchiveSize) archive_.pop_back();
}

void LocalSearch::adopt(const Member& m) {
  if (!best_ || m.fitness < best_->fitness) best_ = m;
  if (!current_ || m.fitness < current_->fitness) {
    pending_.reset();
    set_current(m);
  }
}

void LocalSearch::run(Evaluator& eval, int64_t evals) {
  const int64_t stop_at =
      evals >= eval.remaining() ? eval.limit() : eval.used() + evals;
  while (!stopped_ && eval.used() < stop_at) {
    if (!current_) {
      Genotype g = pending_ ? *pending_ : random_genotype(inst_, kind_, rng_);
      const auto f = charge(eval, g, stop_at);
      if (!f) return;
      pending_.reset();
      Member m{std::move(g), *f};
      set_current(m);
      record(m);
      continue;
    }
    if (since_improvement_ >= params_.stagnation_limit) {
      if (!params_.restart) {
        stopped_ = true;
        return;
      }
      current_.reset();
      continue;
    }
    if (!step(eval, stop_at)) return;
  }
}

bool LocalSearch::step(Evaluator& eval, int64_t stop_at) {
  ++iteration_;
  return params_.method == SearchMethod::kHillClimbing
             ? hill_climb_step(eval, stop_at)
             : tabu_step(eval, stop_at);
}

bool LocalSearch::hill_climb_step(Evaluator& eval, int64_t stop_at) {
  auto sample = sample_neighbors(inst_, current_->genotype, kind_, rng_, sample_);
  if (sample.empty()) {
    since_improvement_ = params_.stagnation_limit;
    return true;
  }
  for (Neighbor& n : sample) {
    const auto f = charge(eval, n.genotype, stop_at);
    if (!f) return false;
    Member m{std::move(n.genotype), *f};
    record(m);
    if (*f < current_->fitness) {
      current_ = std::move(m);
      since_restart_best_ = *f;
      since_improvement_ = 0;
      return true;
    }
    if (++since_improvement_ >= params_.stagnation_limit) return true;
  }
  return true;
}

uint64_t LocalSearch::tabu_key(const Move& m) const {
  // Index based: (template, row or slot, value). For the classical model a
  // move's reverse is forbidden; for the alternative one, restoring the old
  // label of the slot.
  const uint64_t a = static_cast<uint32_t>(m.col);
  const uint64_t b = static_cast<uint32_t>(m.slot >= 0 ? m.slot : m.from);
  const uint64_t c = static_cast<uint32_t>(m.to);
  return (a << 42) ^ (b << 21) ^ c;
}

bool LocalSearch::tabu_step(Evaluator& eval, int64_t stop_at) {
  auto sample = sample_neighbors(inst_, current_->genotype, kind_, rng_, sample_);
  if (sample.empty()) {
    since_improvement_ = params_.stagnation_limit;
    return true;
  }
  const Fitness incumbent = best_->fitness;
  std::optional<std::size_t> chosen;
  std::optional<Fitness> chosen_fitness;
  bool complete = true;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const auto f = charge(eval, sample[k].genotype, stop_at);
    if (!f) {
      complete = false;
      break;
    }
    record({sample[k].genotype, *f});
    if (*f < *since_restart_best_) {
      since_restart_best_ = *f;
      since_improvement_ = 0;
    } else {
      ++since_improvement_;
    }
    auto it = tabu_until_.find(tabu_key(sample[k].move));
    const bool tabu = it != tabu_until_.end() && it->second >= iteration_;
    if (tabu && !(*f < incumbent)) continue;
    if (!chosen_fitness || *f < *chosen_fitness) {
      chosen = k;
      chosen_fitness = *f;
    }
  }
  if (chosen) {
    const Move m = sample[*chosen].move;
    current_ = Member{std::move(sample[*chosen].genotype), *chosen_fitness};
    tabu_until_[tabu_key(reverse_move(m))] = iteration_ + params_.tenure;
  }
  return complete;
}

namespace {

SearchResult run_standalone(const ProblemInstance& inst, ModelKind kind,
                            const Genotype& start, int64_t budget,
                            LocalSearchParams params, uint64_t seed) {
  if (budget < 1) throw InvalidParameter("budget must be positive");
  params.stagnation_limit = std::max<int64_t>(1, budget / 10);
  LocalSearch ls(inst, kind, params, seed);
  ls.start_from(start);
  Evaluator eval(inst, budget);
  ls.run(eval, budget);
  return {ls.best().genotype, ls.best().fitness, eval.used()};
}

}  // namespace

SearchResult hill_climb(const ProblemInstance& inst, ModelKind kind,
                        const Genotype& start, int64_t budget, uint64_t seed) {
  LocalSearchParams p;
  p.method = SearchMethod::kHillClimbing;
  return run_standalone(inst, kind, start, budget, p, seed);
}

SearchResult tabu_search(const ProblemInstance& inst, ModelKind kind,
                         const Genotype& start, int64_t budget, int tenure,
                         uint64_t seed) {
  if (tenure < 1) throw InvalidParameter("tabu tenure must be >= 1");
  LocalSearchParams p;
  p.method = SearchMethod::kTabuSearch;
  p.tenure = tenure;
  return run_standalone(inst, kind, start, budget, p, seed);
}

}  // namespace tdp
