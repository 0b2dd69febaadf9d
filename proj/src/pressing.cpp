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

#include "tdp/pressing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "tdp/errors.hpp"

namespace tdp {
namespace {

// Row-major copy of a classical design for fast dot products.
struct Design {
  int v = 0;
  int t = 0;
  std::vector<int64_t> counts;  // v * t

  const int64_t* row(int i) const { return counts.data() + std::size_t(i) * t; }
};

Design make_design(const ProblemInstance& inst, const Genotype& g) {
  if (g.model() != Model::kClassical) {
    throw InvalidGenotype("pressing needs a classical design");
  }
  validate_genotype(g, inst);
  Design d;
  d.v = g.rows();
  d.t = g.cols();
  d.counts.resize(std::size_t(d.v) * d.t);
  for (int i = 0; i < d.v; ++i) {
    for (int j = 0; j < d.t; ++j) d.counts[std::size_t(i) * d.t + j] = g.at(i, j);
  }
  return d;
}

Fitness score(const ProblemInstance& inst, const Design& d,
              const int64_t* pressings) {
  Fitness f;
  auto bands = inst.bands();
  for (int i = 0; i < d.v; ++i) {
    const int64_t* a = d.row(i);
    int64_t p = 0;
    for (int j = 0; j < d.t; ++j) p += a[j] * pressings[j];
    const int64_t q = inst.demand(i);
    f.waste += p > q ? p - q : q - p;
    if (p < bands[i].low) f.violation += bands[i].low - p;
    if (p > bands[i].high) f.violation += p - bands[i].high;
  }
  return f;
}

PressingPlan make_plan(const ProblemInstance& inst, const Design& d,
                       std::vector<int64_t> pressings) {
  PressingPlan plan;
  plan.production.resize(d.v);
  plan.under.resize(d.v);
  plan.over.resize(d.v);
  auto bands = inst.bands();
  for (int i = 0; i < d.v; ++i) {
    const int64_t* a = d.row(i);
    int64_t p = 0;
    for (int j = 0; j < d.t; ++j) p += a[j] * pressings[j];
    const int64_t q = inst.demand(i);
    plan.production[i] = p;
    plan.under[i] = std::max<int64_t>(q - p, 0);
    plan.over[i] = std::max<int64_t>(p - q, 0);
    plan.waste += plan.under[i] + plan.over[i];
    if (p < bands[i].low) plan.violation += bands[i].low - p;
    if (p > bands[i].high) plan.violation += p - bands[i].high;
  }
  plan.feasible = plan.violation == 0;
  plan.pressings = std::move(pressings);
  return plan;
}

// Strict "is candidate better" with the lexicographically smaller plan
// winning ties, so results do not depend on search order.
bool improves(const Fitness& f, const std::vector<int64_t>& r,
              const Fitness& best_f, const std::vector<int64_t>& best_r) {
  if (f != best_f) return f < best_f;
  return r < best_r;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Inverts a dense n x n row-major matrix with partial pivoting. Returns false
// when (numerically) singular.
bool invert(std::vector<double>& m, int n, std::vector<double>& inv) {
  inv.assign(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inv[std::size_t(i) * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(m[std::size_t(r) * n + col]) >
          std::abs(m[std::size_t(pivot) * n + col])) {
        pivot = r;
      }
    }
    const double pv = m[std::size_t(pivot) * n + col];
    if (std::abs(pv) < 1e-12) return false;
    if (pivot != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(m[std::size_t(pivot) * n + k], m[std::size_t(col) * n + k]);
        std::swap(inv[std::size_t(pivot) * n + k],
                  inv[std::size_t(col) * n + k]);
      }
    }
    for (int k = 0; k < n; ++k) {
      m[std::size_t(col) * n + k] /= pv;
      inv[std::size_t(col) * n + k] /= pv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[std::size_t(r) * n + col];
      if (f == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        m[std::size_t(r) * n + k] -= f * m[std::size_t(col) * n + k];
        inv[std::size_t(r) * n + k] -= f * inv[std::size_t(col) * n + k];
      }
    }
  }
  return true;
}

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {  // b > 0
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

// Non-negative rational num / den, den > 0.
struct Rational {
  i128 num = 0;
  i128 den = 1;

  i128 ceil() const { return ceil_div(num, den); }
  bool at_least(i128 v) const { return num >= v * den; }
};

// Per-variation penalty: viol * (distance outside the band) + waste * |p - Q|.
struct Weights {
  int64_t viol = 0;
  int64_t waste = 0;
};

// Weight making K * violation + waste order integer plans exactly like
// (violation, waste): K exceeds the waste of any plan no more violating than
// R = 0.
int64_t violation_weight(const ProblemInstance& inst) {
  int64_t span = 0;
  auto bands = inst.bands();
  for (int i = 0; i < inst.variations(); ++i) {
    span += bands[i].high + inst.demand(i);
  }
  int64_t k = 1;
  while (k <= 2 * span) k <<= 1;
  return k;
}

// Breakpoints b = (low, Q, high), possibly shifted by fixed production.
i128 penalty(const int64_t* b, int64_t p, Weights w) {
  const int64_t viol = std::max<int64_t>(b[0] - p, 0) +
                       std::max<int64_t>(p - b[2], 0);
  return i128(w.viol) * viol + i128(w.waste) * (p > b[1] ? p - b[1] : b[1] - p);
}

// den * penalty at production num / den.
i128 penalty_scaled(const int64_t* b, i128 num, i128 den, Weights w) {
  auto pos = [](i128 x) { return x > 0 ? x : i128(0); };
  const i128 dq = num - i128(b[1]) * den;
  return i128(w.viol) * (pos(i128(b[0]) * den - num) +
                         pos(num - i128(b[2]) * den)) +
         i128(w.waste) * (dq < 0 ? -dq : dq);
}

struct Shape {
  int64_t slope[4];
  int64_t jump[3];

  explicit Shape(Weights w)
      : slope{-(w.viol + w.waste), -w.waste, w.waste, w.viol + w.waste},
        jump{w.viol, 2 * w.waste, w.viol} {}
};

// The objective restricted to the last f templates once the leading ones are
// fixed. Variations not touched by the free templates only contribute a
// constant, kept as separate violation and waste totals.
struct Slice {
  int f = 0;
  std::vector<int> rows;     // variation index of each free row
  std::vector<int64_t> a;    // rows x f, row-major, all entries >= 0
  std::vector<int64_t> brk;  // rows x 3: low, Q, high less fixed production
  int64_t fixed_viol = 0;
  int64_t fixed_waste = 0;

  int size() const { return static_cast<int>(rows.size()); }
  const int64_t* row(int r) const { return a.data() + std::size_t(r) * f; }
  const int64_t* breaks(int r) const { return brk.data() + std::size_t(r) * 3; }
  i128 fixed(Weights w) const {
    return i128(w.viol) * fixed_viol + i128(w.waste) * fixed_waste;
  }
};

Slice make_slice(const Design& d, const std::vector<int64_t>& brk, int level,
                 const std::vector<int64_t>& base) {
  Slice s;
  s.f = d.t - level;
  for (int i = 0; i < d.v; ++i) {
    const int64_t* a = d.row(i) + level;
    const int64_t* b = brk.data() + std::size_t(i) * 3;
    const int64_t p = base[i];
    if (std::all_of(a, a + s.f, [](int64_t x) { return x == 0; })) {
      s.fixed_viol += std::max<int64_t>(b[0] - p, 0) +
                      std::max<int64_t>(p - b[2], 0);
      s.fixed_waste += p > b[1] ? p - b[1] : b[1] - p;
      continue;
    }
    s.rows.push_back(i);
    s.a.insert(s.a.end(), a, a + s.f);
    s.brk.insert(s.brk.end(), {b[0] - p, b[1] - p, b[2] - p});
  }
  return s;
}

struct WalkResult {
  bool ok = false;
  std::vector<double> r;
  std::vector<int> basis;    // bound j -> -(j + 1); breakpoint -> row*3+k
  std::vector<int> segment;  // per row; -1 when the row is in the basis
};

// Vertex walk minimizing a continuous slice objective over R >= 0: a
// simplex-style pivot on one active hyperplane at a time with an exact line
// search along the edge, starting from R = 0. Breakpoints are perturbed by
// distinct sub-unit offsets (order preserved) so that vertices are simple.
// Only the final basis matters downstream; bounds are certified exactly.
class Walk {
 public:
  Walk(const Shape& shape, const Slice& s) : s_(s), f_(s.f) {
    for (int k = 0; k < 4; ++k) slope_[k] = double(shape.slope[k]);
    for (int k = 0; k < 3; ++k) jump_[k] = double(shape.jump[k]);
    breaks_.resize(std::size_t(s.size()) * 3);
    for (int r = 0; r < s.size(); ++r) {
      auto jitter = [&](int k) {
        const uint64_t h = splitmix64(uint64_t(s.rows[r]) * 3 + k);
        return 0.05 + 0.9 * double(h >> 11) * 0x1.0p-53;
      };
      constexpr double kScale = 0.1;
      const int64_t* b = s.breaks(r);
      breaks_[r * 3 + 0] = double(b[0]) - kScale * jitter(0);
      breaks_[r * 3 + 1] = double(b[1]) + kScale * jitter(1);
      breaks_[r * 3 + 2] = double(b[2]) + kScale * (1.0 + jitter(2));
    }
  }

  WalkResult run() {
    const int f = f_;
    const int n = s_.size();
    WalkResult out;
    out.basis.resize(f);
    for (int j = 0; j < f; ++j) out.basis[j] = -(j + 1);
    std::vector<int>& basis = out.basis;
    std::vector<double>& r = out.r;
    r.assign(f, 0.0);
    std::vector<double> inv, b(std::size_t(f) * f), rhs(f);
    std::vector<int> active_of(n, -1);
    std::vector<double> p(n), best_dir(f);

    auto rebuild = [&]() -> bool {
      std::fill(active_of.begin(), active_of.end(), -1);
      for (int m = 0; m < f; ++m) {
        double* row = b.data() + std::size_t(m) * f;
        if (basis[m] < 0) {
          std::fill(row, row + f, 0.0);
          row[-basis[m] - 1] = 1.0;
          rhs[m] = 0.0;
        } else {
          const int i = basis[m] / 3;
          const int64_t* a = s_.row(i);
          for (int j = 0; j < f; ++j) row[j] = double(a[j]);
          rhs[m] = breaks_[basis[m]];
          active_of[i] = basis[m] % 3;
        }
      }
      std::vector<double> work = b;
      if (!invert(work, f, inv)) return false;
      for (int j = 0; j < f; ++j) {
        double acc = 0.0;
        for (int m = 0; m < f; ++m) acc += inv[std::size_t(j) * f + m] * rhs[m];
        r[j] = acc;
      }
      for (int m = 0; m < f; ++m) {
        if (basis[m] < 0) r[-basis[m] - 1] = 0.0;
      }
      return true;
    };

    if (!rebuild()) return out;
    const int max_iterations = 20 * (n + f) + 50;
    bool optimal = false;
    std::vector<double> rate(std::size_t(n) * f);  // a_i . (column m of B^-1)
    std::vector<double> row_slope(n), c(n);
    for (int iter = 0; iter < max_iterations; ++iter) {
      for (int i = 0; i < n; ++i) {
        const int64_t* a = s_.row(i);
        double pi = 0.0;
        for (int j = 0; j < f; ++j) pi += double(a[j]) * r[j];
        p[i] = pi;
        row_slope[i] = active_of[i] >= 0 ? 0.0 : slope_[segment(i, pi)];
        for (int m = 0; m < f; ++m) {
          double acc = 0.0;
          for (int j = 0; j < f; ++j) {
            acc += double(a[j]) * inv[std::size_t(j) * f + m];
          }
          rate[std::size_t(i) * f + m] = acc;
        }
      }
      // Moving along +-column m keeps every other basic hyperplane active and
      // leaves the one in slot m; rows in the basis only see their own slot.
      double best_slope = -1e-7;
      int best_m = -1;
      int best_sign = 0;
      for (int m = 0; m < f; ++m) {
        double free_part = 0.0;
        for (int i = 0; i < n; ++i) {
          free_part += rate[std::size_t(i) * f + m] * row_slope[i];
        }
        for (int sign : {+1, -1}) {
          if (sign < 0 && basis[m] < 0) continue;
          double slope = sign * free_part;
          if (basis[m] >= 0) {
            const int k = basis[m] % 3;
            slope += sign > 0 ? slope_[k + 1] : -slope_[k];
          }
          if (slope < best_slope) {
            best_slope = slope;
            best_m = m;
            best_sign = sign;
          }
        }
      }
      if (best_m < 0) {
        optimal = true;
        break;
      }
      for (int j = 0; j < f; ++j) {
        best_dir[j] = best_sign * inv[std::size_t(j) * f + best_m];
      }
      for (int i = 0; i < n; ++i) {
        c[i] = best_sign * rate[std::size_t(i) * f + best_m];
      }
      const int entering =
          line_search(p, c, active_of, best_dir, r, best_slope);
      if (entering == kNoEntry) break;
      const int saved = basis[best_m];
      basis[best_m] = entering;
      if (!rebuild()) {
        basis[best_m] = saved;
        rebuild();
        break;
      }
    }
    if (!optimal) return out;
    out.segment.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      if (active_of[i] < 0) out.segment[i] = segment(i, p[i]);
    }
    for (double& x : r) x = std::max(x, 0.0);
    out.ok = true;
    return out;
  }

 private:
  static constexpr int kNoEntry = std::numeric_limits<int>::min();

  int segment(int i, double p) const {
    const double* br = &breaks_[std::size_t(i) * 3];
    return (p > br[0]) + (p > br[1]) + (p > br[2]);
  }

  struct Event {
    double alpha;
    double weight;
    int id;
  };

  int line_search(const std::vector<double>& p, const std::vector<double>& c,
                  const std::vector<int>& active_of,
                  const std::vector<double>& dir, const std::vector<double>& r,
                  double slope) {
    double alpha_max = std::numeric_limits<double>::infinity();
    int bound_entry = kNoEntry;
    for (int j = 0; j < f_; ++j) {
      if (dir[j] < -1e-15) {
        const double a = r[j] / -dir[j];
        if (a < alpha_max) {
          alpha_max = a;
          bound_entry = -(j + 1);
        }
      }
    }
    events_.clear();
    for (int i = 0; i < s_.size(); ++i) {
      if (c[i] == 0.0) continue;
      const double* br = &breaks_[std::size_t(i) * 3];
      for (int k = 0; k < 3; ++k) {
        if (active_of[i] == k || jump_[k] == 0.0) continue;
        const double a = (br[k] - p[i]) / c[i];
        if (a > 0.0 && a <= alpha_max) {
          events_.push_back({a, std::abs(c[i]) * jump_[k], i * 3 + k});
        }
      }
    }
    std::sort(events_.begin(), events_.end(),
              [](const Event& x, const Event& y) {
                return x.alpha < y.alpha || (x.alpha == y.alpha && x.id < y.id);
              });
    for (const Event& e : events_) {
      slope += e.weight;
      if (slope >= 0.0) return e.id;
    }
    return bound_entry;
  }

  const Slice& s_;
  int f_;
  double slope_[4];
  double jump_[3];
  std::vector<double> breaks_;
  std::vector<Event> events_;
};

// Lower bound on a continuous slice objective over real R >= 0 from the dual
// point implied by the walk's final basis. Multipliers y with
// |y_i| <= viol + waste and sum_i y_i a_i >= 0 give
//   L(R) >= fixed + sum_i min_b (g_i(b) - y_i b)
// over each row's breakpoints b, so the bound holds whatever the walk's
// rounding and is tight when the basis is optimal. Returns nothing when the
// multipliers fail those conditions.
std::optional<Rational> certified_bound(Weights w, const Slice& s,
                                        const WalkResult& walk) {
  if (!walk.ok) return std::nullopt;
  const Shape shape(w);
  const int f = s.f;
  const int n = s.size();
  std::vector<int> basis_slot(n, -1);
  for (int m = 0; m < f; ++m) {
    if (walk.basis[m] >= 0) basis_slot[walk.basis[m] / 3] = m;
  }
  std::vector<int64_t> rhs(f, 0);
  for (int i = 0; i < n; ++i) {
    if (basis_slot[i] >= 0) continue;
    const int64_t y = shape.slope[walk.segment[i]];
    const int64_t* a = s.row(i);
    for (int j = 0; j < f; ++j) rhs[j] -= y * a[j];
  }
  std::vector<int64_t> bt(std::size_t(f) * f, 0);
  for (int m = 0; m < f; ++m) {
    for (int j = 0; j < f; ++j) {
      bt[std::size_t(j) * f + m] = walk.basis[m] < 0
                                       ? (j == -walk.basis[m] - 1)
                                       : s.row(walk.basis[m] / 3)[j];
    }
  }
  std::vector<i128> num;
  i128 den = 0;
  if (!solve_exact(bt, rhs, num, den)) return std::nullopt;
  const i128 cap = i128(w.viol + w.waste) * den;
  for (int m = 0; m < f; ++m) {
    if (walk.basis[m] < 0 ? num[m] > 0 : (num[m] > cap || num[m] < -cap)) {
      return std::nullopt;
    }
  }
  i128 total = s.fixed(w) * den;
  for (int i = 0; i < n; ++i) {
    const i128 yn = basis_slot[i] >= 0
                        ? num[basis_slot[i]]
                        : i128(shape.slope[walk.segment[i]]) * den;
    const int64_t* b = s.breaks(i);
    const i128 g[3] = {i128(w.waste) * (b[1] - b[0]), 0,
                       i128(w.waste) * (b[2] - b[1])};
    i128 best = 0;
    for (int k = 0; k < 3; ++k) {
      const i128 v = g[k] * den - yn * b[k];
      if (k == 0 || v < best) best = v;
    }
    total += best;
  }
  return Rational{total, den};
}

// Continuous minimum of a one-template slice, exactly.
Rational line_bound(Weights w, const Slice& s) {
  const Shape shape(w);
  const int n = s.size();
  i128 slope = 0;  // right derivative at x = 0
  struct Event {
    int64_t num;
    int64_t den;
    int64_t weight;
  };
  std::vector<Event> events;
  for (int i = 0; i < n; ++i) {
    const int64_t* b = s.breaks(i);
    const int64_t a = s.a[i];
    const int seg = (b[0] <= 0) + (b[1] <= 0) + (b[2] <= 0);
    slope += i128(a) * shape.slope[seg];
    for (int k = 0; k < 3; ++k) {
      if (b[k] > 0 && shape.jump[k] != 0) {
        events.push_back({b[k], a, a * shape.jump[k]});
      }
    }
  }
  int64_t xn = 0;
  int64_t xd = 1;
  if (slope < 0) {
    std::sort(events.begin(), events.end(), [](const Event& l, const Event& r) {
      return i128(l.num) * r.den < i128(r.num) * l.den;
    });
    for (const Event& e : events) {
      slope += e.weight;
      if (slope >= 0) {
        xn = e.num;
        xd = e.den;
        break;
      }
    }
  }
  Rational out{s.fixed(w) * xd, xd};
  for (int i = 0; i < n; ++i) {
    out.num += penalty_scaled(s.breaks(i), i128(s.a[i]) * xn, xd, w);
  }
  return out;
}

// Integer minimizer of a one-template slice, ties to the smaller count.
std::pair<int64_t, i128> line_argmin(Weights w, const Slice& s, int64_t hint) {
  auto value_at = [&](int64_t x) {
    i128 total = s.fixed(w);
    for (int i = 0; i < s.size(); ++i) {
      total += penalty(s.breaks(i), s.a[i] * x, w);
    }
    return total;
  };
  int64_t x = std::max<int64_t>(hint, 0);
  i128 v = value_at(x);
  // Convexity makes a discrete local minimum global.
  while (x > 0) {
    const i128 left = value_at(x - 1);
    if (left > v) break;
    --x;
    v = left;
  }
  while (true) {
    const i128 right = value_at(x + 1);
    if (right >= v) break;
    ++x;
    v = right;
  }
  return {x, v};
}

// Point where the continuous one-template minimum sits, rounded down.
int64_t line_start(Weights w, const Slice& s) {
  const Shape shape(w);
  i128 slope = 0;
  std::vector<std::pair<double, int64_t>> events;
  for (int i = 0; i < s.size(); ++i) {
    const int64_t* b = s.breaks(i);
    const int64_t a = s.a[i];
    slope += i128(a) * shape.slope[(b[0] <= 0) + (b[1] <= 0) + (b[2] <= 0)];
    for (int k = 0; k < 3; ++k) {
      if (b[k] > 0 && shape.jump[k] != 0) {
        events.push_back({double(b[k]) / double(a), a * shape.jump[k]});
      }
    }
  }
  if (slope >= 0) return 0;
  std::sort(events.begin(), events.end());
  for (const auto& [x, weight] : events) {
    slope += weight;
    if (slope >= 0) return static_cast<int64_t>(std::floor(x));
  }
  return 0;
}

// Search work is metered in one-template bound evaluations; a walk over a
// wider slice costs about this many of them.
constexpr int64_t kWalkCost = 16;

// A lower bound term: scale * (continuous minimum under weights) + offset.
// Each weighted objective is integral at integer points, which lets the
// minimum be rounded up before scaling when pruning.
struct BoundTerm {
  Weights w;
  i128 scale = 1;
  i128 offset = 0;
  i128 divisor = 1;
};

// Exact minimization of the target objective over non-negative integer R.
// Templates are fixed one at a time and slices are scanned outward from the
// continuous optimum. Every bound term is convex in the fixed count, so once
// one certifies a value no better than the starting slice the rest of that
// direction cannot contain anything better.
class ExactSearch {
 public:
  ExactSearch(const Design& d, const std::vector<int64_t>& brk, Weights target,
              std::vector<BoundTerm> terms, std::vector<int64_t> start,
              i128 start_value, int64_t* budget,
              const WalkResult* top_walk = nullptr)
      : d_(d),
        brk_(brk),
        target_(target),
        terms_(std::move(terms)),
        current_(d.t, 0),
        best_(std::move(start)),
        best_value_(start_value),
        budget_(budget),
        top_walk_(top_walk) {}

  std::vector<int64_t> run() {
    search(0, std::vector<int64_t>(d_.v, 0));
    return best_;
  }

  // False when the work budget ran out before optimality was certified.
  bool complete() const { return !exhausted_; }

  i128 best_value() const { return best_value_; }

 private:
  void offer(i128 value) {
    if (value < best_value_ || (value == best_value_ && current_ < best_)) {
      best_value_ = value;
      best_ = current_;
    }
  }

  std::vector<int64_t> advance(const std::vector<int64_t>& base, int level,
                               int64_t x) const {
    std::vector<int64_t> next = base;
    for (int i = 0; i < d_.v; ++i) next[i] += d_.row(i)[level] * x;
    return next;
  }

  struct SliceBound {
    bool known = true;  // every term certified
    i128 prune = 0;     // lower bound on the integer minimum
    std::vector<std::optional<Rational>> parts;
    int64_t start = 0;  // suggested first count for the next template

    // Convex lower bound at least v.
    bool at_least(i128 v, const std::vector<BoundTerm>& terms) const {
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (!parts[k]) continue;
        const Rational& r = *parts[k];
        if (Rational{terms[k].scale * r.num + terms[k].offset * r.den,
                     r.den * terms[k].divisor}
                .at_least(v)) {
          return true;
        }
      }
      return false;
    }
  };

  SliceBound bound(const Slice& s) const {
    *budget_ -= s.f == 1 ? std::int64_t(terms_.size())
                         : kWalkCost * std::int64_t(terms_.size());
    if (*budget_ < 0) exhausted_ = true;
    SliceBound out;
    out.prune = std::numeric_limits<i128>::min();
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const BoundTerm& term = terms_[k];
      Rational r;
      if (s.f == 1) {
        r = line_bound(term.w, s);
        if (k == 0) out.start = line_start(term.w, s);
      } else {
        WalkResult fresh;
        const WalkResult* known = nullptr;
        if (k == 0 && top_walk_ != nullptr && s.f == d_.t) {
          known = top_walk_;
          top_walk_ = nullptr;
        } else {
          fresh = Walk(Shape(term.w), s).run();
        }
        const WalkResult& walk = known ? *known : fresh;
        if (k == 0 && walk.ok) {
          out.start = std::max<int64_t>(0, std::llround(walk.r[0]));
        }
        const auto c = certified_bound(term.w, s, walk);
        if (!c) {
          out.known = false;
          out.parts.emplace_back();
          continue;
        }
        r = *c;
      }
      out.parts.push_back(r);
      out.prune = std::max(
          out.prune,
          ceil_div(term.scale * r.ceil() + term.offset, term.divisor));
    }
    return out;
  }

  // Searches a slice whose bound is already known; returns the best target
  // value found inside it (an upper bound on its minimum).
  i128 search_slice(int level, const std::vector<int64_t>& base,
                    const Slice& s, const SliceBound& sb) {
    if (s.f == 1) {
      const auto [x, value] = line_argmin(target_, s, sb.start);
      current_[level] = x;
      offer(value);
      return value;
    }
    auto child_of = [&](int64_t x) {
      return make_slice(d_, brk_, level + 1, advance(base, level, x));
    };
    const int64_t x0 = sb.start;
    current_[level] = x0;
    i128 found;
    {
      const std::vector<int64_t> next = advance(base, level, x0);
      const Slice child = child_of(x0);
      found = search_slice(level + 1, next, child, bound(child));
    }
    const i128 start = found;
    // Nothing in this slice beats its own lower bound.
    auto settled = [&]() { return sb.known && found <= sb.prune; };
    for (int side : {+1, -1}) {
      for (int64_t x = x0 + side; x >= 0 && !settled() && !exhausted_;
           x += side) {
        current_[level] = x;
        const std::vector<int64_t> next = advance(base, level, x);
        const Slice child = make_slice(d_, brk_, level + 1, next);
        const SliceBound cb = bound(child);
        if (!cb.known || cb.prune < best_value_) {
          found = std::min(found, search_slice(level + 1, next, child, cb));
        }
        if (cb.at_least(start, terms_)) break;
      }
    }
    return found;
  }

  void search(int level, const std::vector<int64_t>& base) {
    const Slice s = make_slice(d_, brk_, level, base);
    const SliceBound sb = bound(s);
    if (sb.known && sb.prune >= best_value_) return;
    search_slice(level, base, s, sb);
  }

  const Design& d_;
  const std::vector<int64_t>& brk_;
  Weights target_;
  std::vector<BoundTerm> terms_;
  std::vector<int64_t> current_;
  std::vector<int64_t> best_;
  i128 best_value_;
  int64_t* budget_;
  mutable bool exhausted_ = false;
  // Walk already run on the unrestricted problem under the first term.
  mutable const WalkResult* top_walk_;
};


i128 objective(const Design& d, const std::vector<int64_t>& brk,
               const std::vector<int64_t>& r, Weights w) {
  i128 total = 0;
  for (int i = 0; i < d.v; ++i) {
    const int64_t* a = d.row(i);
    int64_t p = 0;
    for (int j = 0; j < d.t; ++j) p += a[j] * r[j];
    total += penalty(brk.data() + std::size_t(i) * 3, p, w);
  }
  return total;
}

// One-template slice along template j with the other counts held at r.
Slice axis_slice(const Design& d, const std::vector<int64_t>& brk, int j,
                 const std::vector<int64_t>& r) {
  Slice s;
  s.f = 1;
  for (int i = 0; i < d.v; ++i) {
    const int64_t* a = d.row(i);
    const int64_t* b = brk.data() + std::size_t(i) * 3;
    int64_t p = 0;
    for (int k = 0; k < d.t; ++k) {
      if (k != j) p += a[k] * r[k];
    }
    if (a[j] == 0) {
      s.fixed_viol += std::max<int64_t>(b[0] - p, 0) +
                      std::max<int64_t>(p - b[2], 0);
      s.fixed_waste += p > b[1] ? p - b[1] : b[1] - p;
      continue;
    }
    s.rows.push_back(i);
    s.a.push_back(a[j]);
    s.brk.insert(s.brk.end(), {b[0] - p, b[1] - p, b[2] - p});
  }
  return s;
}

// Incumbent from the continuous optimum: its floor/ceil roundings, then exact
// coordinate line minimization and unit-box moves until neither improves.
struct Rounded {
  std::vector<int64_t> pressings;
  i128 value = 0;
  WalkResult walk;  // continuous optimum of the whole problem
};

Rounded rounded_pressings(const Design& d, const std::vector<int64_t>& brk,
                          Weights w) {
  const int t = d.t;
  std::vector<int64_t> best(t, 0);
  i128 best_value = objective(d, brk, best, w);
  // Ties are only broken among the initial roundings; accepting sideways
  // moves later would let the descent drift along flat valleys.
  bool allow_ties = true;
  auto consider = [&](const std::vector<int64_t>& r) {
    const i128 v = objective(d, brk, r, w);
    if (v < best_value || (allow_ties && v == best_value && r < best)) {
      best_value = v;
      best = r;
      return true;
    }
    return false;
  };

  const Slice full = make_slice(d, brk, 0, std::vector<int64_t>(d.v, 0));
  WalkResult walk = Walk(Shape(w), full).run();
  std::vector<int64_t> cand(t);
  if (walk.ok) {
    for (unsigned mask = 0; mask < (1u << t); ++mask) {
      for (int j = 0; j < t; ++j) {
        cand[j] = static_cast<int64_t>(std::floor(walk.r[j])) +
                  ((mask >> j) & 1u);
      }
      consider(cand);
    }
  }

  allow_ties = false;
  for (int round = 0; round < 64; ++round) {
    bool improved = false;
    for (int j = 0; j < t; ++j) {
      const Slice s = axis_slice(d, brk, j, best);
      cand = best;
      cand[j] = line_argmin(w, s, line_start(w, s)).first;
      improved |= consider(cand);
    }
    if (improved) continue;
    const std::vector<int64_t> center = best;
    if (t <= 4) {
      int total = 1;
      for (int j = 0; j < t; ++j) total *= 3;
      for (int code = 0; code < total; ++code) {
        int rest = code;
        bool ok = true;
        for (int j = 0; j < t; ++j) {
          cand[j] = center[j] + rest % 3 - 1;
          rest /= 3;
          ok &= cand[j] >= 0;
        }
        if (ok && cand != center) improved |= consider(cand);
      }
    } else {
      for (int j = 0; j < t; ++j) {
        for (int k = j; k < t; ++k) {
          for (int sj : {-1, 1}) {
            for (int sk : {-1, 1}) {
              cand = center;
              cand[j] += sj;
              if (k != j) cand[k] += sk;
              if (cand[j] >= 0 && cand[k] >= 0) improved |= consider(cand);
            }
          }
        }
      }
    }
    if (!improved) break;
  }
  return {std::move(best), best_value, std::move(walk)};
}

// Default work allowance for designs of at most two templates (see
// kWalkCost). Larger designs default to the heuristic plan alone.
constexpr int64_t kSmallBudget = 256;

std::vector<int64_t> best_pressings(const ProblemInstance& inst,
                                    const Design& d, int64_t budget) {
  std::vector<int64_t> brk;
  auto bands = inst.bands();
  for (int i = 0; i < d.v; ++i) {
    brk.insert(brk.end(), {bands[i].low, inst.demand(i), bands[i].high});
  }
  const int64_t k = violation_weight(inst);
  const Weights lexicographic{k, 1};
  const Weights viol_only{1, 0};
  if (budget < 0) budget = d.t <= 2 ? kSmallBudget : 0;

  Rounded rounded = rounded_pressings(d, brk, lexicographic);
  std::vector<int64_t> incumbent = std::move(rounded.pressings);
  i128 value = rounded.value;
  const Fitness fh = score(inst, d, incumbent.data());
  int64_t least_violation = 0;
  if (fh.violation > 0) {
    // Least violation first; waste is then minimized among plans reaching it.
    ExactSearch first(d, brk, viol_only, {{viol_only, 1, 0}}, incumbent,
                      fh.violation, &budget);
    const std::vector<int64_t> r1 = first.run();
    const i128 v1 = objective(d, brk, r1, lexicographic);
    if (v1 < value) {
      incumbent = r1;
      value = v1;
    }
    if (!first.complete()) return incumbent;
    least_violation = score(inst, d, r1.data()).violation;
  }
  std::vector<BoundTerm> terms{{lexicographic, 1, 0}};
  if (least_violation > 0) {
    terms.push_back({viol_only, k, 0});
    terms.push_back({Weights{1, 1}, 1, i128(k - 1) * least_violation});
  }
  ExactSearch second(d, brk, lexicographic, std::move(terms), incumbent, value,
                     &budget, &rounded.walk);
  return second.run();
}

}  // namespace

PressingPlan evaluate_with_pressings(const ProblemInstance& inst,
                                     const Genotype& design,
                                     std::span<const int64_t> pressings) {
  const Design d = make_design(inst, design);
  if (static_cast<int>(pressings.size()) != d.t) {
    throw InvalidPressings("expected " + std::to_string(d.t) +
                           " pressing counts");
  }
  if (std::any_of(pressings.begin(), pressings.end(),
                  [](int64_t r) { return r < 0; })) {
    throw InvalidPressings("pressing counts must be non-negative");
  }
  return make_plan(inst, d, {pressings.begin(), pressings.end()});
}

PressingPlan optimize_pressings(const ProblemInstance& inst,
                                const Genotype& design, int64_t search_budget) {
  const Design d = make_design(inst, design);
  return make_plan(inst, d, best_pressings(inst, d, search_budget));
}

Fitness fitness(const ProblemInstance& inst, const Genotype& g) {
  if (g.model() == Model::kAlternative) {
    validate_genotype(g, inst);
    return optimize_pressings(inst,
                              alternative_to_classical(g, inst.variations()))
        .fitness();
  }
  return optimize_pressings(inst, g).fitness();
}

PressingPlan brute_force_pressings(const ProblemInstance& inst,
                                   const Genotype& design,
                                   std::span<const PressingRange> bounds) {
  const Design d = make_design(inst, design);
  const int t = d.t;
  if (static_cast<int>(bounds.size()) != t) {
    throw InvalidParameter("one pressing range per template required");
  }
  int64_t grid = 1;
  for (const auto& rg : bounds) {
    if (rg.lo < 0 || rg.hi < rg.lo) {
      throw BudgetError("empty or negative pressing range");
    }
    const int64_t size = rg.hi - rg.lo + 1;
    if (size > kBruteForceGridLimit / grid) {
      throw BudgetError("brute-force grid exceeds " +
                        std::to_string(kBruteForceGridLimit) + " points");
    }
    grid *= size;
  }

  // Odometer over all but the last template; the last one is swept with
  // per-point accumulators so the inner loop is a flat vectorizable pass.
  const PressingRange last = bounds[t - 1];
  const auto width = static_cast<std::size_t>(last.hi - last.lo + 1);
  std::vector<int64_t> waste(width), viol(width);
  std::vector<int64_t> r(t);
  for (int j = 0; j + 1 < t; ++j) r[j] = bounds[j].lo;
  std::vector<int64_t> best_r;
  Fitness best_f{std::numeric_limits<int64_t>::max(),
                 std::numeric_limits<int64_t>::max()};
  auto bands = inst.bands();
  while (true) {
    std::fill(waste.begin(), waste.end(), 0);
    std::fill(viol.begin(), viol.end(), 0);
    for (int i = 0; i < d.v; ++i) {
      const int64_t* a = d.row(i);
      int64_t base = 0;
      for (int j = 0; j + 1 < t; ++j) base += a[j] * r[j];
      const int64_t step = a[t - 1];
      const int64_t q = inst.demand(i);
      const int64_t lo = bands[i].low;
      const int64_t hi = bands[i].high;
      const int64_t p0 = base + step * last.lo;
      int64_t* w = waste.data();
      int64_t* vl = viol.data();
      for (std::size_t x = 0; x < width; ++x) {
        const int64_t p = p0 + step * static_cast<int64_t>(x);
        const int64_t dev = p - q;
        w[x] += dev < 0 ? -dev : dev;
        vl[x] += std::max<int64_t>(lo - p, 0) + std::max<int64_t>(p - hi, 0);
      }
    }
    for (std::size_t x = 0; x < width; ++x) {
      const Fitness f{viol[x], waste[x]};
      if (f < best_f) {
        best_f = f;
        best_r = r;
        best_r[t - 1] = last.lo + static_cast<int64_t>(x);
      }
    }
    int j = t - 2;
    while (j >= 0 && r[j] == bounds[j].hi) {
      r[j] = bounds[j].lo;
      --j;
    }
    if (j < 0) break;
    ++r[j];
  }
  return make_plan(inst, d, std::move(best_r));
}

bool solve_exact(std::span<const int64_t> a, std::span<const int64_t> b,
                 std::vector<__int128>& num, __int128& den) {
  const auto n = static_cast<int>(b.size());
  // Bareiss determinant of an n x n matrix given row-major.
  auto det = [n](std::vector<__int128> m) -> __int128 {
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
      if (m[std::size_t(k) * n + k] == 0) {
        int swap = -1;
        for (int r = k + 1; r < n; ++r) {
          if (m[std::size_t(r) * n + k] != 0) {
            swap = r;
            break;
          }
        }
        if (swap < 0) return 0;
        for (int c = 0; c < n; ++c) {
          std::swap(m[std::size_t(k) * n + c], m[std::size_t(swap) * n + c]);
        }
        sign = -sign;
      }
      for (int i = k + 1; i < n; ++i) {
        for (int j = k + 1; j < n; ++j) {
          m[std::size_t(i) * n + j] =
              (m[std::size_t(i) * n + j] * m[std::size_t(k) * n + k] -
               m[std::size_t(i) * n + k] * m[std::size_t(k) * n + j]) /
              prev;
        }
      }
      prev = m[std::size_t(k) * n + k];
    }
    return sign * m[std::size_t(n - 1) * n + (n - 1)];
  };
  std::vector<__int128> m(a.begin(), a.end());
  den = det(m);
  if (den == 0) return false;
  num.assign(n, 0);
  for (int col = 0; col < n; ++col) {
    std::vector<__int128> mc = m;
    for (int r = 0; r < n; ++r) mc[std::size_t(r) * n + col] = b[r];
    num[col] = det(std::move(mc));
  }
  if (den < 0) {
    den = -den;
    for (auto& x : num) x = -x;
  }
  return true;
}

PressingPlan vertex_enumeration_pressings(const ProblemInstance& inst,
                                          const Genotype& design) {
  const Design d = make_design(inst, design);
  const int t = d.t;
  const int v = d.v;
  std::vector<int64_t> best_r(t, 0);
  Fitness best_f = score(inst, d, best_r.data());
  std::vector<int64_t> cand(t);
  auto consider = [&]() {
    if (std::any_of(cand.begin(), cand.end(), [](int64_t x) { return x < 0; }))
      return;
    const Fitness f = score(inst, d, cand.data());
    if (improves(f, cand, best_f, best_r)) {
      best_f = f;
      best_r = cand;
    }
  };

  for (int i = 0; i < v; ++i) {
    for (int j = 0; j < t; ++j) {
      const int64_t s = d.row(i)[j];
      if (s == 0) continue;
      std::fill(cand.begin(), cand.end(), 0);
      cand[j] = (2 * inst.demand(i) + s) / (2 * s);  // round half-up
      consider();
    }
  }

  if (t <= v) {
    std::vector<int> subset(t);
    std::iota(subset.begin(), subset.end(), 0);
    std::vector<int64_t> a(std::size_t(t) * t), b(t);
    std::vector<__int128> num;
    __int128 den = 0;
    std::vector<int64_t> floor_r(t);
    int box = 1;
    for (int j = 0; j < t; ++j) box *= 4;
    while (true) {
      for (int r = 0; r < t; ++r) {
        for (int c = 0; c < t; ++c) {
          a[std::size_t(r) * t + c] = d.row(subset[r])[c];
        }
        b[r] = inst.demand(subset[r]);
      }
      if (solve_exact(a, b, num, den)) {
        bool nonneg = true;
        for (int j = 0; j < t; ++j) {
          if (num[j] < 0) nonneg = false;
          floor_r[j] = static_cast<int64_t>(num[j] / den);  // num >= 0 here
        }
        if (nonneg) {
          // floor - 1 .. floor + 2 covers both roundings and a unit margin.
          for (int code = 0; code < box; ++code) {
            int rest = code;
            for (int j = 0; j < t; ++j) {
              cand[j] = floor_r[j] - 1 + rest % 4;
              rest /= 4;
            }
            consider();
          }
        }
      }
      int k = t - 1;
      while (k >= 0 && subset[k] == v - t + k) --k;
      if (k < 0) break;
      ++subset[k];
      for (int m = k + 1; m < t; ++m) subset[m] = subset[m - 1] + 1;
    }
  }
  return make_plan(inst, d, std::move(best_r));
}

DeviationReport deviation_report(const ProblemInstance& inst,
                                 const PressingPlan& plan) {
  DeviationReport rep;
  rep.percent.reserve(plan.production.size());
  for (std::size_t i = 0; i < plan.production.size(); ++i) {
    const double q = double(inst.demand(static_cast<int>(i)));
    rep.percent.push_back(100.0 * double(plan.production[i] - q) / q);
  }
  rep.overall_percent = 100.0 * double(plan.waste) / double(inst.total_demand());
  if (!rep.percent.empty()) {
    auto [lo, hi] = std::minmax_element(rep.percent.begin(), rep.percent.end());
    rep.min_percent = *lo;
    rep.max_percent = *hi;
  }
  return rep;
}

}  // namespace tdp
