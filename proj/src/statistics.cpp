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

#include "tdp/statistics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "tdp/errors.hpp"

namespace tdp {

namespace {

std::vector<double> mid_ranks_ascending(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi + 1 < order.size() && x[order[hi + 1]] == x[order[lo]]) ++hi;
    const double r = (lo + hi) / 2.0 + 1.0;
    for (std::size_t k = lo; k <= hi; ++k) rank[order[k]] = r;
    lo = hi + 1;
  }
  return rank;
}

double normal_upper_tail(double z) {
  return boost::math::cdf(boost::math::complement(boost::math::normal(), z));
}

}  // namespace

std::string FeasibilityCell::text() const {
  return fmt::format("{} ({:.2f} %)", feasible, percent);
}

std::vector<FeasibilityCell> feasibility_summary(
    const std::vector<RunRecord>& records) {
  if (records.empty()) throw EmptyInput("no records to summarize");
  std::map<std::pair<std::string, std::string>, FeasibilityCell> cells;
  for (const RunRecord& r : records) {
    auto& c = cells[{r.algorithm, r.instance}];
    c.algorithm = r.algorithm;
    c.instance = r.instance;
    ++c.runs;
    c.feasible += r.feasible;
  }
  std::vector<FeasibilityCell> out;
  for (auto& [key, c] : cells) {
    c.percent = 100.0 * c.feasible / c.runs;
    out.push_back(c);
  }
  return out;
}

std::vector<double> RankTable::average() const {
  std::vector<double> out(algorithms.size(), 0.0);
  for (const auto& row : ranks) {
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j];
  }
  for (double& x : out) x /= std::max<std::size_t>(1, ranks.size());
  return out;
}

std::vector<double> descending_ranks(std::span<const double> scores) {
  std::vector<double> negated(scores.begin(), scores.end());
  for (double& x : negated) x = -x;
  return mid_ranks_ascending(negated);
}

RankTable rank_from_counts(std::vector<std::string> algorithms,
                           std::vector<std::string> instances,
                           const std::vector<std::vector<double>>& counts) {
  if (counts.size() != instances.size()) {
    throw InvalidInput("one row of counts per instance expected");
  }
  RankTable t{std::move(algorithms), std::move(instances), {}};
  for (const auto& row : counts) {
    if (row.size() != t.algorithms.size()) {
      throw InvalidInput("one count per algorithm expected");
    }
    t.ranks.push_back(descending_ranks(row));
  }
  return t;
}

RankTable rank_algorithms(const std::vector<RunRecord>& records) {
  std::set<std::string> algorithms;
  std::set<std::string> instances;
  std::map<std::pair<std::string, std::string>, double> feasible;
  for (const RunRecord& r : records) {
    algorithms.insert(r.algorithm);
    instances.insert(r.instance);
    feasible[{r.instance, r.algorithm}] += r.feasible;
  }
  std::vector<std::vector<double>> counts;
  for (const auto& inst : instances) {
    std::vector<double> row;
    for (const auto& alg : algorithms) {
      auto it = feasible.find({inst, alg});
      if (it == feasible.end()) {
        throw InvalidInput("no runs of " + alg + " on " + inst);
      }
      row.push_back(it->second);
    }
    counts.push_back(std::move(row));
  }
  return rank_from_counts({algorithms.begin(), algorithms.end()},
                          {instances.begin(), instances.end()}, counts);
}

double friedman_statistic(const RankTable& table) {
  const double k = table.k();
  const double n = table.n();
  if (k < 2 || n < 2) throw InvalidParameter("Friedman test needs k, N >= 2");
  double sum_sq = 0;
  for (double r : table.average()) sum_sq += r * r;
  return 12.0 * n / (k * (k + 1)) * (sum_sq - k * (k + 1) * (k + 1) / 4.0);
}

double iman_davenport(double chi2, int n, int k) {
  const double denom = double(n) * (k - 1) - chi2;
  if (!(denom > 0)) {
    throw InvalidParameter("Iman-Davenport denominator must be positive");
  }
  return (n - 1) * chi2 / denom;
}

CriticalValues critical_values(double alpha, int n, int k) {
  if (!(alpha > 0 && alpha < 1)) throw InvalidParameter("alpha in (0, 1)");
  if (k < 2 || n < 2) throw InvalidParameter("critical values need k, N >= 2");
  const double df1 = k - 1;
  const double df2 = double(k - 1) * (n - 1);
  return {boost::math::quantile(boost::math::chi_squared(df1), 1 - alpha),
          boost::math::quantile(boost::math::fisher_f(df1, df2), 1 - alpha)};
}

std::vector<HolmRow> holm_test(
    const std::vector<std::pair<std::string, double>>& pvalues, double alpha) {
  std::vector<HolmRow> rows;
  for (const auto& [label, p] : pvalues) {
    if (!(p >= 0 && p <= 1)) throw InvalidParameter("p-value outside [0, 1]");
    rows.push_back({label, 0, p, 0, 0, false});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const HolmRow& a, const HolmRow& b) { return a.p > b.p; });
  for (std::size_t r = 0; r < rows.size(); ++r) {
    rows[r].i = static_cast<int>(r) + 1;
    rows[r].threshold = alpha / rows[r].i;
  }
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (!(it->p < it->threshold)) break;
    it->significant = true;
  }
  return rows;
}

std::vector<HolmRow> holm_versus_control(const RankTable& table,
                                         const std::string& control,
                                         double alpha) {
  const auto it =
      std::find(table.algorithms.begin(), table.algorithms.end(), control);
  if (it == table.algorithms.end()) throw InvalidInput("unknown control");
  const std::size_t c = it - table.algorithms.begin();
  const double k = table.k();
  const double se = std::sqrt(k * (k + 1) / (6.0 * table.n()));
  const auto avg = table.average();
  std::vector<std::pair<std::string, double>> pvalues;
  std::vector<double> z;
  for (std::size_t j = 0; j < avg.size(); ++j) {
    if (j == c) continue;
    z.push_back((avg[j] - avg[c]) / se);
    pvalues.emplace_back(table.algorithms[j], normal_upper_tail(z.back()));
  }
  auto rows = holm_test(pvalues, alpha);
  for (HolmRow& row : rows) {
    const auto at = std::find_if(pvalues.begin(), pvalues.end(),
                                 [&](const auto& pv) { return pv.first == row.label; });
    row.z = z[at - pvalues.begin()];
  }
  return rows;
}

double ranksum_exact(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidParameter("empty sample");
  const std::size_t n = a.size() + b.size();
  if (n > 20) throw InvalidParameter("exact rank-sum limited to 20 values");
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  const auto rank = mid_ranks_ascending(all);
  const double observed = std::accumulate(rank.begin(), rank.begin() + a.size(), 0.0);
  const double expected = a.size() * (n + 1) / 2.0;
  const double gap = std::abs(observed - expected) - 1e-9;
  uint64_t extreme = 0;
  uint64_t total = 0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != a.size()) continue;
    double w = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask >> k & 1u) w += rank[k];
    }
    ++total;
    extreme += std::abs(w - expected) >= gap;
  }
  return double(extreme) / double(total);
}

double ranksum_normal(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidParameter("empty sample");
  const double n1 = a.size();
  const double n2 = b.size();
  const double n = n1 + n2;
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  const auto rank = mid_ranks_ascending(all);
  const double w = std::accumulate(rank.begin(), rank.begin() + a.size(), 0.0);
  std::map<double, int> ties;
  for (double x : all) ++ties[x];
  double tie_sum = 0;
  for (const auto& [x, t] : ties) tie_sum += double(t) * t * t - t;
  const double var = n1 * n2 / 12.0 * ((n + 1) - tie_sum / (n * (n - 1)));
  if (var <= 0) return 1.0;
  const double dev = std::max(0.0, std::abs(w - n1 * (n + 1) / 2.0) - 0.5);
  return std::min(1.0, 2.0 * normal_upper_tail(dev / std::sqrt(var)));
}

double ranksum_test(std::span<const double> a, std::span<const double> b) {
  return a.size() + b.size() <= 12 ? ranksum_exact(a, b) : ranksum_normal(a, b);
}

}  // namespace tdp
