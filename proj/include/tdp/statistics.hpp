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

#ifndef TDP_STATISTICS_HPP_
#define TDP_STATISTICS_HPP_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tdp/records.hpp"

namespace tdp {

struct FeasibilityCell {
  std::string algorithm;
  std::string instance;
  int runs = 0;
  int feasible = 0;
  double percent = 0;

  // "17 (85.00 %)"
  std::string text() const;
};

// One cell per (algorithm, instance), sorted by both. Throws EmptyInput.
std::vector<FeasibilityCell> feasibility_summary(
    const std::vector<RunRecord>& records);

// ranks[i][j]: rank of algorithm j on instance i, 1 = best, mid-ranks on
// ties.
struct RankTable {
  std::vector<std::string> algorithms;
  std::vector<std::string> instances;
  std::vector<std::vector<double>> ranks;

  int k() const { return static_cast<int>(algorithms.size()); }
  int n() const { return static_cast<int>(instances.size()); }
  std::vector<double> average() const;
};

// Mid-ranks of `scores`, rank 1 for the largest score.
std::vector<double> descending_ranks(std::span<const double> scores);

// counts[i][j]: feasible runs of algorithm j on instance i.
RankTable rank_from_counts(std::vector<std::string> algorithms,
                           std::vector<std::string> instances,
                           const std::vector<std::vector<double>>& counts);

// Ranks by feasible-run count per instance. Throws InvalidInput when some
// (algorithm, instance) pair has no record.
RankTable rank_algorithms(const std::vector<RunRecord>& records);

// 12 N / (k (k + 1)) [sum_j Rbar_j^2 - k (k + 1)^2 / 4]. Throws
// InvalidParameter unless k >= 2 and N >= 2.
double friedman_statistic(const RankTable& table);

// (N - 1) chi2 / (N (k - 1) - chi2). Throws InvalidParameter when the
// denominator is not positive.
double iman_davenport(double chi2, int n, int k);

struct CriticalValues {
  double chi2 = 0;  // chi-square, k - 1 df
  double f = 0;     // F, (k - 1, (k - 1)(N - 1)) df
};

CriticalValues critical_values(double alpha, int n, int k);

struct HolmRow {
  std::string label;
  double z = 0;
  double p = 0;
  int i = 0;  // threshold divisor: 1 for the largest p-value
  double threshold = 0;  // alpha / i
  bool significant = false;
};

// Step-down Holm procedure. Rows come back with the largest p-value first
// (i = 1, threshold alpha). Hypotheses are rejected from the smallest p-value
// upward until the first p >= alpha / i; that one and all larger are not
// significant.
std::vector<HolmRow> holm_test(
    const std::vector<std::pair<std::string, double>>& pvalues, double alpha);

// Post-hoc comparison of every algorithm against `control` after a Friedman
// test: z = (Rbar_j - Rbar_control) / sqrt(k (k + 1) / (6 N)), one-sided
// p = 1 - Phi(z), then Holm.
std::vector<HolmRow> holm_versus_control(const RankTable& table,
                                         const std::string& control,
                                         double alpha);

// Two-sided Wilcoxon rank-sum p-value. Exact (over all rank assignments,
// mid-ranks for ties) when the samples total at most 12 values; otherwise a
// normal approximation with tie-corrected variance and continuity
// correction.
double ranksum_test(std::span<const double> a, std::span<const double> b);
double ranksum_normal(std::span<const double> a, std::span<const double> b);
double ranksum_exact(std::span<const double> a, std::span<const double> b);

}  // namespace tdp

#endif  // TDP_STATISTICS_HPP_
