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

#ifndef TDP_GENOTYPE_HPP_
#define TDP_GENOTYPE_HPP_

#include <compare>
#include <cstdint>
#include <istream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tdp/instance.hpp"

namespace tdp {

using Rng = std::mt19937_64;

// Search representation. Classical genotypes are v x t matrices of slot
// counts (entry (i, j) = copies of variation i on template j); alternative
// genotypes are s x t matrices of 1-based variation labels, one per slot.
enum class Model : uint8_t { kClassical, kAlternative };

struct ModelKind {
  Model model = Model::kClassical;
  bool symmetry_breaking = false;

  bool operator==(const ModelKind&) const = default;
};

// "P" / "D", with a trailing "*" when symmetry breaking is on.
std::string to_string(ModelKind kind);
char model_letter(Model model);

// Dense integer matrix stored column-major, since templates (columns) are the
// unit of recombination, canonical ordering and pressing.
class Genotype {
 public:
  Genotype() = default;
  Genotype(Model model, int rows, int cols, std::vector<int> cells);

  static Genotype from_columns(Model model,
                               const std::vector<std::vector<int>>& columns);

  Model model() const { return model_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  int at(int row, int col) const { return cells_[index(row, col)]; }
  int& at(int row, int col) { return cells_[index(row, col)]; }

  std::span<const int> column(int col) const {
    return {cells_.data() + static_cast<std::size_t>(col) * rows_,
            static_cast<std::size_t>(rows_)};
  }
  std::span<int> column(int col) {
    return {cells_.data() + static_cast<std::size_t>(col) * rows_,
            static_cast<std::size_t>(rows_)};
  }
  std::span<const int> cells() const { return cells_; }

  std::size_t hash() const;

  auto operator<=>(const Genotype&) const = default;
  bool operator==(const Genotype&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(col) * rows_ + row;
  }

  Model model_ = Model::kClassical;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> cells_;
};

struct GenotypeHash {
  std::size_t operator()(const Genotype& g) const { return g.hash(); }
};

// Structural checks against an instance; throw InvalidGenotype.
void validate_genotype(const Genotype& g, const ProblemInstance& inst);

// Column j lists variation i exactly s_ij times, ascending. Throws
// InvalidGenotype when a column does not sum to `slots`.
Genotype classical_to_alternative(const Genotype& g, int slots);

// Counts occurrences of each label per column. Throws InvalidGenotype when a
// label lies outside [1, variations].
Genotype alternative_to_classical(const Genotype& g, int variations);

// Lexicographic a <= b. Throws IndexError on length mismatch.
bool lex_leq(std::span<const int> a, std::span<const int> b);

// Symmetry-breaking canonical form: classical columns in non-decreasing
// lexicographic order; alternative columns sorted internally first, then
// ordered the same way. Identity when kind.symmetry_breaking is false.
Genotype canonicalize(const Genotype& g, ModelKind kind);
void canonicalize_in_place(Genotype& g, ModelKind kind);
bool is_canonical(const Genotype& g, ModelKind kind);

// Uniform over valid genotypes of the model (compositions of s per column for
// the classical model, independent labels per slot for the alternative one),
// canonicalized when symmetry breaking is requested.
Genotype random_genotype(const ProblemInstance& inst, ModelKind kind, Rng& rng);

// Number of differing cells. Throws IndexError on shape or model mismatch.
int hamming_distance(const Genotype& a, const Genotype& b);

// Cross-model distance: a classical operand is first converted to its
// canonical alternative form.
int genotype_distance(const Genotype& a, const Genotype& b,
                      const ProblemInstance& inst);

// Re-encodes g for `target`, canonicalized per target.symmetry_breaking.
Genotype convert_genotype(const Genotype& g, ModelKind target,
                          const ProblemInstance& inst);

// Classical counts for either model.
Genotype as_classical(const Genotype& g, const ProblemInstance& inst);

// Solution documents: {"model", "symmetry_breaking", "rows", "cols",
// "matrix": [[row], ...], "pressings"?}.
struct SolutionDocument {
  ModelKind kind;
  Genotype genotype;
  std::optional<std::vector<int64_t>> pressings;
};

SolutionDocument read_solution(std::istream& in);
SolutionDocument read_solution(std::string_view text);
std::string write_solution(const SolutionDocument& doc);

}  // namespace tdp

#endif  // TDP_GENOTYPE_HPP_
