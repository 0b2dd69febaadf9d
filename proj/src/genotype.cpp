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

#include "tdp/genotype.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "tdp/errors.hpp"

namespace tdp {
namespace {

using nlohmann::json;

void require_model(const Genotype& g, Model model, const char* op) {
  if (g.model() != model) {
    throw InvalidGenotype(std::string(op) + ": wrong genotype model");
  }
}

void sort_columns(Genotype& g) {
  const int rows = g.rows();
  std::vector<std::vector<int>> columns;
  columns.reserve(g.cols());
  for (int j = 0; j < g.cols(); ++j) {
    auto col = g.column(j);
    columns.emplace_back(col.begin(), col.end());
  }
  std::sort(columns.begin(), columns.end());
  for (int j = 0; j < g.cols(); ++j) {
    std::copy_n(columns[j].begin(), rows, g.column(j).begin());
  }
}

}  // namespace

char model_letter(Model model) {
  return model == Model::kClassical ? 'P' : 'D';
}

std::string to_string(ModelKind kind) {
  std::string out(1, model_letter(kind.model));
  if (kind.symmetry_breaking) out += '*';
  return out;
}

Genotype::Genotype(Model model, int rows, int cols, std::vector<int> cells)
    : model_(model), rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows < 0 || cols < 0 ||
      cells_.size() != static_cast<std::size_t>(rows) * cols) {
    throw InvalidGenotype("cell count does not match matrix shape");
  }
}

Genotype Genotype::from_columns(Model model,
                                const std::vector<std::vector<int>>& columns) {
  const int cols = static_cast<int>(columns.size());
  const int rows = cols == 0 ? 0 : static_cast<int>(columns.front().size());
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>(rows) * cols);
  for (const auto& c : columns) {
    if (static_cast<int>(c.size()) != rows) {
      throw InvalidGenotype("ragged columns");
    }
    cells.insert(cells.end(), c.begin(), c.end());
  }
  return Genotype(model, rows, cols, std::move(cells));
}

std::size_t Genotype::hash() const {
  // FNV-1a over the cells, seeded with the shape.
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](uint64_t x) {
    h ^= x;
    h *= 1099511628211ULL;
  };
  mix(static_cast<uint64_t>(model_));
  mix(static_cast<uint64_t>(rows_));
  mix(static_cast<uint64_t>(cols_));
  for (int c : cells_) mix(static_cast<uint32_t>(c));
  return static_cast<std::size_t>(h);
}

void validate_genotype(const Genotype& g, const ProblemInstance& inst) {
  if (g.cols() != inst.templates()) {
    throw InvalidGenotype("expected " + std::to_string(inst.templates()) +
                          " templates, got " + std::to_string(g.cols()));
  }
  if (g.model() == Model::kClassical) {
    if (g.rows() != inst.variations()) {
      throw InvalidGenotype("classical genotype needs one row per variation");
    }
    for (int j = 0; j < g.cols(); ++j) {
      auto col = g.column(j);
      if (std::any_of(col.begin(), col.end(), [](int x) { return x < 0; })) {
        throw InvalidGenotype("negative slot count");
      }
      if (std::accumulate(col.begin(), col.end(), 0) != inst.slots()) {
        throw InvalidGenotype("template " + std::to_string(j) +
                              " does not fill all slots");
      }
    }
  } else {
    if (g.rows() != inst.slots()) {
      throw InvalidGenotype("alternative genotype needs one row per slot");
    }
    const int v = inst.variations();
    for (int x : g.cells()) {
      if (x < 1 || x > v) throw InvalidGenotype("variation label out of range");
    }
  }
}

Genotype classical_to_alternative(const Genotype& g, int slots) {
  require_model(g, Model::kClassical, "classical_to_alternative");
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>(slots) * g.cols());
  for (int j = 0; j < g.cols(); ++j) {
    auto col = g.column(j);
    if (std::any_of(col.begin(), col.end(), [](int x) { return x < 0; }) ||
        std::accumulate(col.begin(), col.end(), 0) != slots) {
      throw InvalidGenotype("column " + std::to_string(j) +
                            " does not sum to the slot count");
    }
    for (int i = 0; i < g.rows(); ++i) cells.insert(cells.end(), col[i], i + 1);
  }
  return Genotype(Model::kAlternative, slots, g.cols(), std::move(cells));
}

Genotype alternative_to_classical(const Genotype& g, int variations) {
  require_model(g, Model::kAlternative, "alternative_to_classical");
  Genotype out(Model::kClassical, variations, g.cols(),
               std::vector<int>(static_cast<std::size_t>(variations) * g.cols()));
  for (int j = 0; j < g.cols(); ++j) {
    for (int label : g.column(j)) {
      if (label < 1 || label > variations) {
        throw InvalidGenotype("variation label " + std::to_string(label) +
                              " outside [1, " + std::to_string(variations) +
                              "]");
      }
      ++out.at(label - 1, j);
    }
  }
  return out;
}

bool lex_leq(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw IndexError("lex_leq: length mismatch");
  return !std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

void canonicalize_in_place(Genotype& g, ModelKind kind) {
  if (g.model() != kind.model) {
    throw InvalidGenotype("canonicalize: genotype model differs from kind");
  }
  if (!kind.symmetry_breaking) return;
  if (g.model() == Model::kAlternative) {
    for (int j = 0; j < g.cols(); ++j) {
      auto col = g.column(j);
      std::sort(col.begin(), col.end());
    }
  }
  sort_columns(g);
}

Genotype canonicalize(const Genotype& g, ModelKind kind) {
  Genotype out = g;
  canonicalize_in_place(out, kind);
  return out;
}

bool is_canonical(const Genotype& g, ModelKind kind) {
  if (g.model() != kind.model) {
    throw InvalidGenotype("is_canonical: genotype model differs from kind");
  }
  if (!kind.symmetry_breaking) return true;
  if (g.model() == Model::kAlternative) {
    for (int j = 0; j < g.cols(); ++j) {
      auto col = g.column(j);
      if (!std::is_sorted(col.begin(), col.end())) return false;
    }
  }
  for (int j = 0; j + 1 < g.cols(); ++j) {
    if (!lex_leq(g.column(j), g.column(j + 1))) return false;
  }
  return true;
}

Genotype random_genotype(const ProblemInstance& inst, ModelKind kind,
                         Rng& rng) {
  const int v = inst.variations();
  const int t = inst.templates();
  const int s = inst.slots();
  Genotype g;
  if (kind.model == Model::kClassical) {
    // Stars and bars: v - 1 bar positions among s + v - 1 places.
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(v) * t);
    std::vector<int> places(s + v - 1);
    std::vector<int> bars(v - 1);
    for (int j = 0; j < t; ++j) {
      std::iota(places.begin(), places.end(), 0);
      for (int k = 0; k < v - 1; ++k) {
        std::uniform_int_distribution<int> pick(k, s + v - 2);
        std::swap(places[k], places[pick(rng)]);
      }
      std::copy_n(places.begin(), v - 1, bars.begin());
      std::sort(bars.begin(), bars.end());
      int prev = -1;
      for (int b : bars) {
        cells.push_back(b - prev - 1);
        prev = b;
      }
      cells.push_back(s + v - 2 - prev);
    }
    g = Genotype(Model::kClassical, v, t, std::move(cells));
  } else {
    std::uniform_int_distribution<int> label(1, v);
    std::vector<int> cells(static_cast<std::size_t>(s) * t);
    for (int& c : cells) c = label(rng);
    g = Genotype(Model::kAlternative, s, t, std::move(cells));
  }
  canonicalize_in_place(g, kind);
  return g;
}

int hamming_distance(const Genotype& a, const Genotype& b) {
  if (a.model() != b.model() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw IndexError("hamming_distance: shape mismatch");
  }
  int d = 0;
  auto ca = a.cells();
  auto cb = b.cells();
  for (std::size_t k = 0; k < ca.size(); ++k) d += ca[k] != cb[k];
  return d;
}

int genotype_distance(const Genotype& a, const Genotype& b,
                      const ProblemInstance& inst) {
  if (a.model() == b.model()) return hamming_distance(a, b);
  constexpr ModelKind kCanonicalAlt{Model::kAlternative, true};
  auto lift = [&](const Genotype& g) {
    return g.model() == Model::kAlternative
               ? g
               : canonicalize(classical_to_alternative(g, inst.slots()),
                              kCanonicalAlt);
  };
  return hamming_distance(lift(a), lift(b));
}

Genotype convert_genotype(const Genotype& g, ModelKind target,
                          const ProblemInstance& inst) {
  Genotype out;
  if (g.model() == target.model) {
    out = g;
  } else if (target.model == Model::kAlternative) {
    out = classical_to_alternative(g, inst.slots());
  } else {
    out = alternative_to_classical(g, inst.variations());
  }
  canonicalize_in_place(out, target);
  return out;
}

Genotype as_classical(const Genotype& g, const ProblemInstance& inst) {
  return g.model() == Model::kClassical
             ? g
             : alternative_to_classical(g, inst.variations());
}

SolutionDocument read_solution(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0, "");
  }
  try {
    const auto model_text = doc.at("model").get<std::string>();
    if (model_text != "P" && model_text != "D") {
      throw ParseError("model must be \"P\" or \"D\"", 0, "model");
    }
    SolutionDocument out;
    out.kind.model =
        model_text == "P" ? Model::kClassical : Model::kAlternative;
    out.kind.symmetry_breaking = doc.value("symmetry_breaking", false);
    const int rows = doc.at("rows").get<int>();
    const int cols = doc.at("cols").get<int>();
    const auto matrix = doc.at("matrix").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(matrix.size()) != rows) {
      throw ParseError("matrix row count differs from 'rows'", 0, "matrix");
    }
    std::vector<int> cells(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
      if (static_cast<int>(matrix[r].size()) != cols) {
        throw ParseError("matrix row length differs from 'cols'", 0, "matrix");
      }
      for (int c = 0; c < cols; ++c) {
        cells[static_cast<std::size_t>(c) * rows + r] = matrix[r][c];
      }
    }
    out.genotype = Genotype(out.kind.model, rows, cols, std::move(cells));
    if (doc.contains("pressings") && !doc.at("pressings").is_null()) {
      out.pressings = doc.at("pressings").get<std::vector<int64_t>>();
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 0, "");
  }
}

SolutionDocument read_solution(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_solution(std::string_view(buf.str()));
}

std::string write_solution(const SolutionDocument& doc) {
  const Genotype& g = doc.genotype;
  json out;
  out["model"] = std::string(1, model_letter(doc.kind.model));
  out["symmetry_breaking"] = doc.kind.symmetry_breaking;
  out["rows"] = g.rows();
  out["cols"] = g.cols();
  json matrix = json::array();
  for (int r = 0; r < g.rows(); ++r) {
    std::vector<int> row(g.cols());
    for (int c = 0; c < g.cols(); ++c) row[c] = g.at(r, c);
    matrix.push_back(row);
  }
  out["matrix"] = std::move(matrix);
  if (doc.pressings) out["pressings"] = *doc.pressings;
  return out.dump() + "\n";
}

}  // namespace tdp
