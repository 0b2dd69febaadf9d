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

#include "tdp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "tdp/errors.hpp"

namespace tdp {
namespace {

using nlohmann::json;

// Demand tables in thousands of units.
constexpr int kCatfood[] = {250, 255, 260, 500, 500, 800, 1100};

constexpr int kHerbs[] = {60,  60,  70,  70,  70,  70,  70,  70,  70,  80,
                          80,  80,  80,  90,  90,  90,  90,  90,  90,  100,
                          100, 100, 100, 150, 230, 230, 230, 230, 280, 280};

constexpr int kMagazine[] = {
    50,  53,  55,  60,  85,  90,  100, 100, 105, 110, 137, 140, 140,
    140, 150, 150, 150, 150, 150, 150, 150, 150, 168, 170, 170, 195,
    195, 200, 200, 200, 210, 210, 225, 230, 230, 230, 250, 250, 250,
    250, 250, 250, 250, 250, 265, 270, 270, 375, 375, 405};

constexpr double kDefaultTolerance = 0.10;

ProblemInstance make_builtin(std::string name, std::span<const int> thousands,
                             int templates, int slots) {
  std::vector<int64_t> demands;
  demands.reserve(thousands.size());
  for (int d : thousands) demands.push_back(int64_t{d} * 1000);
  const auto v = static_cast<int>(demands.size());
  std::vector<double> tol(demands.size(), kDefaultTolerance);
  return ProblemInstance(std::move(name), v, templates, slots,
                         std::move(demands), tol, tol);
}

int64_t round_half_up(long double x) {
  // The epsilon absorbs binary representation noise in decimal tolerances
  // such as 0.1 so that exact .5 products round up.
  return static_cast<int64_t>(std::floor(x + 0.5L + 1e-9L));
}

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

int line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

template <typename T>
T get_field(const json& doc, std::string_view text, const char* key) {
  if (!doc.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'", 0, key);
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what(),
                     line_of_key(text, key), key);
  }
}

}  // namespace

ProblemInstance::ProblemInstance(std::string name, int variations,
                                 int templates, int slots,
                                 std::vector<int64_t> demands,
                                 std::vector<double> lower_tol,
                                 std::vector<double> upper_tol)
    : name_(std::move(name)),
      variations_(variations),
      templates_(templates),
      slots_(slots),
      demands_(std::move(demands)),
      lower_tol_(std::move(lower_tol)),
      upper_tol_(std::move(upper_tol)) {
  if (variations_ < 1) throw ValidationError("variations", "must be >= 1");
  if (templates_ < 1) throw ValidationError("templates", "must be >= 1");
  if (slots_ < 1) throw ValidationError("slots", "must be >= 1");
  const auto v = static_cast<std::size_t>(variations_);
  if (demands_.size() != v) {
    throw ValidationError("demands", "expected " + std::to_string(v) +
                                         " entries, got " +
                                         std::to_string(demands_.size()));
  }
  if (lower_tol_.size() != v) {
    throw ValidationError("lower_tol", "expected " + std::to_string(v) +
                                           " entries");
  }
  if (upper_tol_.size() != v) {
    throw ValidationError("upper_tol", "expected " + std::to_string(v) +
                                           " entries");
  }
  for (int64_t d : demands_) {
    if (d <= 0) throw ValidationError("demands", "must be strictly positive");
  }
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!std::all_of(lower_tol_.begin(), lower_tol_.end(), in_unit)) {
    throw ValidationError("lower_tol", "fractions must lie in [0, 1]");
  }
  if (!std::all_of(upper_tol_.begin(), upper_tol_.end(), in_unit)) {
    throw ValidationError("upper_tol", "fractions must lie in [0, 1]");
  }
  bands_.reserve(v);
  for (std::size_t i = 0; i < v; ++i) {
    const auto q = static_cast<long double>(demands_[i]);
    bands_.push_back({round_half_up((1.0L - lower_tol_[i]) * q),
                      round_half_up((1.0L + upper_tol_[i]) * q)});
  }
  total_demand_ = std::accumulate(demands_.begin(), demands_.end(), int64_t{0});
}

ProblemInstance ProblemInstance::with_templates(int templates) const {
  return ProblemInstance(name_, variations_, templates, slots_, demands_,
                         lower_tol_, upper_tol_);
}

bool ProblemInstance::operator==(const ProblemInstance& other) const {
  return name_ == other.name_ && variations_ == other.variations_ &&
         templates_ == other.templates_ && slots_ == other.slots_ &&
         demands_ == other.demands_ && lower_tol_ == other.lower_tol_ &&
         upper_tol_ == other.upper_tol_;
}

ProblemInstance builtin_instance(std::string_view name) {
  // Template counts are those of the best published designs.
  if (name == "catfood") return make_builtin("catfood", kCatfood, 2, 9);
  if (name == "herbs") return make_builtin("herbs", kHerbs, 2, 42);
  if (name == "magazine") return make_builtin("magazine", kMagazine, 3, 40);
  throw NotFound("unknown builtin instance '" + std::string(name) + "'");
}

std::vector<std::string> builtin_instance_names() {
  return {"catfood", "herbs", "magazine"};
}

ToleranceBand tolerance_band(const ProblemInstance& inst, int variation) {
  if (variation < 0 || variation >= inst.variations()) {
    throw IndexError("variation index " + std::to_string(variation) +
                     " out of range [0, " +
                     std::to_string(inst.variations()) + ")");
  }
  return inst.bands()[variation];
}

ProblemInstance load_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_of_offset(text, e.byte), "");
  }
  if (!doc.is_object()) throw ParseError("document must be an object", 1, "");
  return ProblemInstance(
      doc.value("name", std::string("unnamed")),
      get_field<int>(doc, text, "variations"),
      get_field<int>(doc, text, "templates"),
      get_field<int>(doc, text, "slots"),
      get_field<std::vector<int64_t>>(doc, text, "demands"),
      get_field<std::vector<double>>(doc, text, "lower_tol"),
      get_field<std::vector<double>>(doc, text, "upper_tol"));
}

ProblemInstance load_instance(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_instance(std::string_view(buf.str()));
}

std::string serialize_instance(const ProblemInstance& inst) {
  json doc;
  doc["name"] = inst.name();
  doc["variations"] = inst.variations();
  doc["templates"] = inst.templates();
  doc["slots"] = inst.slots();
  doc["demands"] = std::vector<int64_t>(inst.demands().begin(),
                                        inst.demands().end());
  doc["lower_tol"] = std::vector<double>(inst.lower_tol().begin(),
                                         inst.lower_tol().end());
  doc["upper_tol"] = std::vector<double>(inst.upper_tol().begin(),
                                         inst.upper_tol().end());
  return doc.dump(2) + "\n";
}

ProblemInstance resolve_instance(const std::string& source) {
  constexpr std::string_view kPrefix = "builtin:";
  if (source.starts_with(kPrefix)) {
    return builtin_instance(std::string_view(source).substr(kPrefix.size()));
  }
  std::ifstream in(source);
  if (!in) throw NotFound("cannot open instance file '" + source + "'");
  return load_instance(in);
}

}  // namespace tdp
