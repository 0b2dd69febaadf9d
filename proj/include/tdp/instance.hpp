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

#ifndef TDP_INSTANCE_HPP_
#define TDP_INSTANCE_HPP_

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tdp {

// Admissible production interval for one variation, in product units.
struct ToleranceBand {
  int64_t low = 0;
  int64_t high = 0;

  bool operator==(const ToleranceBand&) const = default;
};

// A template design problem: `variations` product designs with demands and
// production tolerances, to be laid out on `templates` printing plates of
// `slots` slots each.
//
// Instances are validated on construction and immutable afterwards, so they
// can be shared freely between concurrent runs.
class ProblemInstance {
 public:
  // Throws ValidationError naming the offending field.
  ProblemInstance(std::string name, int variations, int templates, int slots,
                  std::vector<int64_t> demands, std::vector<double> lower_tol,
                  std::vector<double> upper_tol);

  const std::string& name() const { return name_; }
  int variations() const { return variations_; }
  int templates() const { return templates_; }
  int slots() const { return slots_; }

  std::span<const int64_t> demands() const { return demands_; }
  std::span<const double> lower_tol() const { return lower_tol_; }
  std::span<const double> upper_tol() const { return upper_tol_; }
  int64_t demand(int i) const { return demands_[i]; }
  int64_t total_demand() const { return total_demand_; }

  // Precomputed bands, indexed by 0-based variation.
  std::span<const ToleranceBand> bands() const { return bands_; }

  // Same instance with a different template count.
  ProblemInstance with_templates(int templates) const;

  bool operator==(const ProblemInstance& other) const;

 private:
  std::string name_;
  int variations_;
  int templates_;
  int slots_;
  std::vector<int64_t> demands_;
  std::vector<double> lower_tol_;
  std::vector<double> upper_tol_;
  std::vector<ToleranceBand> bands_;
  int64_t total_demand_ = 0;
};

// The three printing-firm instances (catfood, herbs, magazine) with 10%
// tolerances. Throws NotFound for any other name.
ProblemInstance builtin_instance(std::string_view name);
std::vector<std::string> builtin_instance_names();

// ((1 - l_i) Q_i, (1 + u_i) Q_i) rounded half-up. `variation` is 0-based;
// throws IndexError when out of range.
ToleranceBand tolerance_band(const ProblemInstance& inst, int variation);

// JSON instance documents. Demands are raw product units.
ProblemInstance load_instance(std::istream& in);
ProblemInstance load_instance(std::string_view text);
std::string serialize_instance(const ProblemInstance& inst);

// Accepts "builtin:<name>" or a filesystem path.
ProblemInstance resolve_instance(const std::string& source);

}  // namespace tdp

#endif  // TDP_INSTANCE_HPP_
