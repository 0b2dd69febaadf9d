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

#include "tdp/algspec.hpp"

#include <cctype>
#include <optional>
#include <tuple>
#include <type_traits>

#include "tdp/errors.hpp"

namespace tdp {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  AlgorithmSpec parse() {
    skip_space();
    if (at_end()) fail("empty algorithm name");
    AlgorithmSpec out;
    if (auto topology = topology_head()) {
      out = cooperative(*topology);
    } else {
      out = std::visit([](auto&& m) -> AlgorithmSpec { return m; }, member());
    }
    skip_space();
    if (!at_end()) fail("unexpected trailing text");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1), 1,
                     "algorithm", static_cast<int>(pos_) + 1);
  }

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  char peek() {
    skip_space();
    return at_end() ? '\0' : text_[pos_];
  }

  // Case-insensitive keyword match; consumes on success.
  bool accept(std::string_view word) {
    skip_space();
    std::size_t p = pos_;
    for (char c : word) {
      while (p < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[p]))) {
        ++p;
      }
      if (p >= text_.size() ||
          std::tolower(static_cast<unsigned char>(text_[p])) !=
              std::tolower(static_cast<unsigned char>(c))) {
        return false;
      }
      ++p;
    }
    pos_ = p;
    return true;
  }

  void expect(std::string_view word) {
    if (!accept(word)) fail("expected '" + std::string(word) + "'");
  }

  std::optional<int> number() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) return std::nullopt;
    long value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_++] - '0');
      if (value > 1'000'000) fail("number too large");
    }
    return static_cast<int>(value);
  }

  std::optional<Topology> topology_head() {
    const std::size_t save = pos_;
    for (auto [word, topology] : {std::pair{"ri", Topology::kRing},
                                  std::pair{"bc", Topology::kBroadcast},
                                  std::pair{"ra", Topology::kRandom}}) {
      if (accept(word)) {
        if (std::isdigit(static_cast<unsigned char>(peek()))) return topology;
        pos_ = save;
      }
    }
    return std::nullopt;
  }

  ModelKind model() {
    ModelKind kind;
    if (accept("p")) {
      kind.model = Model::kClassical;
    } else if (accept("d")) {
      kind.model = Model::kAlternative;
    } else {
      fail("expected model P or D");
    }
    kind.symmetry_breaking = accept("*");
    return kind;
  }

  SearchMethod method() {
    if (accept("hc")) return SearchMethod::kHillClimbing;
    if (accept("ts")) return SearchMethod::kTabuSearch;
    fail("expected Hc or Ts");
  }

  std::pair<int, Crossover> recombination() {
    expect(".");
    expect("a");
    const auto arity = number();
    if (!arity) fail("expected parent count after 'A'");
    if (*arity < 2) fail("crossover needs at least two parents");
    expect(".");
    if (accept("ux")) return {*arity, Crossover::kUniform};
    if (accept("gd")) return {*arity, Crossover::kGreedy};
    fail("expected crossover Ux or Gd");
  }

  MemberSpec member() {
    for (auto [word, m] : {std::pair{"hc", SearchMethod::kHillClimbing},
                           std::pair{"ts", SearchMethod::kTabuSearch}}) {
      if (accept(word)) {
        expect(".");
        return LocalSearchSpec{m, model()};
      }
    }
    if (accept("ga")) {
      expect(".");
      GeneticSpec g;
      g.kind = model();
      std::tie(g.arity, g.crossover) = recombination();
      return g;
    }
    if (accept("ma")) {
      expect(".");
      MemeticSpec m;
      m.ls_method = method();
      expect(".");
      m.kind = model();
      std::tie(m.arity, m.crossover) = recombination();
      return m;
    }
    if (topology_head()) fail("cooperative algorithms cannot be nested");
    fail("expected Hc, Ts, Ga or Ma");
  }

  Policy policy() {
    if (accept("r")) return Policy::kRandom;
    if (accept("d")) return Policy::kDiverse;
    if (accept("w")) return Policy::kWorst;
    fail("expected policy R, D or W");
  }

  CooperativeSpec cooperative(Topology topology) {
    CooperativeSpec spec;
    spec.topology = topology;
    spec.agents = *number();
    if (spec.agents < 1) fail("agent count must be positive");
    expect("(");
    std::vector<std::optional<int>> copies;
    do {
      const auto n = number();
      if (n && *n < 1) fail("member multiplier must be positive");
      copies.push_back(n);
      spec.members.emplace_back(1, member());
    } while (accept(","));
    expect(")");
    spec.migration = policy();
    spec.acceptance = policy();

    const int listed = static_cast<int>(spec.members.size());
    bool any_multiplier = false;
    int total = 0;
    for (const auto& c : copies) {
      any_multiplier |= c.has_value();
      total += c.value_or(1);
    }
    if (total > spec.agents) {
      throw SpecError("members add up to " + std::to_string(total) +
                      " agents, more than " + std::to_string(spec.agents));
    }
    spec.written_counts = any_multiplier;
    if (any_multiplier) {
      if (total != spec.agents) {
        throw SpecError("members add up to " + std::to_string(total) +
                        " agents, expected " + std::to_string(spec.agents));
      }
      for (int k = 0; k < listed; ++k) {
        spec.members[k].first = copies[k].value_or(1);
      }
    } else {
      const auto split = even_split(listed, spec.agents);
      for (int k = 0; k < listed; ++k) spec.members[k].first = split[k];
    }
    return spec;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_kind(ModelKind kind) { return to_string(kind); }

const char* crossover_name(Crossover c) {
  return c == Crossover::kUniform ? "Ux" : "Gd";
}

const char* method_name(SearchMethod m) {
  return m == SearchMethod::kHillClimbing ? "Hc" : "Ts";
}

}  // namespace

std::vector<int> even_split(int listed, int agents) {
  if (listed < 1) throw SpecError("no members listed");
  if (listed > agents) {
    throw SpecError(std::to_string(listed) + " members listed for " +
                    std::to_string(agents) + " agents");
  }
  std::vector<int> out(listed, agents / listed);
  for (int k = 0; k < agents % listed; ++k) ++out[k];
  return out;
}

AlgorithmSpec parse_spec(std::string_view text) { return Parser(text).parse(); }

std::string format_spec(const MemberSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LocalSearchSpec>) {
          return std::string(method_name(s.method)) + "." + format_kind(s.kind);
        } else if constexpr (std::is_same_v<T, GeneticSpec>) {
          return "Ga." + format_kind(s.kind) + ".A" + std::to_string(s.arity) +
                 "." + crossover_name(s.crossover);
        } else {
          return std::string("Ma.") + method_name(s.ls_method) + "." +
                 format_kind(s.kind) + ".A" + std::to_string(s.arity) + "." +
                 crossover_name(s.crossover);
        }
      },
      spec);
}

std::string format_spec(const AlgorithmSpec& spec) {
  if (const auto* c = std::get_if<CooperativeSpec>(&spec)) {
    static constexpr const char* kHeads[] = {"Ri", "Bc", "Ra"};
    std::string out = kHeads[static_cast<int>(c->topology)] +
                      std::to_string(c->agents) + "(";
    std::vector<int> counts;
    for (const auto& [n, m] : c->members) counts.push_back(n);
    bool implicit = false;
    const int listed = static_cast<int>(counts.size());
    if (!c->written_counts && listed >= 1 && listed <= c->agents) {
      implicit = counts == even_split(listed, c->agents);
    }
    for (int k = 0; k < listed; ++k) {
      if (k) out += ",";
      if (!implicit && counts[k] != 1) out += std::to_string(counts[k]);
      out += format_spec(c->members[k].second);
    }
    out += ")";
    out += policy_letter(c->migration);
    out += policy_letter(c->acceptance);
    return out;
  }
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CooperativeSpec>) {
          return {};
        } else {
          return format_spec(MemberSpec(s));
        }
      },
      spec);
}

std::vector<MemberSpec> expand_members(const CooperativeSpec& spec) {
  std::vector<MemberSpec> out;
  for (const auto& [n, m] : spec.members) {
    if (n < 1) throw SpecError("member multiplier must be positive");
    out.insert(out.end(), n, m);
  }
  if (static_cast<int>(out.size()) != spec.agents) {
    throw SpecError("members add up to " + std::to_string(out.size()) +
                    " agents, expected " + std::to_string(spec.agents));
  }
  return out;
}

ModelKind kind_of(const MemberSpec& spec) {
  return std::visit([](const auto& s) { return s.kind; }, spec);
}

bool is_supported_policy_pair(Policy migration, Policy) {
  return migration != Policy::kWorst;
}

char policy_letter(Policy p) {
  switch (p) {
    case Policy::kRandom:
      return 'R';
    case Policy::kDiverse:
      return 'D';
    case Policy::kWorst:
      return 'W';
  }
  return '?';
}

}  // namespace tdp
