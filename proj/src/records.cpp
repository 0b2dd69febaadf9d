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

#include "tdp/records.hpp"

#include <charconv>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "tdp/errors.hpp"
#include "tdp/pressing.hpp"

namespace tdp {

namespace {

using json = nlohmann::json;

constexpr const char* kHeader =
    "algorithm,instance,seed,evals_used,feasible,best_waste,best_violation,"
    "wall_time";

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_row(const std::string& line, int line_no) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        out.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote", line_no, "");
  return out;
}

template <typename T>
T parse_number(const std::string& text, int line_no, const char* field) {
  T value{};
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParseError("bad " + std::string(field) + " '" + text + "'", line_no,
                     field);
  }
  return value;
}

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, end) : "0";
}

using Key = std::tuple<std::string, std::string, uint64_t>;

}  // namespace

bool RunRecord::operator==(const RunRecord& o) const {
  return algorithm == o.algorithm && instance == o.instance &&
         seed == o.seed && evals_used == o.evals_used &&
         feasible == o.feasible && best_waste == o.best_waste &&
         best_violation == o.best_violation && kind == o.kind &&
         best_genotype == o.best_genotype && pressings == o.pressings;
}

RunRecord make_record(const ProblemInstance& inst, std::string algorithm,
                      uint64_t seed, int64_t evals_used, ModelKind kind,
                      const std::optional<Member>& best) {
  RunRecord r;
  r.algorithm = std::move(algorithm);
  r.instance = inst.name();
  r.seed = seed;
  r.evals_used = evals_used;
  r.kind = kind;
  if (best) {
    const PressingPlan plan =
        optimize_pressings(inst, as_classical(best->genotype, inst));
    r.best_genotype = best->genotype;
    r.pressings = plan.pressings;
    r.best_waste = plan.waste;
    r.best_violation = plan.violation;
    r.feasible = plan.feasible;
  }
  return r;
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records,
                       bool include_timing) {
  out << kHeader << "\n";
  for (const RunRecord& r : records) {
    out << quote(r.algorithm) << ',' << quote(r.instance) << ',' << r.seed
        << ',' << r.evals_used << ',' << (r.feasible ? 1 : 0) << ',';
    if (r.best_waste) out << *r.best_waste;
    out << ',' << r.best_violation << ','
        << (include_timing ? format_double(r.wall_time) : "0") << "\n";
  }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("missing header", 1, "");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw ParseError("unexpected header", 1, "");
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_row(line, line_no);
    if (f.size() != 8) {
      throw ParseError("expected 8 fields, got " + std::to_string(f.size()),
                       line_no, "");
    }
    RunRecord r;
    r.algorithm = f[0];
    r.instance = f[1];
    r.seed = parse_number<uint64_t>(f[2], line_no, "seed");
    r.evals_used = parse_number<int64_t>(f[3], line_no, "evals_used");
    r.feasible = parse_number<int>(f[4], line_no, "feasible") != 0;
    if (!f[5].empty()) {
      r.best_waste = parse_number<int64_t>(f[5], line_no, "best_waste");
    }
    r.best_violation = parse_number<int64_t>(f[6], line_no, "best_violation");
    r.wall_time = parse_number<double>(f[7], line_no, "wall_time");
    out.push_back(std::move(r));
  }
  return out;
}

void write_solutions_json(std::ostream& out,
                          const std::vector<RunRecord>& records) {
  json doc = json::array();
  for (const RunRecord& r : records) {
    json entry{{"algorithm", r.algorithm},
               {"instance", r.instance},
               {"seed", r.seed}};
    entry["model"] = std::string(1, model_letter(r.kind.model));
    entry["symmetry_breaking"] = r.kind.symmetry_breaking;
    if (r.best_genotype) {
      entry["solution"] = json::parse(write_solution(
          {r.kind, *r.best_genotype, r.pressings}));
    }
    doc.push_back(std::move(entry));
  }
  out << doc.dump(1) << "\n";
}

void read_solutions_json(std::istream& in, std::vector<RunRecord>& records) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0, "");
  }
  std::map<Key, RunRecord*> index;
  for (RunRecord& r : records) index[{r.algorithm, r.instance, r.seed}] = &r;
  try {
    for (const json& entry : doc) {
      const Key key{entry.at("algorithm").get<std::string>(),
                    entry.at("instance").get<std::string>(),
                    entry.at("seed").get<uint64_t>()};
      auto it = index.find(key);
      if (it == index.end()) continue;
      RunRecord& r = *it->second;
      r.kind.model = entry.at("model").get<std::string>() == "D"
                         ? Model::kAlternative
                         : Model::kClassical;
      r.kind.symmetry_breaking = entry.at("symmetry_breaking").get<bool>();
      if (entry.contains("solution")) {
        SolutionDocument sol = read_solution(entry.at("solution").dump());
        r.best_genotype = std::move(sol.genotype);
        r.pressings = sol.pressings.value_or(std::vector<int64_t>{});
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 0, "");
  }
}

}  // namespace tdp
