// Copyright 2026 The privdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privdist/lmc.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace privdist {

std::vector<Rational> Lmc::Distribution(StateId s) const {
  std::vector<Rational> dist(static_cast<std::size_t>(num_states()));
  for (const Transition& t : rows_[s]) dist[t.target] = t.probability;
  return dist;
}

std::optional<StateId> Lmc::FindState(absl::string_view name) const {
  for (StateId s = 0; s < num_states(); ++s) {
    if (names_[s] == name) return s;
  }
  return std::nullopt;
}

std::optional<SymbolId> Lmc::FindSymbol(absl::string_view symbol) const {
  for (SymbolId a = 0; a < alphabet_size(); ++a) {
    if (alphabet_[a] == symbol) return a;
  }
  return std::nullopt;
}

LmcBuilder& LmcBuilder::AddSymbol(std::string symbol) {
  alphabet_.push_back(std::move(symbol));
  return *this;
}

StateId LmcBuilder::AddState(std::string name, std::string label) {
  const StateId id = static_cast<StateId>(names_.size());
  if (name.empty()) name = absl::StrCat(id);
  names_.push_back(std::move(name));
  labels_.push_back(std::move(label));
  rows_.emplace_back();
  return id;
}

LmcBuilder& LmcBuilder::AddTransition(StateId from, StateId to,
                                      Rational probability) {
  const auto n = static_cast<StateId>(names_.size());
  if (from < 0 || from >= n || to < 0 || to >= n) {
    errors_.push_back(
        absl::StrCat("transition ", from, " -> ", to, " out of range"));
    return *this;
  }
  rows_[from][to] += probability;
  return *this;
}

absl::StatusOr<Lmc> LmcBuilder::Build() const {
  if (!errors_.empty()) {
    return absl::InvalidArgumentError(absl::StrJoin(errors_, "; "));
  }
  Lmc lmc;
  std::set<std::string> seen;
  for (const std::string& a : alphabet_) {
    if (!seen.insert(a).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate alphabet symbol '", a, "'"));
    }
  }
  lmc.alphabet_ = alphabet_;
  if (names_.empty()) {
    return absl::InvalidArgumentError("chain has no states");
  }
  seen.clear();
  for (std::size_t s = 0; s < names_.size(); ++s) {
    if (!seen.insert(names_[s]).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate state name '", names_[s], "'"));
    }
    const auto it = std::find(alphabet_.begin(), alphabet_.end(), labels_[s]);
    if (it == alphabet_.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("state '", names_[s], "' has unknown label symbol '",
                       labels_[s], "'"));
    }
    lmc.labels_.push_back(static_cast<SymbolId>(it - alphabet_.begin()));
  }
  lmc.names_ = names_;
  for (std::size_t s = 0; s < rows_.size(); ++s) {
    std::vector<Transition> row;
    Rational total(0);
    for (const auto& [to, p] : rows_[s]) {
      if (p.sign() < 0 || p > Rational(1)) {
        return absl::InvalidArgumentError(
            absl::StrCat("state '", names_[s], "': probability ", p.ToString(),
                         " to '", names_[to], "' outside [0, 1]"));
      }
      total += p;
      if (!p.is_zero()) row.push_back({to, p});
    }
    if (total != Rational(1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("state '", names_[s],
                       "' is not stochastic: outgoing probabilities sum to ",
                       total.ToString()));
    }
    lmc.rows_.push_back(std::move(row));
  }
  return lmc;
}

namespace {

absl::Status LineError(int line, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("line ", line, ": ", message));
}

}  // namespace

absl::StatusOr<Lmc> ParseLmc(absl::string_view text) {
  LmcBuilder builder;
  std::map<std::string, StateId, std::less<>> state_ids;
  std::set<std::string, std::less<>> symbols;
  bool header_seen = false;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = raw;
    if (auto hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::vector<absl::string_view> tok =
        absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
    if (tok.empty()) continue;
    if (!header_seen) {
      if (tok.size() != 2 || tok[0] != "lmc" || tok[1] != "v1") {
        return LineError(line_no, "expected header 'lmc v1'");
      }
      header_seen = true;
      continue;
    }
    if (tok[0] == "alphabet") {
      if (tok.size() < 2) return LineError(line_no, "empty alphabet");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (!symbols.emplace(tok[i]).second) {
          return LineError(line_no,
                           absl::StrCat("duplicate symbol '", tok[i], "'"));
        }
        builder.AddSymbol(std::string(tok[i]));
      }
    } else if (tok[0] == "state") {
      if (tok.size() != 3) {
        return LineError(line_no, "expected 'state NAME LABEL'");
      }
      if (!symbols.contains(tok[2])) {
        return LineError(line_no,
                         absl::StrCat("unknown label symbol '", tok[2], "'"));
      }
      if (state_ids.contains(tok[1])) {
        return LineError(line_no,
                         absl::StrCat("duplicate state '", tok[1], "'"));
      }
      state_ids.emplace(
          std::string(tok[1]),
          builder.AddState(std::string(tok[1]), std::string(tok[2])));
    } else if (tok[0] == "trans") {
      if (tok.size() != 4) {
        return LineError(line_no, "expected 'trans FROM TO PROBABILITY'");
      }
      const auto from = state_ids.find(tok[1]);
      const auto to = state_ids.find(tok[2]);
      if (from == state_ids.end() || to == state_ids.end()) {
        return LineError(
            line_no,
            absl::StrCat("unknown state '",
                         from == state_ids.end() ? tok[1] : tok[2], "'"));
      }
      absl::StatusOr<Rational> p = ParseRational(tok[3]);
      if (!p.ok()) return LineError(line_no, p.status().message());
      builder.AddTransition(from->second, to->second, *std::move(p));
    } else {
      return LineError(line_no,
                       absl::StrCat("unknown directive '", tok[0], "'"));
    }
  }
  if (!header_seen) return absl::InvalidArgumentError("empty chain file");
  return builder.Build();
}

absl::StatusOr<Lmc> ParseLmcJson(absl::string_view text) {
  using nlohmann::json;
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("malformed JSON chain");
  }
  auto string_of = [](const json& v) -> std::optional<std::string> {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return std::nullopt;
  };
  LmcBuilder builder;
  std::map<std::string, StateId> ids;
  if (!doc.contains("alphabet") || !doc["alphabet"].is_array() ||
      !doc.contains("states") || !doc["states"].is_array()) {
    return absl::InvalidArgumentError(
        "JSON chain needs 'alphabet' and 'states' arrays");
  }
  for (const json& a : doc["alphabet"]) {
    if (!a.is_string()) {
      return absl::InvalidArgumentError("alphabet entries must be strings");
    }
    builder.AddSymbol(a.get<std::string>());
  }
  for (const json& s : doc["states"]) {
    if (!s.is_object() || !s.contains("name") || !s.contains("label") ||
        !s["name"].is_string() || !s["label"].is_string()) {
      return absl::InvalidArgumentError(
          "each state needs string 'name' and 'label'");
    }
    const std::string name = s["name"].get<std::string>();
    if (ids.contains(name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate state '", name, "'"));
    }
    ids[name] = builder.AddState(name, s["label"].get<std::string>());
  }
  if (doc.contains("transitions")) {
    if (!doc["transitions"].is_array()) {
      return absl::InvalidArgumentError("'transitions' must be an array");
    }
    for (const json& t : doc["transitions"]) {
      if (!t.is_object() || !t.contains("from") || !t.contains("to") ||
          !t.contains("p")) {
        return absl::InvalidArgumentError(
            "each transition needs 'from', 'to' and 'p'");
      }
      const auto from = string_of(t["from"]);
      const auto to = string_of(t["to"]);
      const auto p_text = string_of(t["p"]);
      if (!from || !to || !p_text || !ids.contains(*from) ||
          !ids.contains(*to)) {
        return absl::InvalidArgumentError(
            absl::StrCat("bad transition ", t.dump()));
      }
      absl::StatusOr<Rational> p = ParseRational(*p_text);
      if (!p.ok()) return p.status();
      builder.AddTransition(ids[*from], ids[*to], *std::move(p));
    }
  }
  return builder.Build();
}

absl::StatusOr<Lmc> LoadLmcFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (absl::EndsWith(path, ".json")) return ParseLmcJson(buffer.str());
  return ParseLmc(buffer.str());
}

std::string FormatLmc(const Lmc& lmc) {
  std::string out = "lmc v1\n";
  absl::StrAppend(&out, "alphabet ", absl::StrJoin(lmc.alphabet(), " "), "\n");
  for (StateId s = 0; s < lmc.num_states(); ++s) {
    absl::StrAppend(&out, "state ", lmc.name(s), " ", lmc.label_name(s), "\n");
  }
  for (StateId s = 0; s < lmc.num_states(); ++s) {
    for (const Transition& t : lmc.row(s)) {
      absl::StrAppend(&out, "trans ", lmc.name(s), " ", lmc.name(t.target), " ",
                      t.probability.ToString(), "\n");
    }
  }
  return out;
}

std::string FormatLmcJson(const Lmc& lmc) {
  using nlohmann::json;
  json doc;
  doc["alphabet"] = lmc.alphabet();
  doc["states"] = json::array();
  doc["transitions"] = json::array();
  for (StateId s = 0; s < lmc.num_states(); ++s) {
    doc["states"].push_back(
        {{"name", lmc.name(s)}, {"label", lmc.label_name(s)}});
    for (const Transition& t : lmc.row(s)) {
      doc["transitions"].push_back({{"from", lmc.name(s)},
                                    {"to", lmc.name(t.target)},
                                    {"p", t.probability.ToString()}});
    }
  }
  return doc.dump(2) + "\n";
}

std::string FormatDot(const Lmc& lmc) {
  std::string out = "digraph lmc {\n";
  for (StateId s = 0; s < lmc.num_states(); ++s) {
    absl::StrAppend(&out, "  n", s, " [label=\"", lmc.name(s), "\\n",
                    lmc.label_name(s), "\"];\n");
  }
  for (StateId s = 0; s < lmc.num_states(); ++s) {
    for (const Transition& t : lmc.row(s)) {
      absl::StrAppend(&out, "  n", s, " -> n", t.target, " [label=\"",
                      t.probability.ToString(), "\"];\n");
    }
  }
  out += "}\n";
  return out;
}

std::string TraceToString(const Lmc& lmc, const Trace& trace) {
  return absl::StrJoin(trace, " ", [&lmc](std::string* out, SymbolId a) {
    out->append(lmc.symbol(a));
  });
}

HorizonOptions HorizonOptionsFromEnv() {
  HorizonOptions options;
  if (const char* env = std::getenv("PRIVDIST_EXPLOSION_LIMIT")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) options.explosion_limit = v;
  }
  return options;
}

absl::StatusOr<HorizonDistribution> ComputeHorizonDistribution(
    const Lmc& lmc, StateId s, int horizon, const HorizonOptions& options) {
  if (horizon < 0) return absl::InvalidArgumentError("negative horizon");
  if (s < 0 || s >= lmc.num_states()) {
    return absl::InvalidArgumentError("state out of range");
  }
  HorizonDistribution result;
  result.horizon = horizon;
  if (horizon == 0) {
    result.mass.emplace(Trace{}, Rational(1));
    return result;
  }
  // Forward DP over (emitted labels, current state); the last state's label
  // is already part of the key.
  std::map<std::pair<Trace, StateId>, Rational> frontier;
  frontier.emplace(std::make_pair(Trace{lmc.label(s)}, s), Rational(1));
  for (int step = 1; step < horizon; ++step) {
    std::map<std::pair<Trace, StateId>, Rational> next;
    for (const auto& [key, mass] : frontier) {
      for (const Transition& t : lmc.row(key.second)) {
        Trace extended = key.first;
        extended.push_back(lmc.label(t.target));
        next[{std::move(extended), t.target}] += mass * t.probability;
      }
    }
    frontier = std::move(next);
    if (frontier.size() > options.explosion_limit) {
      if (options.strict) {
        return absl::ResourceExhaustedError(absl::StrCat(
            "horizon ", horizon, " exceeds the explosion limit of ",
            options.explosion_limit, " trace entries"));
      }
      result.limit_exceeded = true;
    }
  }
  for (auto& [key, mass] : frontier) result.mass[key.first] += mass;
  return result;
}

std::vector<std::vector<StateId>> Partition::Blocks() const {
  std::vector<std::vector<StateId>> blocks(
      static_cast<std::size_t>(num_blocks));
  for (StateId s = 0; s < static_cast<StateId>(block_of.size()); ++s) {
    blocks[block_of[s]].push_back(s);
  }
  return blocks;
}

Partition RefinePartition(const Lmc& lmc, const Partition& partition) {
  using Signature = std::pair<int, std::map<int, Rational>>;
  std::map<Signature, int> ids;
  Partition refined;
  refined.block_of.resize(static_cast<std::size_t>(lmc.num_states()));
  for (StateId s = 0; s < lmc.num_states(); ++s) {
    Signature sig;
    sig.first = partition.block_of[s];
    for (const Transition& t : lmc.row(s)) {
      sig.second[partition.block_of[t.target]] += t.probability;
    }
    auto [it, inserted] =
        ids.emplace(std::move(sig), static_cast<int>(ids.size()));
    refined.block_of[s] = it->second;
  }
  refined.num_blocks = static_cast<int>(ids.size());
  return refined;
}

Partition BisimilarityPartition(const Lmc& lmc) {
  Partition current;
  std::map<SymbolId, int> by_label;
  for (StateId s = 0; s < lmc.num_states(); ++s) {
    auto [it, inserted] =
        by_label.emplace(lmc.label(s), static_cast<int>(by_label.size()));
    current.block_of.push_back(it->second);
  }
  current.num_blocks = static_cast<int>(by_label.size());
  while (true) {
    Partition next = RefinePartition(lmc, current);
    if (next.num_blocks == current.num_blocks) return next;
    current = std::move(next);
  }
}

}  // namespace privdist
