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

#ifndef PRIVDIST_LMC_H_
#define PRIVDIST_LMC_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privdist/rational.h"

namespace privdist {

using StateId = int;
using SymbolId = int;

// One nonzero entry of a transition row.
struct Transition {
  StateId target;
  Rational probability;
};

// A labelled Markov chain with dense state indices 0..n-1. Every state has
// one label drawn from the declared alphabet and a row-stochastic rational
// transition row stored sparsely (sorted by target, zeros omitted).
//
// Instances are only produced by LmcBuilder::Build(), which validates all
// invariants; afterwards the chain is immutable.
class Lmc {
 public:
  int num_states() const { return static_cast<int>(labels_.size()); }
  int alphabet_size() const { return static_cast<int>(alphabet_.size()); }

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::string& symbol(SymbolId a) const { return alphabet_[a]; }
  SymbolId label(StateId s) const { return labels_[s]; }
  const std::string& label_name(StateId s) const {
    return alphabet_[labels_[s]];
  }
  const std::string& name(StateId s) const { return names_[s]; }
  const std::vector<Transition>& row(StateId s) const { return rows_[s]; }

  // Dense copy of mu_s, indexed by state.
  std::vector<Rational> Distribution(StateId s) const;

  std::optional<StateId> FindState(absl::string_view name) const;
  std::optional<SymbolId> FindSymbol(absl::string_view symbol) const;

 private:
  friend class LmcBuilder;

  std::vector<std::string> alphabet_;
  std::vector<std::string> names_;
  std::vector<SymbolId> labels_;
  std::vector<std::vector<Transition>> rows_;
};

class LmcBuilder {
 public:
  // Symbols must be unique.
  LmcBuilder& AddSymbol(std::string symbol);
  // Returns the new state's index. `name` may be empty, in which case the
  // state is named by its index.
  StateId AddState(std::string name, std::string label);
  // Repeated (from, to) entries accumulate.
  LmcBuilder& AddTransition(StateId from, StateId to, Rational probability);

  // Validates: labels are alphabet members, names unique, probabilities in
  // [0, 1], rows sum to exactly 1.
  absl::StatusOr<Lmc> Build() const;

 private:
  std::vector<std::string> alphabet_;
  std::vector<std::string> names_;
  std::vector<std::string> labels_;
  std::vector<std::map<StateId, Rational>> rows_;
  std::vector<std::string> errors_;
};

// The line-oriented text format ("lmc v1", alphabet, state, trans lines).
absl::StatusOr<Lmc> ParseLmc(absl::string_view text);
// JSON mirror: {"alphabet": [...], "states": [{"name", "label"}],
//               "transitions": [{"from", "to", "p"}]}.
absl::StatusOr<Lmc> ParseLmcJson(absl::string_view text);
// Dispatches on the extension: ".json" selects the JSON mirror.
absl::StatusOr<Lmc> LoadLmcFile(const std::string& path);

std::string FormatLmc(const Lmc& lmc);
std::string FormatLmcJson(const Lmc& lmc);
// Graphviz rendering of the chain.
std::string FormatDot(const Lmc& lmc);

// A label string u in Sigma^h, as symbol indices.
using Trace = std::vector<SymbolId>;

std::string TraceToString(const Lmc& lmc, const Trace& trace);

// nu_s restricted to the cylinders of length h: mass[u] = nu_s(C_u) for
// every u of length h with nonzero mass.
struct HorizonDistribution {
  int horizon = 0;
  std::map<Trace, Rational> mass;
  // Set when the number of trace entries exceeded the explosion limit in
  // non-strict mode.
  bool limit_exceeded = false;
};

struct HorizonOptions {
  std::size_t explosion_limit = 1'000'000;
  // In strict mode exceeding the limit is an error instead of a warning.
  bool strict = false;
};

// Reads PRIVDIST_EXPLOSION_LIMIT when set, else the default limit.
HorizonOptions HorizonOptionsFromEnv();

absl::StatusOr<HorizonDistribution> ComputeHorizonDistribution(
    const Lmc& lmc, StateId s, int horizon, const HorizonOptions& options = {});

// Probabilistic bisimilarity as a partition of the states.
struct Partition {
  std::vector<int> block_of;
  int num_blocks = 0;

  bool SameBlock(StateId a, StateId b) const {
    return block_of[a] == block_of[b];
  }
  // Blocks as state lists, in order of their smallest member.
  std::vector<std::vector<StateId>> Blocks() const;
};

// Coarsest partition refining label equality in which all states of a block
// move into every block with the same total probability.
Partition BisimilarityPartition(const Lmc& lmc);

// One splitting round: refines `partition` by (block, mass into each block)
// signatures. Blocks are renumbered by first occurrence.
Partition RefinePartition(const Lmc& lmc, const Partition& partition);

}  // namespace privdist

#endif  // PRIVDIST_LMC_H_
