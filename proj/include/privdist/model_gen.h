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

#ifndef PRIVDIST_MODEL_GEN_H_
#define PRIVDIST_MODEL_GEN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privdist/lmc.h"
#include "privdist/rational.h"

namespace privdist {

struct DiningConfig {
  int n = 2;                    // cryptographers, >= 2
  Rational p = Rational(1, 2);  // coin bias, in (0, 1)
};

struct DiningChain {
  Lmc lmc;
  // start_states[k] is the entry point of the run in which cryptographer k
  // paid.
  std::vector<StateId> start_states;
};

// The dining-cryptographers protocol as one chain with a start state per
// paying cryptographer. A run emits "init", "flip" (the first coin), then one
// "agree"/"disagree" announcement per cryptographer, then "done" forever.
// The coin values are part of the state but never observable.
absl::StatusOr<DiningChain> GenerateDining(const DiningConfig& config);

// Trace length that covers a whole protocol run, including the first "done".
inline int DiningHorizon(int n) { return n + 3; }

// The generated chain in text form, preceded by a comment naming the start
// states.
std::string FormatDining(const DiningChain& chain);

// A seeded random chain over the alphabet "a", "b", ... Each row has
// ceil(density * states) distinct successors with small positive integer
// weights normalized to an exact distribution. Deterministic for a given seed.
absl::StatusOr<Lmc> GenerateRandom(int states, int alphabet_size,
                                   const Rational& density, std::uint64_t seed);

}  // namespace privdist

#endif  // PRIVDIST_MODEL_GEN_H_
