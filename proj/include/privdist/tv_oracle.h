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

// Finite-horizon lower bounds on the skewed trace distance tv_alpha.

#ifndef PRIVDIST_TV_ORACLE_H_
#define PRIVDIST_TV_ORACLE_H_

#include <set>
#include <string>

#include "absl/status/statusor.h"
#include "privdist/lmc.h"
#include "privdist/rational.h"
#include "privdist/skew_kantorovich.h"

namespace privdist {

// A union of length-h cylinders.
struct HorizonEvent {
  int horizon = 0;
  std::set<Trace> included;
};

enum class TvDirection {
  kSMinus,       // nu_s(E) - alpha nu_s'(E)
  kSPrimeMinus,  // nu_s'(E) - alpha nu_s(E)
};

std::string TvDirectionName(TvDirection d);

struct TvResult {
  Rational value;
  HorizonEvent event;
  TvDirection direction = TvDirection::kSMinus;
  // A horizon distribution outgrew options.explosion_limit (non-strict mode).
  bool limit_exceeded = false;
};

// Delta_alpha maximized over events made of length-h cylinders. Each trace
// joins the event iff it contributes positively; ties between directions go
// to kSMinus. Errors: bad states, negative h, explosion limit in strict mode.
absl::StatusOr<TvResult> TvLowerBound(const Alpha& alpha, const Lmc& lmc,
                                      StateId s, StateId t, int horizon,
                                      const HorizonOptions& options = {});

}  // namespace privdist

#endif  // PRIVDIST_TV_ORACLE_H_
