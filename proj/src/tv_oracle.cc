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

#include "privdist/tv_oracle.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace privdist {
namespace {

const Rational& MassOf(const HorizonDistribution& d, const Trace& u) {
  static const Rational* const kZero = new Rational(0);
  auto it = d.mass.find(u);
  return it == d.mass.end() ? *kZero : it->second;
}

// Sum of the positive parts of a(u) - alpha b(u) over the support of a.
// Traces outside supp(a) only contribute negatively and stay excluded.
std::pair<Rational, HorizonEvent> OneSided(const Alpha& alpha,
                                           const HorizonDistribution& a,
                                           const HorizonDistribution& b) {
  Rational total(0);
  HorizonEvent event;
  event.horizon = a.horizon;
  for (const auto& [u, pa] : a.mass) {
    Rational gain = pa - alpha.value() * MassOf(b, u);
    if (gain.sign() > 0) {
      total += gain;
      event.included.insert(u);
    }
  }
  return {std::move(total), std::move(event)};
}

}  // namespace

std::string TvDirectionName(TvDirection d) {
  return d == TvDirection::kSMinus ? "s-minus" : "s'-minus";
}

absl::StatusOr<TvResult> TvLowerBound(const Alpha& alpha, const Lmc& lmc,
                                      StateId s, StateId t, int horizon,
                                      const HorizonOptions& options) {
  if (s < 0 || t < 0 || s >= lmc.num_states() || t >= lmc.num_states()) {
    return absl::InvalidArgumentError("state out of range");
  }
  if (horizon < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("horizon must be >= 0, got ", horizon));
  }
  absl::StatusOr<HorizonDistribution> ds =
      ComputeHorizonDistribution(lmc, s, horizon, options);
  if (!ds.ok()) return ds.status();
  absl::StatusOr<HorizonDistribution> dt =
      ComputeHorizonDistribution(lmc, t, horizon, options);
  if (!dt.ok()) return dt.status();
  auto [forward, forward_event] = OneSided(alpha, *ds, *dt);
  auto [backward, backward_event] = OneSided(alpha, *dt, *ds);
  const bool exceeded = ds->limit_exceeded || dt->limit_exceeded;
  if (backward > forward) {
    return TvResult{std::move(backward), std::move(backward_event),
                    TvDirection::kSPrimeMinus, exceeded};
  }
  return TvResult{std::move(forward), std::move(forward_event),
                  TvDirection::kSMinus, exceeded};
}

}  // namespace privdist
