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

#include "privdist/model_gen.h"

#include <map>
#include <numeric>
#include <random>
#include <tuple>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace privdist {
namespace {

constexpr char kInit[] = "init";
constexpr char kFlip[] = "flip";
constexpr char kAgree[] = "agree";
constexpr char kDisagree[] = "disagree";
constexpr char kDone[] = "done";

const char* CoinName(bool heads) { return heads ? "H" : "T"; }

class DiningBuilder {
 public:
  explicit DiningBuilder(const DiningConfig& config) : config_(config) {
    for (const char* s : {kInit, kFlip, kAgree, kDisagree, kDone}) {
      builder_.AddSymbol(s);
    }
  }

  absl::StatusOr<DiningChain> Build() {
    std::vector<StateId> starts;
    for (int payer = 0; payer < config_.n; ++payer) {
      starts.push_back(builder_.AddState(absl::StrCat("start", payer), kInit));
    }
    done_ = builder_.AddState("done", kDone);
    builder_.AddTransition(done_, done_, Rational(1));
    for (int payer = 0; payer < config_.n; ++payer) {
      for (bool first : {true, false}) {
        const StateId flip = builder_.AddState(
            absl::StrCat("p", payer, "_first", CoinName(first)), kFlip);
        builder_.AddTransition(starts[payer], flip, CoinProbability(first));
        Expand(payer, flip, /*position=*/0, /*previous=*/first, first);
      }
    }
    absl::StatusOr<Lmc> lmc = builder_.Build();
    if (!lmc.ok()) return lmc.status();
    return DiningChain{*std::move(lmc), std::move(starts)};
  }

 private:
  Rational CoinProbability(bool heads) const {
    return heads ? config_.p : Rational(1) - config_.p;
  }

  // Cryptographer `position` flips (or reuses the first coin when last) and
  // announces; `from` is the state preceding that announcement.
  void Expand(int payer, StateId from, int position, bool previous,
              bool first) {
    if (position == config_.n) {
      builder_.AddTransition(from, done_, Rational(1));
      return;
    }
    const bool last = position == config_.n - 1;
    for (bool coin : {true, false}) {
      if (last && coin != first) continue;
      const bool equal = previous == coin;
      const bool says_agree = (position == payer) ? equal : !equal;
      const auto [next, created] =
          Announcement(payer, position, previous, coin, first,
                       says_agree ? kAgree : kDisagree);
      builder_.AddTransition(from, next,
                             last ? Rational(1) : CoinProbability(coin));
      // Announcement states are shared; give each one its successors once.
      if (created) Expand(payer, next, position + 1, coin, first);
    }
  }

  // The state for this announcement, and whether it was just created.
  std::pair<StateId, bool> Announcement(int payer, int position, bool previous,
                                        bool coin, bool first,
                                        const char* label) {
    const auto key = std::make_tuple(payer, position, previous, coin, first);
    if (auto it = announcements_.find(key); it != announcements_.end()) {
      return {it->second, false};
    }
    const StateId id = builder_.AddState(
        absl::StrCat("p", payer, "_c", position, "_", CoinName(previous),
                     CoinName(coin), CoinName(first)),
        label);
    announcements_.emplace(key, id);
    return {id, true};
  }

  DiningConfig config_;
  LmcBuilder builder_;
  StateId done_ = 0;
  std::map<std::tuple<int, int, bool, bool, bool>, StateId> announcements_;
};

}  // namespace

absl::StatusOr<DiningChain> GenerateDining(const DiningConfig& config) {
  if (config.n < 2) {
    return absl::InvalidArgumentError("need at least two cryptographers");
  }
  if (config.p.sign() <= 0 || config.p >= Rational(1)) {
    return absl::InvalidArgumentError("coin bias must lie in (0, 1)");
  }
  return DiningBuilder(config).Build();
}

std::string FormatDining(const DiningChain& chain) {
  std::vector<std::string> names;
  for (StateId s : chain.start_states) names.push_back(chain.lmc.name(s));
  return absl::StrCat("# start-states: ", absl::StrJoin(names, " "), "\n",
                      FormatLmc(chain.lmc));
}

absl::StatusOr<Lmc> GenerateRandom(int states, int alphabet_size,
                                   const Rational& density,
                                   std::uint64_t seed) {
  if (states < 1) return absl::InvalidArgumentError("states must be >= 1");
  if (alphabet_size < 1 || alphabet_size > 26) {
    return absl::InvalidArgumentError("alphabet size must be in [1, 26]");
  }
  if (density.sign() <= 0 || density > Rational(1)) {
    return absl::InvalidArgumentError("density must lie in (0, 1]");
  }
  // Raw engine output only; distribution objects are not portable across
  // standard libraries.
  std::mt19937_64 rng(seed);
  auto below = [&rng](std::uint64_t bound) { return rng() % bound; };

  LmcBuilder builder;
  for (int a = 0; a < alphabet_size; ++a) {
    builder.AddSymbol(std::string(1, static_cast<char>('a' + a)));
  }
  for (int s = 0; s < states; ++s) {
    builder.AddState(
        absl::StrCat("s", s),
        std::string(1, static_cast<char>('a' + below(alphabet_size))));
  }
  const auto fanout =
      static_cast<int>((density * Rational(states)).ceil().get_si());
  for (int s = 0; s < states; ++s) {
    std::vector<int> targets(static_cast<std::size_t>(states));
    std::iota(targets.begin(), targets.end(), 0);
    // Partial Fisher-Yates for the first `fanout` successors.
    for (int i = 0; i < fanout; ++i) {
      const auto j = i + static_cast<int>(below(states - i));
      std::swap(targets[i], targets[j]);
    }
    std::vector<std::int64_t> weights;
    std::int64_t total = 0;
    for (int i = 0; i < fanout; ++i) {
      weights.push_back(1 + static_cast<std::int64_t>(below(4)));
      total += weights.back();
    }
    for (int i = 0; i < fanout; ++i) {
      builder.AddTransition(s, targets[i], Rational(weights[i], total));
    }
  }
  return builder.Build();
}

}  // namespace privdist
