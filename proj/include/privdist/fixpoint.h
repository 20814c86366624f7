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

// Computation of the skewed bisimilarity distance bd_alpha, the least fixed
// point of Gamma_alpha.
//
// Lower bounds come from Kleene iteration started at the all-zero matrix:
// every iterate L satisfies L <= Gamma(L) <= bd. Upper bounds come from
// pre-fixed points U with Gamma(U) <= U, which dominate the least fixed
// point. The engine keeps both sides, tries to close the gap by rounding the
// lower iterate to simple rationals, and only reports an exact value when the
// enclosure justifies it.

#ifndef PRIVDIST_FIXPOINT_H_
#define PRIVDIST_FIXPOINT_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privdist/lmc.h"
#include "privdist/rational.h"
#include "privdist/skew_kantorovich.h"

namespace privdist {

// A candidate upper bound on bd_alpha. `checked` is true iff Gamma(d) <= d
// holds exactly, with d = 1 on every label mismatch.
struct Certificate {
  Alpha alpha;
  DistanceMatrix d;
  bool checked = false;
  // The first failing pair and why, when not checked.
  std::optional<std::pair<StateId, StateId>> violation;
  std::string reason;
};

struct CertificateOptions {
  // kDual produces transport witnesses for every inequality; kPrimal is
  // cheaper. Both decide the same predicate.
  KantorovichMode mode = KantorovichMode::kPrimal;
  int threads = 1;
};

// Errors: dimension mismatch, or d outside [0, 1] / not symmetric.
absl::StatusOr<Certificate> CheckCertificate(
    const Alpha& alpha, const Lmc& lmc, const DistanceMatrix& d,
    const CertificateOptions& options = {});

struct EngineOptions {
  int max_iters = 10'000;
  // Stop once an iteration moves no entry by more than this.
  Rational stop_gap = PowerOfTwo(-64);
  GammaOptions gamma;
  // Iterate entries whose denominators exceed this many bits are rounded
  // (down for lower bounds, up for upper bounds) onto a 2^-bits grid.
  int precision_bits = 96;
  // First rounding slack is 2^-first_slack_exponent. A level is retried
  // until its candidate passes, then the slack halves.
  int first_slack_exponent = 10;
  // Also iterate downward from a pre-fixed starting point.
  bool track_upper_iterate = true;
};

// Two-sided enclosure lower <= bd_alpha <= upper.
struct Bounds {
  DistanceMatrix lower;
  DistanceMatrix upper;
  int iterations = 0;
};

// Drives both iterations. Not thread-safe; Gamma applications inside may use
// worker threads per GammaOptions.
class FixpointEngine {
 public:
  FixpointEngine(Alpha alpha, const Lmc& lmc, EngineOptions options = {});

  // One Kleene step on the lower side, one downward step on the upper side,
  // and a rounding attempt when the lower iterate has settled enough.
  // Returns the largest change of the lower iterate.
  Rational Step();

  const Alpha& alpha() const { return alpha_; }
  const DistanceMatrix& lower() const { return lower_; }
  const DistanceMatrix& upper() const { return upper_; }
  int iterations() const { return iterations_; }
  // Gamma(lower) == lower exactly: lower is bd_alpha itself.
  bool lower_is_fixed_point() const { return lower_fixed_; }
  const Rational& last_change() const { return last_change_; }
  // The last slack level whose rounded candidate was tried, or -1.
  int slack_exponent() const { return last_tried_level_; }

  // Exact value when the enclosure pins it, else nullopt. `recovered` is set
  // when the value comes from rounding stability rather than lower == upper.
  std::optional<Rational> Resolve(StateId s, StateId t,
                                  bool* recovered = nullptr) const;

  // True when another Step() can still change something.
  bool CanContinue() const;

  Bounds bounds() const { return {lower_, upper_, iterations_}; }

 private:
  void TryRoundedCandidate();

  Alpha alpha_;
  const Lmc& lmc_;
  EngineOptions options_;
  DistanceMatrix lower_;
  DistanceMatrix upper_;
  int iterations_ = 0;
  bool lower_fixed_ = false;
  Rational last_change_ = Rational(1);
  int slack_exponent_;
  struct PassedCandidate {
    int level;
    DistanceMatrix d;
    bool fixed_point;  // Gamma(d) == d, not just Gamma(d) <= d
  };
  // Candidates that passed the certificate check.
  std::vector<PassedCandidate> passed_;
  int last_tried_level_ = -1;
};

// Pre-fixed starting matrix: 0 on probabilistically bisimilar pairs, 1
// elsewhere.
DistanceMatrix BisimulationTop(const Lmc& lmc);

struct KleeneResult {
  // Largest entry change at each iteration.
  std::vector<Rational> changes;
  DistanceMatrix lower;
  bool converged = false;  // reached Gamma(d) == d exactly
  int iterations = 0;
};

// d_0 = 0, d_{k+1} = Gamma(d_k), rounded down when entries grow beyond
// options.precision_bits. Stops at an exact fixed point, when the change is
// at most stop_gap, or after max_iters.
KleeneResult KleeneIterate(const Alpha& alpha, const Lmc& lmc,
                           const EngineOptions& options = {});

enum class Resolution {
  kExact,      // lower == upper at the pair
  kRecovered,  // rounded fixed point, stable across two slack levels
  kBoundsOnly,
};

std::string ResolutionName(Resolution r);

struct ExactResult {
  Resolution resolution = Resolution::kBoundsOnly;
  std::optional<Rational> value;
  Bounds bounds;
};

ExactResult ExactValue(const Alpha& alpha, const Lmc& lmc, StateId s, StateId t,
                       const EngineOptions& options = {});

enum class Answer { kYes, kNo, kUnknown };

std::string AnswerName(Answer a);

struct ThresholdResult {
  Answer answer = Answer::kUnknown;
  // kYes: a checked certificate with d(s, t) <= theta.
  std::optional<Certificate> certificate;
  // kNo: a Kleene iterate with L(s, t) > theta and its iteration index.
  std::optional<DistanceMatrix> iterate;
  int iterate_index = 0;
  Bounds bounds;
};

// Requires theta in [0, 1].
absl::StatusOr<ThresholdResult> Threshold(const Alpha& alpha, const Lmc& lmc,
                                          StateId s, StateId t,
                                          const Rational& theta,
                                          const EngineOptions& options = {});

struct PairDelta {
  StateId s;
  StateId t;
  Rational delta;  // certified upper bound on bd_alpha(s, t)
  Resolution resolution;
  Rational lower;  // certified lower bound
};

struct DeltaBoundResult {
  Alpha alpha;
  int exp_terms = 0;  // series terms used when alpha came from epsilon
  std::vector<PairDelta> pairs;
  Rational max_delta;
};

// Per-pair delta bounds for epsilon,delta privacy with respect to the
// relation `pairs`, at the given alpha.
absl::StatusOr<DeltaBoundResult> DeltaBoundForAlpha(
    const Alpha& alpha, const Lmc& lmc,
    const std::vector<std::pair<StateId, StateId>>& pairs,
    const EngineOptions& options = {});

// As above with alpha = a Taylor lower bound on e^epsilon, which keeps the
// bound sound for epsilon because the distance is anti-monotone in alpha.
// `exp_terms` <= 0 selects the default series length.
absl::StatusOr<DeltaBoundResult> DeltaBound(
    const Lmc& lmc, const Rational& epsilon,
    const std::vector<std::pair<StateId, StateId>>& pairs,
    const EngineOptions& options = {}, int exp_terms = 0);

// Certificate file: "lmc-cert v1", "alpha RAT", and "d S T RAT" lines for
// every unordered pair (including S == T). '#' starts a comment.
std::string FormatCertificate(const Lmc& lmc, const Alpha& alpha,
                              const DistanceMatrix& d);
absl::StatusOr<std::pair<Alpha, DistanceMatrix>> ParseCertificate(
    const Lmc& lmc, absl::string_view text);

}  // namespace privdist

#endif  // PRIVDIST_FIXPOINT_H_
