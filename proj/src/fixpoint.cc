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

#include "privdist/fixpoint.h"

#include <map>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace privdist {
namespace {

// Rounds entries whose denominators outgrew `bits`; `up` picks the
// direction. Entries stay inside [0, 1].
DistanceMatrix RoundMatrix(const DistanceMatrix& d, int bits, bool up) {
  DistanceMatrix out = d;
  for (int i = 0; i < d.size(); ++i) {
    for (int j = i; j < d.size(); ++j) {
      const Rational& x = d.at(i, j);
      if (x.DenominatorBits() <= static_cast<std::size_t>(bits)) continue;
      out.set(i, j,
              up ? Min(RoundUpDyadic(x, bits), Rational(1))
                 : RoundDownDyadic(x, bits));
    }
  }
  return out;
}

DistanceMatrix PointwiseMax(const DistanceMatrix& a, const DistanceMatrix& b) {
  DistanceMatrix out = a;
  for (int i = 0; i < a.size(); ++i) {
    for (int j = i; j < a.size(); ++j)
      out.set(i, j, Max(a.at(i, j), b.at(i, j)));
  }
  return out;
}

DistanceMatrix PointwiseMin(const DistanceMatrix& a, const DistanceMatrix& b) {
  DistanceMatrix out = a;
  for (int i = 0; i < a.size(); ++i) {
    for (int j = i; j < a.size(); ++j)
      out.set(i, j, Min(a.at(i, j), b.at(i, j)));
  }
  return out;
}

// 1 off the diagonal, 0 on it. Pre-fixed for every alpha: Gamma never
// exceeds 1 and is 0 on identical distributions.
DistanceMatrix OnesTop(int n) {
  DistanceMatrix d(n, Rational(1));
  for (int i = 0; i < n; ++i) d.set(i, i, Rational(0));
  return d;
}

// A failing level is abandoned once the iterate moves by less than
// slack / 2^kSettledBits per step.
constexpr int kSettledBits = 8;

absl::Status CheckPair(const Lmc& lmc, StateId s, StateId t) {
  if (s < 0 || t < 0 || s >= lmc.num_states() || t >= lmc.num_states()) {
    return absl::InvalidArgumentError(
        absl::StrCat("state pair (", s, ", ", t, ") out of range"));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Certificate> CheckCertificate(
    const Alpha& alpha, const Lmc& lmc, const DistanceMatrix& d,
    const CertificateOptions& options) {
  if (d.size() != lmc.num_states()) {
    return absl::InvalidArgumentError(
        absl::StrCat("certificate is ", d.size(), "x", d.size(),
                     " but the chain has ", lmc.num_states(), " states"));
  }
  if (absl::Status st = d.Validate(); !st.ok()) return st;
  Certificate cert{alpha, d, true, std::nullopt, ""};
  const int n = d.size();
  for (int i = 0; i < n && cert.checked; ++i) {
    for (int j = i; j < n; ++j) {
      if (lmc.label(i) != lmc.label(j) && d.at(i, j) != Rational(1)) {
        cert.checked = false;
        cert.violation = {i, j};
        cert.reason =
            absl::StrCat("labels of ", lmc.name(i), " and ", lmc.name(j),
                         " differ but d = ", d.at(i, j).ToString());
        break;
      }
    }
  }
  if (!cert.checked) return cert;
  const DistanceMatrix g =
      GammaApply(alpha, lmc, d, GammaOptions{options.mode, options.threads});
  for (int i = 0; i < n && cert.checked; ++i) {
    for (int j = i; j < n; ++j) {
      if (g.at(i, j) > d.at(i, j)) {
        cert.checked = false;
        cert.violation = {i, j};
        cert.reason = absl::StrCat("K(d)(", lmc.name(i), ", ", lmc.name(j),
                                   ") = ", g.at(i, j).ToString(),
                                   " > d = ", d.at(i, j).ToString());
        break;
      }
    }
  }
  return cert;
}

DistanceMatrix BisimulationTop(const Lmc& lmc) {
  const Partition p = BisimilarityPartition(lmc);
  const int n = lmc.num_states();
  DistanceMatrix d(n, Rational(1));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (p.SameBlock(i, j)) d.set(i, j, Rational(0));
    }
  }
  return d;
}

FixpointEngine::FixpointEngine(Alpha alpha, const Lmc& lmc,
                               EngineOptions options)
    : alpha_(std::move(alpha)),
      lmc_(lmc),
      options_(std::move(options)),
      lower_(lmc.num_states()),
      slack_exponent_(options_.first_slack_exponent) {
  const int n = lmc.num_states();
  upper_ = OnesTop(n);
  if (options_.track_upper_iterate) {
    // The block matrix is pre-fixed by construction; verify it anyway and
    // fall back to the trivial top if something disagrees.
    DistanceMatrix top = BisimulationTop(lmc);
    absl::StatusOr<Certificate> c = CheckCertificate(
        alpha_, lmc, top,
        CertificateOptions{KantorovichMode::kPrimal, options_.gamma.threads});
    if (c.ok() && c->checked) upper_ = std::move(top);
  }
}

Rational FixpointEngine::Step() {
  if (lower_fixed_) return Rational(0);
  ++iterations_;
  const DistanceMatrix g = GammaApply(alpha_, lmc_, lower_, options_.gamma);
  if (g == lower_) {
    lower_fixed_ = true;
    upper_ = lower_;
    last_change_ = Rational(0);
    return last_change_;
  }
  // L <= Gamma(L) holds for every iterate, so taking the max with the old
  // iterate only matters after rounding.
  DistanceMatrix next = PointwiseMax(
      lower_, RoundMatrix(g, options_.precision_bits, /*up=*/false));
  last_change_ = next.MaxDifference(lower_);
  lower_ = std::move(next);
  if (options_.track_upper_iterate) {
    const DistanceMatrix gu = GammaApply(alpha_, lmc_, upper_, options_.gamma);
    upper_ = PointwiseMin(
        upper_, RoundMatrix(gu, options_.precision_bits, /*up=*/true));
  }
  TryRoundedCandidate();
  return last_change_;
}

void FixpointEngine::TryRoundedCandidate() {
  const int n = lower_.size();
  while (slack_exponent_ <= options_.precision_bits) {
    const Rational slack = PowerOfTwo(-slack_exponent_);
    if (last_change_ > slack) return;
    DistanceMatrix candidate(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const Rational& x = lower_.at(i, j);
        candidate.set(i, j,
                      BestRationalInInterval(x, Min(Rational(1), x + slack)));
      }
    }
    last_tried_level_ = slack_exponent_;
    // Same test as CheckCertificate, keeping Gamma(candidate) to see whether
    // the candidate is a fixed point and not merely pre-fixed. Label
    // mismatches are already 1 in every iterate after the first.
    const DistanceMatrix g =
        GammaApply(alpha_, lmc_, candidate, options_.gamma);
    if (g.PointwiseLe(candidate)) {
      ++slack_exponent_;
      upper_ = PointwiseMin(upper_, candidate);
      const bool fixed = g == candidate;
      passed_.push_back({last_tried_level_, std::move(candidate), fixed});
      return;
    }
    // The lower iterate trails the fixed point by more than its last change,
    // so a failure while it still moves is retried at the same level on the
    // next step. Once it has settled well inside the slack, the slack itself
    // is too coarse.
    if (last_change_ * PowerOfTwo(kSettledBits) > slack) return;
    ++slack_exponent_;
  }
}

std::optional<Rational> FixpointEngine::Resolve(StateId s, StateId t,
                                                bool* recovered) const {
  if (recovered != nullptr) *recovered = false;
  if (lower_fixed_ || lower_.at(s, t) == upper_.at(s, t)) {
    return lower_.at(s, t);
  }
  for (std::size_t k = 1; k < passed_.size(); ++k) {
    const PassedCandidate& a = passed_[k - 1];
    const PassedCandidate& b = passed_[k];
    if (b.level != a.level + 1 || !b.fixed_point ||
        a.d.at(s, t) != b.d.at(s, t)) {
      continue;
    }
    const Rational& v = b.d.at(s, t);
    if (BestRationalInInterval(lower_.at(s, t), v) != v) continue;
    if (recovered != nullptr) *recovered = true;
    return v;
  }
  return std::nullopt;
}

bool FixpointEngine::CanContinue() const {
  if (lower_fixed_ || iterations_ >= options_.max_iters) return false;
  if (lower_ == upper_) return false;
  return iterations_ == 0 || last_change_ > options_.stop_gap;
}

KleeneResult KleeneIterate(const Alpha& alpha, const Lmc& lmc,
                           const EngineOptions& options) {
  KleeneResult result;
  result.lower = DistanceMatrix(lmc.num_states());
  while (result.iterations < options.max_iters) {
    ++result.iterations;
    const DistanceMatrix g =
        GammaApply(alpha, lmc, result.lower, options.gamma);
    if (g == result.lower) {
      result.changes.push_back(Rational(0));
      result.converged = true;
      break;
    }
    DistanceMatrix next = PointwiseMax(
        result.lower, RoundMatrix(g, options.precision_bits, /*up=*/false));
    Rational change = next.MaxDifference(result.lower);
    result.lower = std::move(next);
    const bool small = change <= options.stop_gap;
    result.changes.push_back(std::move(change));
    if (small) break;
  }
  return result;
}

std::string ResolutionName(Resolution r) {
  switch (r) {
    case Resolution::kExact:
      return "exact";
    case Resolution::kRecovered:
      return "recovered";
    case Resolution::kBoundsOnly:
      return "bounds-only";
  }
  return "?";
}

std::string AnswerName(Answer a) {
  switch (a) {
    case Answer::kYes:
      return "yes";
    case Answer::kNo:
      return "no";
    case Answer::kUnknown:
      return "unknown";
  }
  return "?";
}

namespace {

ExactResult ResolveNow(const FixpointEngine& engine, StateId s, StateId t) {
  ExactResult result;
  bool recovered = false;
  result.value = engine.Resolve(s, t, &recovered);
  if (result.value.has_value()) {
    result.resolution = recovered ? Resolution::kRecovered : Resolution::kExact;
  }
  result.bounds = engine.bounds();
  return result;
}

}  // namespace

ExactResult ExactValue(const Alpha& alpha, const Lmc& lmc, StateId s, StateId t,
                       const EngineOptions& options) {
  FixpointEngine engine(alpha, lmc, options);
  while (!engine.Resolve(s, t).has_value() && engine.CanContinue()) {
    engine.Step();
  }
  return ResolveNow(engine, s, t);
}

absl::StatusOr<ThresholdResult> Threshold(const Alpha& alpha, const Lmc& lmc,
                                          StateId s, StateId t,
                                          const Rational& theta,
                                          const EngineOptions& options) {
  if (absl::Status st = CheckPair(lmc, s, t); !st.ok()) return st;
  if (theta.sign() < 0 || theta > Rational(1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("theta must lie in [0, 1], got ", theta.ToString()));
  }
  FixpointEngine engine(alpha, lmc, options);
  ThresholdResult result;
  while (true) {
    if (engine.upper().at(s, t) <= theta) {
      absl::StatusOr<Certificate> c = CheckCertificate(
          alpha, lmc, engine.upper(),
          CertificateOptions{options.gamma.mode, options.gamma.threads});
      if (!c.ok()) return c.status();
      if (c->checked) {
        result.answer = Answer::kYes;
        result.certificate = *std::move(c);
        break;
      }
    }
    if (engine.lower().at(s, t) > theta) {
      result.answer = Answer::kNo;
      result.iterate = engine.lower();
      result.iterate_index = engine.iterations();
      break;
    }
    if (!engine.CanContinue()) break;
    engine.Step();
  }
  result.bounds = engine.bounds();
  return result;
}

absl::StatusOr<DeltaBoundResult> DeltaBoundForAlpha(
    const Alpha& alpha, const Lmc& lmc,
    const std::vector<std::pair<StateId, StateId>>& pairs,
    const EngineOptions& options) {
  if (pairs.empty()) return absl::InvalidArgumentError("no state pairs given");
  for (const auto& [s, t] : pairs) {
    if (absl::Status st = CheckPair(lmc, s, t); !st.ok()) return st;
  }
  FixpointEngine engine(alpha, lmc, options);
  auto all_resolved = [&] {
    for (const auto& [s, t] : pairs) {
      if (!engine.Resolve(s, t).has_value()) return false;
    }
    return true;
  };
  while (!all_resolved() && engine.CanContinue()) engine.Step();
  DeltaBoundResult result{alpha, 0, {}, Rational(0)};
  for (const auto& [s, t] : pairs) {
    ExactResult r = ResolveNow(engine, s, t);
    Rational delta = r.value.value_or(r.bounds.upper.at(s, t));
    result.max_delta = Max(result.max_delta, delta);
    result.pairs.push_back(PairDelta{s, t, std::move(delta), r.resolution,
                                     r.bounds.lower.at(s, t)});
  }
  return result;
}

absl::StatusOr<DeltaBoundResult> DeltaBound(
    const Lmc& lmc, const Rational& epsilon,
    const std::vector<std::pair<StateId, StateId>>& pairs,
    const EngineOptions& options, int exp_terms) {
  if (epsilon.sign() < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be >= 0, got ", epsilon.ToString()));
  }
  const int terms = exp_terms > 0 ? exp_terms : DefaultExpTerms(epsilon);
  absl::StatusOr<DeltaBoundResult> r = DeltaBoundForAlpha(
      Alpha::Of(TaylorLowerBoundExp(epsilon, terms)), lmc, pairs, options);
  if (r.ok()) r->exp_terms = terms;
  return r;
}

std::string FormatCertificate(const Lmc& lmc, const Alpha& alpha,
                              const DistanceMatrix& d) {
  std::ostringstream out;
  out << "lmc-cert v1\n";
  out << "alpha " << alpha.value() << "\n";
  for (int i = 0; i < d.size(); ++i) {
    for (int j = i; j < d.size(); ++j) {
      out << "d " << lmc.name(i) << " " << lmc.name(j) << " " << d.at(i, j)
          << "\n";
    }
  }
  return out.str();
}

absl::StatusOr<std::pair<Alpha, DistanceMatrix>> ParseCertificate(
    const Lmc& lmc, absl::string_view text) {
  const int n = lmc.num_states();
  DistanceMatrix d(n);
  std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
  std::optional<Alpha> alpha;
  bool header = false;
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
    auto fail = [&](absl::string_view msg) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", msg));
    };
    if (!header) {
      if (tok.size() != 2 || tok[0] != "lmc-cert" || tok[1] != "v1") {
        return fail("expected header 'lmc-cert v1'");
      }
      header = true;
      continue;
    }
    if (tok[0] == "alpha") {
      if (tok.size() != 2) return fail("expected 'alpha RAT'");
      if (alpha.has_value()) return fail("duplicate alpha");
      absl::StatusOr<Rational> v = ParseRational(tok[1]);
      if (!v.ok()) return fail(v.status().message());
      absl::StatusOr<Alpha> a = Alpha::Create(*v);
      if (!a.ok()) return fail(a.status().message());
      alpha = *a;
    } else if (tok[0] == "d") {
      if (tok.size() != 4) return fail("expected 'd STATE STATE RAT'");
      std::optional<StateId> s = lmc.FindState(tok[1]);
      std::optional<StateId> t = lmc.FindState(tok[2]);
      if (!s.has_value() || !t.has_value()) {
        return fail(absl::StrCat("unknown state in '", line, "'"));
      }
      absl::StatusOr<Rational> v = ParseRational(tok[3]);
      if (!v.ok()) return fail(v.status().message());
      const std::size_t key = static_cast<std::size_t>(*s) * n + *t;
      const std::size_t rkey = static_cast<std::size_t>(*t) * n + *s;
      if (seen[key]) return fail("duplicate entry");
      seen[key] = seen[rkey] = true;
      d.set(*s, *t, *v);
    } else {
      return fail(absl::StrCat("unknown directive '", tok[0], "'"));
    }
  }
  if (!header) return absl::InvalidArgumentError("empty certificate");
  if (!alpha.has_value()) return absl::InvalidArgumentError("missing alpha");
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (!seen[static_cast<std::size_t>(i) * n + j]) {
        return absl::InvalidArgumentError(absl::StrCat(
            "missing entry for (", lmc.name(i), ", ", lmc.name(j), ")"));
      }
    }
  }
  return std::make_pair(*alpha, std::move(d));
}

}  // namespace privdist
