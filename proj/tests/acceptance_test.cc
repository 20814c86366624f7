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

// End-to-end checks of the library against its acceptance criteria. Prints
// one PASS or FAIL line per criterion and exits nonzero on any failure.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "privdist/fixpoint.h"
#include "privdist/formula_export.h"
#include "privdist/lmc.h"
#include "privdist/model_gen.h"
#include "privdist/rational.h"
#include "privdist/sexpr.h"
#include "privdist/skew_kantorovich.h"
#include "privdist/tv_oracle.h"

namespace privdist {
namespace {

// Collects the first few failure messages of one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) notes_.push_back(what);
  }
  bool ok() const { return failures_ == 0; }
  std::string Summary() const {
    std::ostringstream out;
    out << failures_ << " failure(s)";
    for (const std::string& n : notes_) out << "; " << n;
    return out.str();
  }
  void Note(const std::string& detail) { detail_ = detail; }
  const std::string& detail() const { return detail_; }

 private:
  int failures_ = 0;
  std::vector<std::string> notes_;
  std::string detail_;
};

std::string Str(const Rational& r) { return r.ToString(); }

std::string PairName(const Lmc& lmc, StateId s, StateId t) {
  return "(" + lmc.name(s) + "," + lmc.name(t) + ")";
}

Lmc SwappedOdds() {
  absl::StatusOr<Lmc> lmc = LoadLmcFile(PRIVDIST_DATA_DIR "/swapped_odds.lmc");
  if (!lmc.ok()) {
    std::cerr << lmc.status() << "\n";
    std::abort();
  }
  return *std::move(lmc);
}

const Rational kAlphas[] = {Rational(1), Rational(11, 10), Rational(3, 2),
                            Rational(2)};

void Criterion1(Check& c) {
  const Lmc lmc = SwappedOdds();
  c.Expect(lmc.num_states() == 4,
           "the swapped-odds chain should have 4 states");
  const Partition p = BisimilarityPartition(lmc);
  c.Expect(!p.SameBlock(0, 1), "s0 and s1 must not be bisimilar");
  const Alpha a = Alpha::Of(Rational(3, 2));
  const ExactResult r = ExactValue(a, lmc, 0, 1);
  c.Expect(r.resolution == Resolution::kExact && r.value == Rational(0),
           "bd_{3/2}(s0,s1) should be exactly 0");
  for (int h = 0; h <= 6; ++h) {
    absl::StatusOr<TvResult> tv = TvLowerBound(a, lmc, 0, 1, h);
    c.Expect(tv.ok() && tv->value.is_zero(),
             "tv at h=" + std::to_string(h) + " should be 0");
  }
  c.Expect(ExactValue(a, lmc, 0, 2).value == Rational(1), "bd(s0,s2) != 1");
  c.Expect(ExactValue(a, lmc, 2, 3).value == Rational(1), "bd(s2,s3) != 1");
}

void Criterion2(Check& c) {
  const DiningChain chain = *GenerateDining({.n = 2, .p = Rational(49, 100)});
  const Alpha a = Alpha::Of(Rational(10002, 10000));
  const StateId s = chain.start_states[0], t = chain.start_states[1];
  const ExactResult r = ExactValue(a, chain.lmc, s, t);
  c.Expect(r.value == Rational(1, 2500),
           "bd(start0,start1) = " +
               (r.value ? Str(*r.value) : std::string("unresolved")));
  const TvResult tv = *TvLowerBound(a, chain.lmc, s, t, DiningHorizon(2));
  c.Expect(tv.value == Rational(7501, 25000000),
           "tv lower bound = " + Str(tv.value));
  c.Expect(r.value && tv.value <= *r.value, "tv must not exceed bd");
  c.Note("bd = " + (r.value ? Str(*r.value) : "?") + " [" +
         ResolutionName(r.resolution) + "], tv = " + Str(tv.value));
}

std::vector<Rational> RandomDistribution(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(0, 5);
  std::vector<std::int64_t> weights(n);
  std::int64_t total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : weights) total += (x = w(rng));
  }
  std::vector<Rational> mu;
  for (std::int64_t x : weights) mu.emplace_back(x, total);
  return mu;
}

void Criterion3(Check& c) {
  std::mt19937_64 rng(2026);
  int instances = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const Lmc lmc = testing::RandomCorpus(n, 1, 10'000 + 100 * n + trial)[0];
      const DistanceMatrix d = testing::RandomDistance(lmc, rng());
      const Alpha a = Alpha::Of(kAlphas[trial % 4]);
      // Half the instances use the chain's own successor pairs.
      std::vector<Rational> mu, nu;
      if (trial % 2 == 0) {
        mu = lmc.Distribution(trial % n);
        nu = lmc.Distribution((trial / 2 + 1) % n);
      } else {
        mu = RandomDistribution(n, rng);
        nu = RandomDistribution(n, rng);
      }
      const auto p = KantorovichPrimal(a, d, mu, nu);
      const auto q = KantorovichDual(a, d, mu, nu);
      c.Expect(p.ok() && q.ok() && p->value == q->value,
               "primal != dual at n=" + std::to_string(n) + " trial " +
                   std::to_string(trial));
      ++instances;
    }
  }
  c.Expect(instances >= 200, "too few instances");
  c.Note(std::to_string(instances) + " instances");
}

void Criterion4(Check& c) {
  int steps = 0, pairs = 0;
  for (const Lmc& lmc : testing::RandomCorpus(4, 12, 20'000)) {
    for (const Rational& av : {Rational(1), Rational(3, 2)}) {
      const Alpha a = Alpha::Of(av);
      FixpointEngine engine(a, lmc);
      auto check_state = [&] {
        const DistanceMatrix& lo = engine.lower();
        const DistanceMatrix& up = engine.upper();
        c.Expect(lo.PointwiseLe(GammaApply(a, lmc, lo)),
                 "L not below Gamma(L)");
        c.Expect(GammaApply(a, lmc, up).PointwiseLe(up),
                 "Gamma(U) not below U");
        c.Expect(lo.PointwiseLe(up), "L not below U");
        ++steps;
      };
      check_state();
      while (engine.CanContinue()) {
        engine.Step();
        check_state();
      }
      for (StateId s = 0; s < lmc.num_states(); ++s) {
        for (StateId t = s + 1; t < lmc.num_states(); ++t) {
          for (int h = 0; h <= 4; ++h) {
            const TvResult tv = *TvLowerBound(a, lmc, s, t, h);
            c.Expect(tv.value <= engine.upper().at(s, t),
                     "tv above U at " + PairName(lmc, s, t));
          }
          ++pairs;
        }
      }
    }
  }
  c.Note(std::to_string(steps) + " iterates, " + std::to_string(pairs) +
         " pairs");
}

void Criterion5(Check& c) {
  int zeros = 0, pairs = 0;
  for (const Lmc& lmc : testing::RandomCorpus(4, 25, 30'000)) {
    const Partition p = BisimilarityPartition(lmc);
    for (StateId s = 0; s < lmc.num_states(); ++s) {
      for (StateId t = s + 1; t < lmc.num_states(); ++t) {
        const ExactResult r = ExactValue(Alpha::Of(Rational(1)), lmc, s, t);
        const bool zero = r.value.has_value() && r.value->is_zero();
        c.Expect(zero == p.SameBlock(s, t),
                 "kernel mismatch at " + PairName(lmc, s, t));
        zeros += zero;
        ++pairs;
      }
    }
  }
  const DiningChain fair = *GenerateDining({.n = 2, .p = Rational(1, 2)});
  const StateId s = fair.start_states[0], t = fair.start_states[1];
  c.Expect(BisimilarityPartition(fair.lmc).SameBlock(s, t),
           "fair-coin start states should be bisimilar");
  for (const Rational& av : {Rational(1), Rational(3, 2), Rational(2)}) {
    const ExactResult r = ExactValue(Alpha::Of(av), fair.lmc, s, t);
    c.Expect(r.value == Rational(0), "fair dining bd != 0 at alpha " + Str(av));
  }
  c.Note(std::to_string(pairs) + " pairs, " + std::to_string(zeros) +
         " at distance 0");
}

void Criterion6(Check& c) {
  int resolved = 0;
  for (const Lmc& lmc : testing::RandomCorpus(4, 30, 40'000)) {
    const int n = lmc.num_states();
    std::vector<FixpointEngine> engines;
    for (const Rational& av : kAlphas) {
      engines.emplace_back(Alpha::Of(av), lmc);
      FixpointEngine& e = engines.back();
      auto all = [&] {
        for (StateId s = 0; s < n; ++s) {
          for (StateId t = s + 1; t < n; ++t) {
            if (!e.Resolve(s, t)) return false;
          }
        }
        return true;
      };
      while (!all() && e.CanContinue()) e.Step();
    }
    for (StateId s = 0; s < n; ++s) {
      for (StateId t = s + 1; t < n; ++t) {
        if (lmc.label(s) != lmc.label(t)) continue;
        std::vector<Rational> values;
        for (const FixpointEngine& e : engines) {
          if (auto v = e.Resolve(s, t)) values.push_back(*v);
        }
        if (values.size() != engines.size()) continue;
        ++resolved;
        for (std::size_t k = 1; k < values.size(); ++k) {
          c.Expect(values[k] <= values[k - 1],
                   "bd increases with alpha at " + PairName(lmc, s, t));
        }
      }
    }
  }
  c.Expect(resolved >= 50, "only " + std::to_string(resolved) + " pairs");
  c.Note(std::to_string(resolved) +
         " label-matching pairs resolved at 4 alphas");
}

void Criterion7(Check& c) {
  std::mt19937_64 rng(77);
  int lp_checks = 0, tv_checks = 0;
  for (int n = 1; n <= 3; ++n) {
    for (const Lmc& lmc : testing::RandomCorpus(n, 15, 50'000 + 100 * n)) {
      for (const Rational& av : kAlphas) {
        const Alpha a = Alpha::Of(av);
        const DistanceMatrix d = testing::RandomDistance(lmc, rng());
        for (StateId s = 0; s < n; ++s) {
          for (StateId t = 0; t < n; ++t) {
            const auto mu = lmc.Distribution(s), nu = lmc.Distribution(t);
            c.Expect(KantorovichPrimal(a, d, mu, nu)->value ==
                         testing::VertexEnumerationKantorovich(a, d, mu, nu),
                     "primal != vertex enumeration");
            ++lp_checks;
            for (int h = 1; h <= 4; ++h) {
              const auto p = ComputeHorizonDistribution(lmc, s, h)->mass;
              const auto q = ComputeHorizonDistribution(lmc, t, h)->mass;
              std::set<Trace> joint;
              for (const auto& [u, m] : p) joint.insert(u);
              for (const auto& [u, m] : q) joint.insert(u);
              if (joint.size() > 12) continue;
              c.Expect(TvLowerBound(a, lmc, s, t, h)->value ==
                           testing::SubsetSearchTv(a, p, q),
                       "tv event not optimal");
              ++tv_checks;
            }
          }
        }
      }
    }
  }
  c.Note(std::to_string(lp_checks) + " LP values, " +
         std::to_string(tv_checks) + " tv events");
}

// Least fixed points certified by the engine: every pair exact.
std::vector<std::pair<Lmc, Alpha>> CertifiedInstances(
    std::vector<DistanceMatrix>* out) {
  std::vector<std::pair<Lmc, Alpha>> instances;
  std::vector<Lmc> chains = testing::RandomCorpus(4, 15, 60'000);
  chains.push_back(SwappedOdds());
  for (const Lmc& lmc : chains) {
    for (const Rational& av : {Rational(1), Rational(3, 2)}) {
      const Alpha a = Alpha::Of(av);
      FixpointEngine e(a, lmc);
      while (e.CanContinue()) e.Step();
      if (!(e.lower() == e.upper()) && !e.lower_is_fixed_point()) continue;
      instances.emplace_back(lmc, a);
      out->push_back(e.lower());
    }
  }
  return instances;
}

void Criterion8(Check& c) {
  std::vector<DistanceMatrix> fixed;
  const auto instances = CertifiedInstances(&fixed);
  int lowered = 0;
  std::mt19937_64 rng(8);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const Lmc& lmc = instances[k].first;
    const Alpha& a = instances[k].second;
    const DistanceMatrix& d = fixed[k];
    const int n = lmc.num_states();
    c.Expect(CheckCertificate(a, lmc, d)->checked, "fixed point rejected");
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        if (d.at(i, j).sign() <= 0) continue;
        DistanceMatrix low = d;
        low.set(i, j, d.at(i, j) * Rational(9, 10));
        c.Expect(!CheckCertificate(a, lmc, low)->checked,
                 "lowered entry still passes at " + PairName(lmc, i, j));
        ++lowered;
      }
    }
    DistanceMatrix top(n, Rational(1));
    DistanceMatrix top_diag(n, Rational(1));
    std::uniform_int_distribution<int> pick(0, 4);
    for (int i = 0; i < n; ++i) {
      top.set(i, i, Rational(0));
      top_diag.set(i, i, Rational(pick(rng), 4));
    }
    c.Expect(CheckCertificate(a, lmc, top)->checked, "all-ones rejected");
    c.Expect(CheckCertificate(a, lmc, top_diag)->checked,
             "all-ones with positive diagonal rejected");
  }
  c.Expect(lowered > 0, "no positive entries to lower");
  c.Note(std::to_string(instances.size()) + " certificates, " +
         std::to_string(lowered) + " lowered entries");
}

void Criterion9(Check& c) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::int64_t> den(1, 1000);
  const Rational half_width(1, 20'000'000);
  for (int k = 0; k < 100; ++k) {
    const std::int64_t q = den(rng);
    std::uniform_int_distribution<std::int64_t> num(-3 * q, 3 * q);
    const Rational r(num(rng), q);
    const Rational got = BestRationalInInterval(r - half_width, r + half_width);
    c.Expect(got == r, Str(r) + " recovered as " + Str(got));
  }
}

void Criterion10(Check& c) {
  const Lmc lmc = SwappedOdds();
  const Alpha a = Alpha::Of(Rational(3, 2));
  const std::string lfp = ExportLfpFormula(a, lmc);
  const absl::StatusOr<std::string> thr =
      ExportThresholdFormula(a, lmc, 0, 1, Rational(0));
  c.Expect(ParseSExprs(lfp).ok(), "least fixed point script does not parse");
  c.Expect(thr.ok() && ParseSExprs(*thr).ok(),
           "threshold script does not parse");
  // The known fixed point: 0 on the diagonal and on (s0, s1), 1 elsewhere.
  const std::string model = R"((model
  (define-fun d_0_0 () Real 0.0) (define-fun d_0_1 () Real 0.0)
  (define-fun d_0_2 () Real 1.0) (define-fun d_0_3 () Real 1.0)
  (define-fun d_1_0 () Real 0.0) (define-fun d_1_1 () Real 0.0)
  (define-fun d_1_2 () Real 1.0) (define-fun d_1_3 () Real 1.0)
  (define-fun d_2_0 () Real 1.0) (define-fun d_2_1 () Real 1.0)
  (define-fun d_2_2 () Real 0.0) (define-fun d_2_3 () Real 1.0)
  (define-fun d_3_0 () Real 1.0) (define-fun d_3_1 () Real 1.0)
  (define-fun d_3_2 () Real 1.0) (define-fun d_3_3 () Real 0.0)
))";
  const absl::StatusOr<Certificate> cert = ValidateModel(lmc, a, model);
  c.Expect(cert.ok() && cert->checked, "hand model rejected");
}

}  // namespace
}  // namespace privdist

// With no argument every criterion runs; "N" runs criterion N alone.
int main(int argc, char** argv) {
  using privdist::Check;
  const std::vector<std::pair<std::string, std::function<void(Check&)>>>
      criteria = {
          {"swapped-odds golden values", privdist::Criterion1},
          {"dining cryptographers golden values", privdist::Criterion2},
          {"primal and dual values agree", privdist::Criterion3},
          {"soundness sandwich", privdist::Criterion4},
          {"bisimilarity kernel at alpha 1", privdist::Criterion5},
          {"anti-monotonicity in alpha", privdist::Criterion6},
          {"brute-force equivalence on small chains", privdist::Criterion7},
          {"certificate falsification", privdist::Criterion8},
          {"continued-fraction recovery", privdist::Criterion9},
          {"formula export round trip", privdist::Criterion10},
  };
  std::size_t only = 0;
  if (argc > 1) {
    only = std::strtoul(argv[1], nullptr, 10);
    if (only < 1 || only > criteria.size()) {
      std::cerr << "usage: acceptance_test [1-" << criteria.size() << "]\n";
      return 2;
    }
  }
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && k + 1 != only) continue;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    criteria[k].second(check);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (check.ok() ? "PASS" : "FAIL") << " criterion " << k + 1
              << ": " << criteria[k].first;
    if (!check.detail().empty()) std::cout << " [" << check.detail() << "]";
    if (!check.ok()) std::cout << " -- " << check.Summary();
    std::cout << " (" << static_cast<int>(seconds * 10) / 10.0 << "s)"
              << std::endl;
    failed += !check.ok();
  }
  return failed == 0 ? 0 : 1;
}
