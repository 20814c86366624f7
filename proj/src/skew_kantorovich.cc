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

#include "privdist/skew_kantorovich.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace privdist {

absl::StatusOr<Alpha> Alpha::Create(Rational value) {
  if (value < Rational(1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be >= 1, got ", value.ToString()));
  }
  return Alpha(std::move(value));
}

Alpha Alpha::Of(const Rational& value) {
  absl::StatusOr<Alpha> a = Create(value);
  if (!a.ok()) {
    std::fprintf(stderr, "privdist: %s\n",
                 std::string(a.status().message()).c_str());
    std::abort();
  }
  return *a;
}

DistanceMatrix::DistanceMatrix(int n, const Rational& fill)
    : n_(n), entries_(static_cast<std::size_t>(n) * n, fill) {}

void DistanceMatrix::set(int i, int j, const Rational& v) {
  entries_[static_cast<std::size_t>(i) * n_ + j] = v;
  entries_[static_cast<std::size_t>(j) * n_ + i] = v;
}

absl::Status DistanceMatrix::Validate() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const Rational& v = at(i, j);
      if (v.sign() < 0 || Rational(1) < v) {
        return absl::OutOfRangeError(absl::StrCat("distance entry (", i, ", ",
                                                  j, ") = ", v.ToString(),
                                                  " outside [0, 1]"));
      }
      if (v != at(j, i)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "distance matrix not symmetric at (", i, ", ", j, ")"));
      }
    }
  }
  return absl::OkStatus();
}

bool DistanceMatrix::PointwiseLe(const DistanceMatrix& other) const {
  if (n_ != other.n_) return false;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (other.entries_[k] < entries_[k]) return false;
  }
  return true;
}

Rational DistanceMatrix::MaxDifference(const DistanceMatrix& other) const {
  Rational worst;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    worst = Max(worst, (entries_[k] - other.entries_[k]).abs());
  }
  return worst;
}

Rational DeltaAlpha(const Alpha& alpha, const Rational& x, const Rational& y) {
  const Rational& a = alpha.value();
  return Max(Max(x - a * y, y - a * x), Rational(0));
}

absl::Status CheckKantorovichArgs(const DistanceMatrix& d,
                                  const std::vector<Rational>& mu,
                                  const std::vector<Rational>& mu_prime) {
  const auto n = static_cast<std::size_t>(d.size());
  if (mu.size() != n || mu_prime.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("distribution sizes ", mu.size(), "/", mu_prime.size(),
                     " do not match the ", n, "x", n, " distance matrix"));
  }
  return absl::OkStatus();
}

LinearProgram BuildPrimalLp(const Alpha& alpha, const DistanceMatrix& d,
                            const std::vector<Rational>& mu,
                            const std::vector<Rational>& mu_prime,
                            bool prune_implied_rows) {
  const int n = d.size();
  const Rational& a = alpha.value();
  LinearProgram lp(n);
  for (int i = 0; i < n; ++i) {
    lp.set_objective(i, mu[i] - a * mu_prime[i]);
    lp.set_bounds(i, Rational(0), Rational(1));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (prune_implied_rows && (i == j || !(d.at(i, j) < Rational(1)))) {
        continue;
      }
      LpRow row;
      if (i == j) {
        row.coefficients = {{i, Rational(1) - a}};
      } else {
        row.coefficients = {{i, Rational(1)}, {j, -a}};
      }
      row.relation = Relation::kLessEqual;
      row.rhs = d.at(i, j);
      lp.AddRow(std::move(row));
    }
  }
  return lp;
}

absl::StatusOr<PrimalResult> KantorovichPrimal(
    const Alpha& alpha, const DistanceMatrix& d,
    const std::vector<Rational>& mu, const std::vector<Rational>& mu_prime,
    const KantorovichOptions& options) {
  if (absl::Status s = CheckKantorovichArgs(d, mu, mu_prime); !s.ok()) return s;
  PrimalResult result;
  for (bool swapped : {false, true}) {
    const LinearProgram lp =
        swapped
            ? BuildPrimalLp(alpha, d, mu_prime, mu, options.prune_implied_rows)
            : BuildPrimalLp(alpha, d, mu, mu_prime, options.prune_implied_rows);
    LpOutcome outcome = SolveLp(lp, options.lp);
    if (outcome.status != LpStatus::kOptimal) {
      // f = 0 is always feasible and the objective is bounded on [0, 1]^n.
      return absl::InternalError(
          absl::StrCat("primal Kantorovich program reported ",
                       LpStatusName(outcome.status)));
    }
    if (!swapped || result.value < outcome.value) {
      result.value = outcome.value;
      result.f = std::move(outcome.solution);
      result.swapped = swapped;
    }
  }
  return result;
}

Rational DualWitness::Cost(const DistanceMatrix& d) const {
  Rational cost;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    for (std::size_t j = 0; j < omega[i].size(); ++j) {
      if (!omega[i][j].is_zero()) {
        cost += omega[i][j] * d.at(static_cast<int>(i), static_cast<int>(j));
      }
    }
    cost += eta[i];
  }
  return cost;
}

bool DualWitness::Satisfies(const Alpha& alpha, const std::vector<Rational>& mu,
                            const std::vector<Rational>& mu_prime) const {
  const std::size_t n = mu.size();
  auto in_unit = [](const Rational& v) {
    return v.sign() >= 0 && !(Rational(1) < v);
  };
  if (omega.size() != n || tau.size() != n || gamma.size() != n ||
      eta.size() != n) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (omega[i].size() != n) return false;
    if (!in_unit(tau[i]) || !in_unit(gamma[i]) || !in_unit(eta[i]))
      return false;
    Rational row_sum = tau[i] - gamma[i] + eta[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_unit(omega[i][j])) return false;
      row_sum += omega[i][j];
    }
    if (row_sum != mu[i]) return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rational col_sum = (tau[j] - gamma[j]) / alpha.value();
    for (std::size_t i = 0; i < n; ++i) col_sum += omega[i][j];
    if (mu_prime[j] < col_sum) return false;
  }
  return true;
}

LinearProgram BuildDualLp(const Alpha& alpha, const DistanceMatrix& d,
                          const std::vector<Rational>& mu,
                          const std::vector<Rational>& mu_prime) {
  const int n = d.size();
  const int tau0 = n * n, gamma0 = tau0 + n, eta0 = gamma0 + n;
  LinearProgram lp(eta0 + n);
  for (int v = 0; v < lp.num_vars(); ++v) {
    lp.set_bounds(v, Rational(0), Rational(1));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lp.set_objective(i * n + j, -d.at(i, j));
    lp.set_objective(eta0 + i, Rational(-1));
  }
  const Rational inv_alpha = Rational(1) / alpha.value();
  for (int i = 0; i < n; ++i) {
    LpRow row;
    for (int j = 0; j < n; ++j)
      row.coefficients.push_back({i * n + j, Rational(1)});
    row.coefficients.push_back({tau0 + i, Rational(1)});
    row.coefficients.push_back({gamma0 + i, Rational(-1)});
    row.coefficients.push_back({eta0 + i, Rational(1)});
    row.relation = Relation::kEqual;
    row.rhs = mu[i];
    lp.AddRow(std::move(row));
  }
  for (int j = 0; j < n; ++j) {
    LpRow row;
    for (int i = 0; i < n; ++i)
      row.coefficients.push_back({i * n + j, Rational(1)});
    row.coefficients.push_back({tau0 + j, inv_alpha});
    row.coefficients.push_back({gamma0 + j, -inv_alpha});
    row.relation = Relation::kLessEqual;
    row.rhs = mu_prime[j];
    lp.AddRow(std::move(row));
  }
  return lp;
}

namespace {

DualWitness WitnessFromSolution(int n, const std::vector<Rational>& x) {
  const int tau0 = n * n, gamma0 = tau0 + n, eta0 = gamma0 + n;
  DualWitness w;
  w.omega.assign(static_cast<std::size_t>(n), std::vector<Rational>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w.omega[i][j] = x[i * n + j];
    w.tau.push_back(x[tau0 + i]);
    w.gamma.push_back(x[gamma0 + i]);
    w.eta.push_back(x[eta0 + i]);
  }
  return w;
}

}  // namespace

absl::StatusOr<DualResult> KantorovichDual(
    const Alpha& alpha, const DistanceMatrix& d,
    const std::vector<Rational>& mu, const std::vector<Rational>& mu_prime,
    const KantorovichOptions& options) {
  if (absl::Status s = CheckKantorovichArgs(d, mu, mu_prime); !s.ok()) return s;
  DualResult result;
  for (bool backward : {false, true}) {
    const LinearProgram lp = backward ? BuildDualLp(alpha, d, mu_prime, mu)
                                      : BuildDualLp(alpha, d, mu, mu_prime);
    LpOutcome outcome = SolveLp(lp, options.lp);
    if (outcome.status != LpStatus::kOptimal) {
      return absl::InternalError(absl::StrCat(
          "dual Kantorovich program reported ", LpStatusName(outcome.status)));
    }
    DualWitness w = WitnessFromSolution(d.size(), outcome.solution);
    const Rational minimum = -outcome.value;
    if (backward) {
      result.backward_value = minimum;
      result.backward = std::move(w);
    } else {
      result.forward_value = minimum;
      result.forward = std::move(w);
    }
  }
  result.value = Max(result.forward_value, result.backward_value);
  return result;
}

std::string KantorovichModeName(KantorovichMode mode) {
  return mode == KantorovichMode::kPrimal ? "primal" : "dual";
}

void ParallelFor(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) {
    threads =
        static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> workers;
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
}

namespace {

// Both programs are feasible and bounded for valid inputs, so a failure here
// is a bug rather than a data error.
[[noreturn]] void Die(const absl::Status& status) {
  std::fprintf(stderr, "privdist: Kantorovich program failed: %s\n",
               status.ToString().c_str());
  std::abort();
}

}  // namespace

DistanceMatrix GammaApply(const Alpha& alpha, const Lmc& lmc,
                          const DistanceMatrix& d,
                          const GammaOptions& options) {
  const int n = lmc.num_states();
  std::vector<std::vector<Rational>> dists;
  for (StateId s = 0; s < n; ++s) dists.push_back(lmc.Distribution(s));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<Rational> values(pairs.size());
  ParallelFor(static_cast<int>(pairs.size()), options.threads, [&](int k) {
    const auto [i, j] = pairs[k];
    if (lmc.label(i) != lmc.label(j)) {
      values[k] = Rational(1);
      return;
    }
    // Identical successor distributions: every objective coefficient is
    // mu(i)(1 - alpha) <= 0, so f = 0 is optimal.
    if (dists[i] == dists[j]) return;
    if (options.mode == KantorovichMode::kPrimal) {
      absl::StatusOr<PrimalResult> r =
          KantorovichPrimal(alpha, d, dists[i], dists[j]);
      if (!r.ok()) Die(r.status());
      values[k] = r->value;
    } else {
      absl::StatusOr<DualResult> r =
          KantorovichDual(alpha, d, dists[i], dists[j]);
      if (!r.ok()) Die(r.status());
      values[k] = r->value;
    }
  });
  DistanceMatrix out(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.set(pairs[k].first, pairs[k].second, values[k]);
  }
  return out;
}

}  // namespace privdist
