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

#ifndef PRIVDIST_SKEW_KANTOROVICH_H_
#define PRIVDIST_SKEW_KANTOROVICH_H_

#include <functional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privdist/lmc.h"
#include "privdist/lp_solver.h"
#include "privdist/rational.h"

namespace privdist {

// The skew factor alpha >= 1 (alpha = e^epsilon for epsilon,delta privacy).
class Alpha {
 public:
  static absl::StatusOr<Alpha> Create(Rational value);
  // Aborts when value < 1; for literals known to be valid.
  static Alpha Of(const Rational& value);

  const Rational& value() const { return value_; }

 private:
  explicit Alpha(Rational value) : value_(std::move(value)) {}
  Rational value_;
};

// Symmetric n x n matrix of rationals in [0, 1], compared pointwise.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n, const Rational& fill = Rational(0));

  int size() const { return n_; }
  const Rational& at(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * n_ + j];
  }
  // Writes both (i, j) and (j, i).
  void set(int i, int j, const Rational& v);

  // Symmetric with entries in [0, 1].
  absl::Status Validate() const;

  // Pointwise order: every entry of *this <= the matching entry of other.
  bool PointwiseLe(const DistanceMatrix& other) const;
  // Largest |this(i,j) - other(i,j)|.
  Rational MaxDifference(const DistanceMatrix& other) const;

  friend bool operator==(const DistanceMatrix& a,
                         const DistanceMatrix& b) = default;

 private:
  int n_ = 0;
  std::vector<Rational> entries_;
};

// max{x - alpha y, y - alpha x, 0}.
Rational DeltaAlpha(const Alpha& alpha, const Rational& x, const Rational& y);

struct KantorovichOptions {
  // Drop primal rows f_i - alpha f_j <= d_ij already implied by the [0, 1]
  // bounds (d_ij >= 1, or i == j). The feasible set is unchanged.
  bool prune_implied_rows = true;
  LpOptions lp;
};

struct PrimalResult {
  Rational value;
  std::vector<Rational> f;  // a maximizing function
  bool swapped = false;     // the maximum came from the (mu', mu) program
};

// Sizes: d is n x n and both distributions have n entries.
absl::Status CheckKantorovichArgs(const DistanceMatrix& d,
                                  const std::vector<Rational>& mu,
                                  const std::vector<Rational>& mu_prime);

// The single primal program
//   max sum_i f_i (mu(i) - alpha mu'(i))
//   s.t. f_i - alpha f_j <= d_ij for all i, j; f in [0, 1]^n.
LinearProgram BuildPrimalLp(const Alpha& alpha, const DistanceMatrix& d,
                            const std::vector<Rational>& mu,
                            const std::vector<Rational>& mu_prime,
                            bool prune_implied_rows);

// K_alpha(d)(mu, mu') as the maximum of the primal program and its swap.
absl::StatusOr<PrimalResult> KantorovichPrimal(
    const Alpha& alpha, const DistanceMatrix& d,
    const std::vector<Rational>& mu, const std::vector<Rational>& mu_prime,
    const KantorovichOptions& options = {});

// Transport-style witness for one minimization program: omega couples
// successors, tau/gamma are the growing/shrinking self routes, eta is mass
// bought at cost 1.
struct DualWitness {
  std::vector<std::vector<Rational>> omega;
  std::vector<Rational> tau;
  std::vector<Rational> gamma;
  std::vector<Rational> eta;

  // sum_ij omega_ij d_ij + sum_i eta_i.
  Rational Cost(const DistanceMatrix& d) const;
  // Row equalities, column inequalities and [0, 1] ranges, all exact.
  bool Satisfies(const Alpha& alpha, const std::vector<Rational>& mu,
                 const std::vector<Rational>& mu_prime) const;
};

struct DualResult {
  Rational value;           // max of the two minima
  Rational forward_value;   // min over Omega(mu, mu')
  Rational backward_value;  // min over Omega(mu', mu)
  DualWitness forward;
  DualWitness backward;
};

// The minimization program over Omega(mu, mu'):
//   min sum_ij omega_ij d_ij + sum_i eta_i
//   s.t. sum_j omega_ij + tau_i - gamma_i + eta_i = mu(i)
//        sum_i omega_ij + (tau_j - gamma_j) / alpha <= mu'(j)
//        all variables in [0, 1].
// Encoded as a maximization of the negated cost. Variable layout: omega_ij
// at i*n + j, then tau, gamma, eta blocks of n each.
LinearProgram BuildDualLp(const Alpha& alpha, const DistanceMatrix& d,
                          const std::vector<Rational>& mu,
                          const std::vector<Rational>& mu_prime);

absl::StatusOr<DualResult> KantorovichDual(
    const Alpha& alpha, const DistanceMatrix& d,
    const std::vector<Rational>& mu, const std::vector<Rational>& mu_prime,
    const KantorovichOptions& options = {});

enum class KantorovichMode { kPrimal, kDual };

std::string KantorovichModeName(KantorovichMode mode);

struct GammaOptions {
  KantorovichMode mode = KantorovichMode::kPrimal;
  // Worker threads over state pairs; 0 means hardware concurrency. The
  // result does not depend on this value.
  int threads = 1;
};

// One application of Gamma_alpha: 1 on label mismatch, otherwise
// K_alpha(d)(mu_s, mu_s'). Requires d.size() == lmc.num_states().
DistanceMatrix GammaApply(const Alpha& alpha, const Lmc& lmc,
                          const DistanceMatrix& d,
                          const GammaOptions& options = {});

// Runs `body(i)` for i in [0, count) on up to `threads` workers.
void ParallelFor(int count, int threads, const std::function<void(int)>& body);

}  // namespace privdist

#endif  // PRIVDIST_SKEW_KANTOROVICH_H_
