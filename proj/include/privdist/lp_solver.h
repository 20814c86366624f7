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

#ifndef PRIVDIST_LP_SOLVER_H_
#define PRIVDIST_LP_SOLVER_H_

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "privdist/rational.h"

namespace privdist {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<std::pair<int, Rational>> coefficients;  // sparse
  Relation relation = Relation::kLessEqual;
  Rational rhs;
};

struct VariableBounds {
  Rational lower;                 // finite
  std::optional<Rational> upper;  // nullopt is +infinity
};

// maximize objective . x  subject to rows and per-variable bounds.
class LinearProgram {
 public:
  explicit LinearProgram(int num_vars);

  int num_vars() const { return static_cast<int>(objective_.size()); }
  const std::vector<Rational>& objective() const { return objective_; }
  const std::vector<LpRow>& rows() const { return rows_; }
  const std::vector<VariableBounds>& bounds() const { return bounds_; }

  void set_objective(int var, Rational c) { objective_[var] = std::move(c); }
  void set_bounds(int var, Rational lower, std::optional<Rational> upper) {
    bounds_[var] = {std::move(lower), std::move(upper)};
  }
  void AddRow(LpRow row) { rows_.push_back(std::move(row)); }

  // Checks indices and lower <= upper.
  absl::Status Validate() const;

  // True when `x` satisfies every row and bound exactly.
  bool IsFeasible(const std::vector<Rational>& x) const;
  Rational Evaluate(const std::vector<Rational>& x) const;

 private:
  std::vector<Rational> objective_;
  std::vector<LpRow> rows_;
  std::vector<VariableBounds> bounds_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string LpStatusName(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  Rational value;                  // when optimal
  std::vector<Rational> solution;  // when optimal; a vertex of the polytope
};

struct LpOptions {
  // When set, every pivot and bound flip is written here.
  std::ostream* trace = nullptr;
};

// Exact two-phase primal simplex over rationals on a condensed tableau that
// stores only nonbasic columns. Upper bounds are handled natively (nonbasic
// variables sit at either bound) and Bland's smallest-index rule picks
// entering and leaving variables, so the method terminates on degenerate
// problems and is deterministic.
//
// Requires lp.Validate().ok(); infeasibility and unboundedness are reported
// through the status.
LpOutcome SolveLp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace privdist

#endif  // PRIVDIST_LP_SOLVER_H_
