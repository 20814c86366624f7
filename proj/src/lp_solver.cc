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

#include "privdist/lp_solver.h"

#include <cstddef>

#include "absl/strings/str_cat.h"

namespace privdist {

LinearProgram::LinearProgram(int num_vars)
    : objective_(static_cast<std::size_t>(num_vars)),
      bounds_(static_cast<std::size_t>(num_vars)) {}

absl::Status LinearProgram::Validate() const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [var, coef] : rows_[r].coefficients) {
      if (var < 0 || var >= num_vars()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", r, " references variable ", var));
      }
    }
  }
  for (int v = 0; v < num_vars(); ++v) {
    if (bounds_[v].upper && *bounds_[v].upper < bounds_[v].lower) {
      return absl::InvalidArgumentError(
          absl::StrCat("variable ", v, " has lower > upper"));
    }
  }
  return absl::OkStatus();
}

bool LinearProgram::IsFeasible(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != num_vars()) return false;
  for (int v = 0; v < num_vars(); ++v) {
    if (x[v] < bounds_[v].lower) return false;
    if (bounds_[v].upper && *bounds_[v].upper < x[v]) return false;
  }
  for (const LpRow& row : rows_) {
    Rational lhs;
    for (const auto& [var, coef] : row.coefficients) lhs += coef * x[var];
    switch (row.relation) {
      case Relation::kLessEqual:
        if (row.rhs < lhs) return false;
        break;
      case Relation::kEqual:
        if (lhs != row.rhs) return false;
        break;
      case Relation::kGreaterEqual:
        if (lhs < row.rhs) return false;
        break;
    }
  }
  return true;
}

Rational LinearProgram::Evaluate(const std::vector<Rational>& x) const {
  Rational value;
  for (int v = 0; v < num_vars(); ++v) value += objective_[v] * x[v];
  return value;
}

std::string LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Condensed tableau over shifted variables 0 <= x_j <= upper_j: one row per
// basic variable and one column per nonbasic variable, so slack identity
// columns are never stored. Row r reads x_{basis[r]} + sum_k T[r][k]
// x_{nonbasic[k]} = const.
class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram& lp, std::ostream* trace)
      : lp_(lp), trace_(trace) {
    Setup();
  }

  LpOutcome Solve() {
    LpOutcome outcome;
    if (num_artificial_ > 0) {
      std::vector<mpq_class> phase1(columns_.size());
      for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (columns_[j].kind == Kind::kArtificial) phase1[j] = -1;
      }
      Iterate(phase1);
      if (sgn(CurrentObjective(phase1)) < 0) {
        outcome.status = LpStatus::kInfeasible;
        return outcome;
      }
      DropArtificials();
    }
    std::vector<mpq_class> phase2(columns_.size());
    for (int v = 0; v < lp_.num_vars(); ++v) {
      phase2[v] = lp_.objective()[v].mpq();
    }
    if (!Iterate(phase2)) {
      outcome.status = LpStatus::kUnbounded;
      return outcome;
    }
    outcome.status = LpStatus::kOptimal;
    for (int v = 0; v < lp_.num_vars(); ++v) {
      outcome.solution.push_back(lp_.bounds()[v].lower +
                                 Rational(Value(static_cast<std::size_t>(v))));
    }
    outcome.value = lp_.Evaluate(outcome.solution);
    return outcome;
  }

 private:
  enum class Kind { kStructural, kSlack, kArtificial };

  struct Column {
    Kind kind;
    std::optional<mpq_class> upper;  // nullopt: unbounded above
    bool at_upper = false;
    bool enabled = true;
    // Row index when basic, else -1 - (tableau column index).
    int position = 0;
    bool basic() const { return position >= 0; }
  };

  void Setup() {
    const int n = lp_.num_vars();
    for (int v = 0; v < n; ++v) {
      const VariableBounds& b = lp_.bounds()[v];
      Column c{Kind::kStructural, std::nullopt};
      if (b.upper) c.upper = (*b.upper - b.lower).mpq();
      columns_.push_back(c);
    }
    const std::size_t m = lp_.rows().size();
    std::vector<std::vector<std::pair<int, mpq_class>>> sparse(m);
    std::vector<mpq_class> rhs(m);
    std::vector<int> slack_sign(m, 0);
    for (std::size_t r = 0; r < m; ++r) {
      const LpRow& row = lp_.rows()[r];
      mpq_class b = row.rhs.mpq();
      for (const auto& [var, coef] : row.coefficients) {
        sparse[r].emplace_back(var, coef.mpq());
        b -= coef.mpq() * lp_.bounds()[var].lower.mpq();
      }
      rhs[r] = b;
      if (row.relation == Relation::kLessEqual) slack_sign[r] = 1;
      if (row.relation == Relation::kGreaterEqual) slack_sign[r] = -1;
    }
    // Normalize to rhs >= 0; the slack is basic when it enters with +1,
    // otherwise an artificial is.
    std::vector<int> slack_col(m, -1);
    for (std::size_t r = 0; r < m; ++r) {
      if (sgn(rhs[r]) < 0) {
        rhs[r] = -rhs[r];
        for (auto& [var, coef] : sparse[r]) coef = -coef;
        slack_sign[r] = -slack_sign[r];
      }
      if (slack_sign[r] != 0) {
        slack_col[r] = static_cast<int>(columns_.size());
        columns_.push_back({Kind::kSlack, std::nullopt});
      }
    }
    basis_.assign(m, -1);
    for (std::size_t r = 0; r < m; ++r) {
      if (slack_sign[r] == 1) {
        basis_[r] = slack_col[r];
      } else {
        basis_[r] = static_cast<int>(columns_.size());
        columns_.push_back({Kind::kArtificial, std::nullopt});
        ++num_artificial_;
      }
      columns_[basis_[r]].position = static_cast<int>(r);
    }
    std::vector<bool> is_basic(columns_.size(), false);
    for (int b : basis_) is_basic[b] = true;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (is_basic[j]) continue;
      columns_[j].position = -1 - static_cast<int>(nonbasic_.size());
      nonbasic_.push_back(static_cast<int>(j));
    }
    tableau_.assign(m, std::vector<mpq_class>(nonbasic_.size()));
    for (std::size_t r = 0; r < m; ++r) {
      for (const auto& [var, coef] : sparse[r]) {
        tableau_[r][Col(var)] += coef;
      }
      if (slack_col[r] >= 0 && !columns_[slack_col[r]].basic()) {
        tableau_[r][Col(slack_col[r])] = slack_sign[r];
      }
    }
    values_ = std::move(rhs);
  }

  std::size_t Col(int var) const {
    return static_cast<std::size_t>(-1 - columns_[var].position);
  }

  mpq_class Value(std::size_t j) const {
    const Column& c = columns_[j];
    if (c.basic()) return values_[c.position];
    return c.at_upper ? *c.upper : mpq_class(0);
  }

  mpq_class CurrentObjective(const std::vector<mpq_class>& cost) const {
    mpq_class z = 0;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (sgn(cost[j]) != 0) z += cost[j] * Value(j);
    }
    return z;
  }

  // Reduced costs c_j - c_B B^-1 A_j, per tableau column.
  std::vector<mpq_class> ReducedCosts(
      const std::vector<mpq_class>& cost) const {
    std::vector<mpq_class> rc(nonbasic_.size());
    for (std::size_t k = 0; k < nonbasic_.size(); ++k)
      rc[k] = cost[nonbasic_[k]];
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      const mpq_class& cb = cost[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t k = 0; k < rc.size(); ++k) {
        if (sgn(tableau_[r][k]) != 0) rc[k] -= cb * tableau_[r][k];
      }
    }
    return rc;
  }

  // Exchanges basis_[row] with nonbasic_[col]; the leaving variable takes
  // over tableau column `col`.
  void Pivot(std::size_t row, std::size_t col, std::vector<mpq_class>& rc) {
    std::vector<mpq_class>& pr = tableau_[row];
    const mpq_class inv = 1 / pr[col];
    std::vector<std::size_t> nonzero;
    for (std::size_t k = 0; k < pr.size(); ++k) {
      if (k != col && sgn(pr[k]) != 0) {
        pr[k] *= inv;
        nonzero.push_back(k);
      }
    }
    pr[col] = inv;
    mpq_class tmp;
    auto eliminate = [&](std::vector<mpq_class>& target) {
      if (sgn(target[col]) == 0) return;
      const mpq_class factor = target[col];
      for (std::size_t k : nonzero) {
        tmp = factor * pr[k];
        target[k] -= tmp;
      }
      target[col] = -factor * inv;
    };
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
      if (r != row) eliminate(tableau_[r]);
    }
    eliminate(rc);
    const int entering = nonbasic_[col];
    const int leaving = basis_[row];
    basis_[row] = entering;
    nonbasic_[col] = leaving;
    columns_[entering].position = static_cast<int>(row);
    columns_[leaving].position = -1 - static_cast<int>(col);
  }

  // Returns false when the objective is unbounded.
  bool Iterate(const std::vector<mpq_class>& cost) {
    std::vector<mpq_class> rc = ReducedCosts(cost);
    while (true) {
      // Bland: the smallest improving variable index enters.
      std::size_t col = nonbasic_.size();
      for (std::size_t k = 0; k < nonbasic_.size(); ++k) {
        const Column& c = columns_[nonbasic_[k]];
        if (!c.enabled) continue;
        if (c.upper && sgn(*c.upper) == 0) continue;  // fixed
        if ((!c.at_upper && sgn(rc[k]) > 0) || (c.at_upper && sgn(rc[k]) < 0)) {
          if (col == nonbasic_.size() || nonbasic_[k] < nonbasic_[col]) col = k;
        }
      }
      if (col == nonbasic_.size()) return true;
      const int entering = nonbasic_[col];
      Column& in = columns_[entering];
      const int dir = in.at_upper ? -1 : 1;

      // Ratio test. The entering variable's own bound is the flip candidate
      // and wins ties, which makes every flip a strict improvement.
      std::optional<mpq_class> step;
      std::optional<std::size_t> leave_row;
      if (in.upper) step = *in.upper;
      for (std::size_t r = 0; r < tableau_.size(); ++r) {
        const mpq_class& a = tableau_[r][col];
        if (sgn(a) == 0) continue;
        const mpq_class rate = dir > 0 ? mpq_class(-a) : a;
        std::optional<mpq_class> limit;
        if (sgn(rate) < 0) {
          limit = values_[r] / -rate;
        } else if (const Column& out = columns_[basis_[r]]; out.upper) {
          limit = (*out.upper - values_[r]) / rate;
        }
        if (!limit) continue;
        const bool better =
            !step || *limit < *step ||
            (*limit == *step && leave_row && basis_[r] < basis_[*leave_row]);
        if (better) {
          step = *limit;
          leave_row = r;
        }
      }
      if (!step) return false;

      for (std::size_t r = 0; r < tableau_.size(); ++r) {
        const mpq_class& a = tableau_[r][col];
        if (sgn(a) == 0) continue;
        values_[r] -= (dir > 0 ? *step : mpq_class(-*step)) * a;
      }
      if (!leave_row) {
        in.at_upper = !in.at_upper;
        if (trace_)
          *trace_ << "flip x" << entering << " step " << *step << "\n";
        continue;
      }
      const std::size_t r = *leave_row;
      Column& out = columns_[basis_[r]];
      out.at_upper = out.upper && values_[r] == *out.upper;
      if (trace_) {
        *trace_ << "pivot row " << r << " enter x" << entering << " leave x"
                << basis_[r] << " step " << *step << "\n";
      }
      values_[r] = dir > 0 ? *step : mpq_class(*in.upper - *step);
      in.at_upper = false;
      Pivot(r, col, rc);
    }
  }

  // After a feasible phase one: pivot zero-valued artificials out of the
  // basis, drop rows that turn out redundant, and disable the artificials.
  void DropArtificials() {
    std::vector<mpq_class> unused_rc(nonbasic_.size());
    for (std::size_t r = 0; r < basis_.size();) {
      if (columns_[basis_[r]].kind != Kind::kArtificial) {
        ++r;
        continue;
      }
      std::size_t replacement = nonbasic_.size();
      for (std::size_t k = 0; k < nonbasic_.size(); ++k) {
        if (columns_[nonbasic_[k]].kind != Kind::kArtificial &&
            sgn(tableau_[r][k]) != 0 &&
            (replacement == nonbasic_.size() ||
             nonbasic_[k] < nonbasic_[replacement])) {
          replacement = k;
        }
      }
      if (replacement == nonbasic_.size()) {
        // Redundant row: every non-artificial entry is zero.
        columns_[basis_[r]].position = -1 - static_cast<int>(nonbasic_.size());
        columns_[basis_[r]].enabled = false;
        tableau_.erase(tableau_.begin() + static_cast<std::ptrdiff_t>(r));
        values_.erase(values_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        for (std::size_t i = r; i < basis_.size(); ++i) {
          columns_[basis_[i]].position = static_cast<int>(i);
        }
        continue;
      }
      Column& in = columns_[nonbasic_[replacement]];
      values_[r] = in.at_upper ? *in.upper : mpq_class(0);
      in.at_upper = false;
      Pivot(r, replacement, unused_rc);
      ++r;
    }
    for (Column& c : columns_) {
      if (c.kind == Kind::kArtificial) c.enabled = false;
    }
  }

  const LinearProgram& lp_;
  std::ostream* trace_;
  std::vector<Column> columns_;
  std::vector<std::vector<mpq_class>> tableau_;
  std::vector<int> basis_;
  std::vector<int> nonbasic_;
  std::vector<mpq_class> values_;
  int num_artificial_ = 0;
};

}  // namespace

LpOutcome SolveLp(const LinearProgram& lp, const LpOptions& options) {
  return BoundedSimplex(lp, options.trace).Solve();
}

}  // namespace privdist
