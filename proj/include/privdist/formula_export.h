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

// SMT-LIB 2 encodings of the distance and of its threshold problem, and a
// checker for models returned by external solvers.

#ifndef PRIVDIST_FORMULA_EXPORT_H_
#define PRIVDIST_FORMULA_EXPORT_H_

#include <map>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privdist/fixpoint.h"
#include "privdist/lmc.h"
#include "privdist/rational.h"
#include "privdist/sexpr.h"
#include "privdist/skew_kantorovich.h"

namespace privdist {

// "3", "(/ 1 2)", "(- (/ 1 2))".
std::string SmtRational(const Rational& r);

// Name of the distance variable for (i, j): "d_i_j".
std::string DistanceVar(int i, int j);

// Quantified script (logic LRA) whose unique model for the d_i_j block is
// the least pre-fixed point:
//   exists d. (forall f. phi(d, f)) and
//             forall d2. ((forall f. phi(d2, f)) => d <= d2).
std::string ExportLfpFormula(const Alpha& alpha, const Lmc& lmc);

// Existential script (logic QF_NRA) asserting that d is pre-fixed, with a
// transport witness per ordered matching pair and direction, plus
// d_s_t <= theta. Requires theta in [0, 1].
absl::StatusOr<std::string> ExportThresholdFormula(const Alpha& alpha,
                                                   const Lmc& lmc, StateId s,
                                                   StateId t,
                                                   const Rational& theta);

// Evaluates a numeral, decimal, (/ a b) or (- a) term.
absl::StatusOr<Rational> EvalSmtRational(const SExpr& e);

// Collects every (define-fun NAME () Real VALUE) in a model.
absl::StatusOr<std::map<std::string, Rational>> ParseModel(
    absl::string_view text);

// A model assigning every d_i_j of `d`, in define-fun form.
std::string FormatModel(const DistanceMatrix& d);

// Extracts d from the model and checks it as a certificate. Errors on
// missing or non-rational d_i_j, asymmetric values, and range violations.
absl::StatusOr<Certificate> ValidateModel(const Lmc& lmc, const Alpha& alpha,
                                          absl::string_view model);

}  // namespace privdist

#endif  // PRIVDIST_FORMULA_EXPORT_H_
