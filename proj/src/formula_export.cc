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

#include "privdist/formula_export.h"

#include <sstream>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace privdist {
namespace {

std::string And(const std::vector<std::string>& terms) {
  if (terms.empty()) return "true";
  if (terms.size() == 1) return terms[0];
  return absl::StrCat("(and ", absl::StrJoin(terms, " "), ")");
}

std::string Sum(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  if (terms.size() == 1) return terms[0];
  return absl::StrCat("(+ ", absl::StrJoin(terms, " "), ")");
}

std::string Le(absl::string_view a, absl::string_view b) {
  return absl::StrCat("(<= ", a, " ", b, ")");
}

std::string InUnit(absl::string_view v) {
  return absl::StrCat("(<= 0 ", v, ") (<= ", v, " 1)");
}

std::string Binders(const std::vector<std::string>& vars) {
  std::vector<std::string> parts;
  for (const std::string& v : vars)
    parts.push_back(absl::StrCat("(", v, " Real)"));
  return absl::StrCat("(", absl::StrJoin(parts, " "), ")");
}

std::string Var(absl::string_view prefix, int i, int j) {
  return absl::StrCat(prefix, "_", i, "_", j);
}

// phi(d, f): label mismatches pin d to 1, and every 1-bounded f that
// respects d keeps each pair's objective below d.
std::string Phi(const Alpha& alpha, const Lmc& lmc,
                const std::vector<std::vector<Rational>>& dists,
                absl::string_view d) {
  const int n = lmc.num_states();
  const std::string a = SmtRational(alpha.value());
  std::vector<std::string> pinned;
  std::vector<std::string> hyp;
  std::vector<std::string> goals;
  for (int i = 0; i < n; ++i) {
    hyp.push_back(InUnit(absl::StrCat("f_", i)));
    for (int j = 0; j < n; ++j) {
      hyp.push_back(Le(absl::StrCat("(- f_", i, " (* ", a, " f_", j, "))"),
                       Var(d, i, j)));
      if (lmc.label(i) != lmc.label(j)) {
        pinned.push_back(absl::StrCat("(= ", Var(d, i, j), " 1)"));
        continue;
      }
      std::vector<std::string> terms;
      for (int k = 0; k < n; ++k) {
        const Rational c = dists[i][k] - alpha.value() * dists[j][k];
        if (!c.is_zero()) {
          terms.push_back(absl::StrCat("(* ", SmtRational(c), " f_", k, ")"));
        }
      }
      goals.push_back(Le(Sum(terms), Var(d, i, j)));
    }
  }
  pinned.push_back(absl::StrCat("(=> ", And(hyp), " ", And(goals), ")"));
  return And(pinned);
}

std::vector<std::vector<Rational>> Distributions(const Lmc& lmc) {
  std::vector<std::vector<Rational>> out;
  for (StateId s = 0; s < lmc.num_states(); ++s) {
    out.push_back(lmc.Distribution(s));
  }
  return out;
}

void Preamble(std::ostringstream& out, absl::string_view logic,
              const Alpha& alpha, const Lmc& lmc) {
  out << "; privdist export\n";
  out << "; alpha = " << alpha.value() << "\n";
  for (StateId s = 0; s < lmc.num_states(); ++s) {
    out << "; state " << s << " = " << lmc.name(s) << " [" << lmc.label_name(s)
        << "]\n";
  }
  out << "(set-logic " << logic << ")\n";
}

}  // namespace

std::string SmtRational(const Rational& r) {
  const Rational m = r.abs();
  std::string body = m.is_integer()
                         ? m.numerator().get_str()
                         : absl::StrCat("(/ ", m.numerator().get_str(), " ",
                                        m.denominator().get_str(), ")");
  return r.sign() < 0 ? absl::StrCat("(- ", body, ")") : body;
}

std::string DistanceVar(int i, int j) { return Var("d", i, j); }

std::string ExportLfpFormula(const Alpha& alpha, const Lmc& lmc) {
  const int n = lmc.num_states();
  const auto dists = Distributions(lmc);
  std::ostringstream out;
  Preamble(out, "LRA", alpha, lmc);
  std::vector<std::string> f_vars, d2_vars, range, range2, below;
  for (int i = 0; i < n; ++i) f_vars.push_back(absl::StrCat("f_", i));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out << "(declare-const " << DistanceVar(i, j) << " Real)\n";
      d2_vars.push_back(Var("d2", i, j));
      range.push_back(InUnit(DistanceVar(i, j)));
      range2.push_back(InUnit(Var("d2", i, j)));
      below.push_back(Le(DistanceVar(i, j), Var("d2", i, j)));
    }
  }
  out << "(assert " << And(range) << ")\n";
  out << "(assert (forall " << Binders(f_vars) << " "
      << Phi(alpha, lmc, dists, "d") << "))\n";
  out << "(assert (forall " << Binders(d2_vars) << " (=> (and " << And(range2)
      << " (forall " << Binders(f_vars) << " " << Phi(alpha, lmc, dists, "d2")
      << ")) " << And(below) << ")))\n";
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

absl::StatusOr<std::string> ExportThresholdFormula(const Alpha& alpha,
                                                   const Lmc& lmc, StateId s,
                                                   StateId t,
                                                   const Rational& theta) {
  const int n = lmc.num_states();
  if (s < 0 || t < 0 || s >= n || t >= n) {
    return absl::InvalidArgumentError("state out of range");
  }
  if (theta.sign() < 0 || theta > Rational(1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("theta must lie in [0, 1], got ", theta.ToString()));
  }
  const auto dists = Distributions(lmc);
  const std::string a = SmtRational(alpha.value());
  std::ostringstream out;
  Preamble(out, "QF_NRA", alpha, lmc);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out << "(declare-const " << DistanceVar(i, j) << " Real)\n";
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out << "(assert (and " << InUnit(DistanceVar(i, j)) << "))\n";
      if (i < j) {
        out << "(assert (= " << DistanceVar(i, j) << " " << DistanceVar(j, i)
            << "))\n";
      }
      if (lmc.label(i) != lmc.label(j)) {
        out << "(assert (= " << DistanceVar(i, j) << " 1))\n";
      }
    }
  }
  // One witness per ordered pair (q, r) of distinct states with equal
  // labels; the diagonal always admits tau = mu, so it is omitted.
  for (int q = 0; q < n; ++q) {
    for (int r = 0; r < n; ++r) {
      if (q == r || lmc.label(q) != lmc.label(r)) continue;
      const std::string tag = absl::StrCat(q, "_", r);
      out << "; witness for (" << lmc.name(q) << ", " << lmc.name(r) << ")\n";
      auto w = [&](int i, int j) {
        return absl::StrCat("w_", tag, "_", i, "_", j);
      };
      auto v = [&](absl::string_view p, int i) {
        return absl::StrCat(p, "_", tag, "_", i);
      };
      std::vector<std::string> decls;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) decls.push_back(w(i, j));
      }
      for (const char* p : {"tau", "gam", "eta"}) {
        for (int i = 0; i < n; ++i) decls.push_back(v(p, i));
      }
      std::vector<std::string> conj;
      for (const std::string& x : decls) {
        out << "(declare-const " << x << " Real)\n";
        conj.push_back(InUnit(x));
      }
      std::vector<std::string> cost;
      for (int i = 0; i < n; ++i) {
        std::vector<std::string> row, col;
        for (int j = 0; j < n; ++j) {
          row.push_back(w(i, j));
          col.push_back(w(j, i));
          cost.push_back(
              absl::StrCat("(* ", w(i, j), " ", DistanceVar(i, j), ")"));
        }
        row.push_back(v("tau", i));
        row.push_back(absl::StrCat("(- ", v("gam", i), ")"));
        row.push_back(v("eta", i));
        conj.push_back(
            absl::StrCat("(= ", Sum(row), " ", SmtRational(dists[q][i]), ")"));
        col.push_back(absl::StrCat("(/ (- ", v("tau", i), " ", v("gam", i),
                                   ") ", a, ")"));
        conj.push_back(Le(Sum(col), SmtRational(dists[r][i])));
        cost.push_back(v("eta", i));
      }
      conj.push_back(Le(Sum(cost), DistanceVar(q, r)));
      out << "(assert " << And(conj) << ")\n";
    }
  }
  out << "(assert " << Le(DistanceVar(s, t), SmtRational(theta)) << ")\n";
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

absl::StatusOr<Rational> EvalSmtRational(const SExpr& e) {
  if (e.is_atom) return ParseRational(e.atom);
  if (e.list.empty() || !e.list[0].is_atom) {
    return absl::InvalidArgumentError(
        absl::StrCat("not a rational term: ", e.ToString()));
  }
  std::vector<Rational> args;
  for (std::size_t k = 1; k < e.list.size(); ++k) {
    absl::StatusOr<Rational> x = EvalSmtRational(e.list[k]);
    if (!x.ok()) return x.status();
    args.push_back(*std::move(x));
  }
  const std::string& op = e.list[0].atom;
  if (op == "-" && args.size() == 1) return -args[0];
  if (op == "-" && args.size() == 2) return args[0] - args[1];
  if (op == "/" && args.size() == 2) return Divide(args[0], args[1]);
  return absl::InvalidArgumentError(
      absl::StrCat("not a rational term: ", e.ToString()));
}

namespace {

absl::Status CollectDefines(const SExpr& e,
                            std::map<std::string, Rational>* out) {
  if (e.is_atom) return absl::OkStatus();
  if (e.list.size() == 5 && e.list[0].IsAtom("define-fun") &&
      e.list[1].is_atom && !e.list[2].is_atom && e.list[2].list.empty()) {
    absl::StatusOr<Rational> v = EvalSmtRational(e.list[4]);
    if (!v.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "value of ", e.list[1].atom, ": ", v.status().message()));
    }
    (*out)[e.list[1].atom] = *std::move(v);
    return absl::OkStatus();
  }
  for (const SExpr& child : e.list) {
    if (absl::Status st = CollectDefines(child, out); !st.ok()) return st;
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::map<std::string, Rational>> ParseModel(
    absl::string_view text) {
  absl::StatusOr<std::vector<SExpr>> terms = ParseSExprs(text);
  if (!terms.ok()) return terms.status();
  std::map<std::string, Rational> out;
  for (const SExpr& e : *terms) {
    if (absl::Status st = CollectDefines(e, &out); !st.ok()) return st;
  }
  return out;
}

std::string FormatModel(const DistanceMatrix& d) {
  std::ostringstream out;
  out << "(model\n";
  for (int i = 0; i < d.size(); ++i) {
    for (int j = 0; j < d.size(); ++j) {
      out << "  (define-fun " << DistanceVar(i, j) << " () Real "
          << SmtRational(d.at(i, j)) << ")\n";
    }
  }
  out << ")\n";
  return out.str();
}

absl::StatusOr<Certificate> ValidateModel(const Lmc& lmc, const Alpha& alpha,
                                          absl::string_view model) {
  absl::StatusOr<std::map<std::string, Rational>> values = ParseModel(model);
  if (!values.ok()) return values.status();
  const int n = lmc.num_states();
  std::vector<std::string> missing;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!values->contains(DistanceVar(i, j))) {
        missing.push_back(DistanceVar(i, j));
      }
    }
  }
  if (!missing.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("model is missing ", absl::StrJoin(missing, ", ")));
  }
  DistanceMatrix d(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Rational& x = values->at(DistanceVar(i, j));
      if (x != values->at(DistanceVar(j, i))) {
        return absl::InvalidArgumentError(
            absl::StrCat("model is not symmetric at ", DistanceVar(i, j)));
      }
      d.set(i, j, x);
    }
  }
  return CheckCertificate(alpha, lmc, d);
}

}  // namespace privdist
