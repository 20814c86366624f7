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

// A small reader for SMT-LIB 2 concrete syntax.

#ifndef PRIVDIST_SEXPR_H_
#define PRIVDIST_SEXPR_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace privdist {

struct SExpr {
  bool is_atom = true;
  std::string atom;  // symbol, numeral, decimal, keyword or string literal
  std::vector<SExpr> list;

  bool IsAtom(absl::string_view text) const { return is_atom && atom == text; }
  std::string ToString() const;
};

// Parses a sequence of top-level terms. Handles ';' comments, "strings"
// with doubled-quote escapes and |quoted symbols|.
absl::StatusOr<std::vector<SExpr>> ParseSExprs(absl::string_view text);

}  // namespace privdist

#endif  // PRIVDIST_SEXPR_H_
