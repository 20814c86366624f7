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

#include "privdist/sexpr.h"

#include <cctype>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace privdist {
namespace {

class Reader {
 public:
  explicit Reader(absl::string_view text) : text_(text) {}

  absl::StatusOr<std::vector<SExpr>> ReadAll() {
    std::vector<SExpr> out;
    while (true) {
      SkipBlank();
      if (pos_ >= text_.size()) return out;
      absl::StatusOr<SExpr> e = Read();
      if (!e.ok()) return e.status();
      out.push_back(*std::move(e));
    }
  }

 private:
  absl::Status Error(absl::string_view msg) const {
    return absl::InvalidArgumentError(absl::StrCat("line ", line_, ": ", msg));
  }

  void SkipBlank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        return;
      }
    }
  }

  absl::StatusOr<SExpr> Read() {
    SkipBlank();
    if (pos_ >= text_.size()) return Error("unexpected end of input");
    const char c = text_[pos_];
    if (c == ')') return Error("unbalanced ')'");
    if (c == '(') {
      ++pos_;
      SExpr e;
      e.is_atom = false;
      while (true) {
        SkipBlank();
        if (pos_ >= text_.size()) return Error("missing ')'");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        absl::StatusOr<SExpr> child = Read();
        if (!child.ok()) return child.status();
        e.list.push_back(*std::move(child));
      }
    }
    if (c == '"') return ReadDelimited('"', /*doubled_escape=*/true);
    if (c == '|') return ReadDelimited('|', /*doubled_escape=*/false);
    SExpr e;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
          d == ';' || d == '"' || d == '|') {
        break;
      }
      e.atom.push_back(d);
      ++pos_;
    }
    return e;
  }

  absl::StatusOr<SExpr> ReadDelimited(char delim, bool doubled_escape) {
    SExpr e;
    e.atom.push_back(text_[pos_++]);
    while (pos_ < text_.size()) {
      const char d = text_[pos_++];
      if (d == '\n') ++line_;
      e.atom.push_back(d);
      if (d != delim) continue;
      if (doubled_escape && pos_ < text_.size() && text_[pos_] == delim) {
        e.atom.push_back(text_[pos_++]);
        continue;
      }
      return e;
    }
    return Error(absl::StrCat("unterminated ", std::string(1, delim)));
  }

  absl::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

std::string SExpr::ToString() const {
  if (is_atom) return atom;
  std::string out = "(";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i > 0) out += " ";
    out += list[i].ToString();
  }
  return out + ")";
}

absl::StatusOr<std::vector<SExpr>> ParseSExprs(absl::string_view text) {
  return Reader(text).ReadAll();
}

}  // namespace privdist
