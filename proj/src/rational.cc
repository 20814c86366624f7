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

#include "privdist/rational.h"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace privdist {
namespace {

bool AllDigits(absl::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Optional sign followed by at least one digit.
bool ParseInteger(absl::string_view s, mpz_class* out) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!AllDigits(s)) return false;
  out->set_str(std::string(s), 10);
  if (negative) *out = -*out;
  return true;
}

mpz_class Pow10(unsigned long exponent) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, exponent);
  return r;
}

absl::StatusOr<Rational> ParseDecimal(absl::string_view s) {
  const std::string original(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != absl::string_view::npos) {
    mpz_class exp;
    if (!ParseInteger(s.substr(e + 1), &exp) || !exp.fits_slong_p() ||
        abs(exp) > 100000) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed exponent in number '", original, "'"));
    }
    exponent = exp.get_si();
    s = s.substr(0, e);
  }
  absl::string_view int_part = s;
  absl::string_view frac_part;
  if (auto dot = s.find('.'); dot != absl::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) ||
      (!int_part.empty() && !AllDigits(int_part)) ||
      (!frac_part.empty() && !AllDigits(frac_part))) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed number '", original, "'"));
  }
  mpz_class digits(std::string(int_part) + std::string(frac_part) + "0", 10);
  digits /= 10;  // the appended "0" keeps set_str happy on empty parts
  exponent -= static_cast<long>(frac_part.size());
  mpq_class value(digits);
  if (exponent >= 0) {
    value *= Pow10(exponent);
  } else {
    value /= Pow10(-exponent);
  }
  value.canonicalize();
  if (negative) value = -value;
  return Rational(std::move(value));
}

}  // namespace

Rational::Rational(std::int64_t value) : value_(static_cast<long>(value)) {}

Rational::Rational(std::int64_t num, std::int64_t den)
    : value_(static_cast<long>(num), static_cast<long>(den)) {
  if (den == 0) {
    std::fprintf(stderr, "privdist: Rational with zero denominator\n");
    std::abort();
  }
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  value_.canonicalize();
}

Rational Rational::FromIntegers(const mpz_class& num, const mpz_class& den) {
  return Rational(mpq_class(num, den));
}

Rational Rational::abs() const { return Rational(::abs(value_)); }

mpz_class Rational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return r;
}

mpz_class Rational::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return r;
}

std::string Rational::ToString() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::ToDecimal(int digits) const {
  const mpz_class scale = Pow10(static_cast<unsigned long>(digits));
  mpz_class scaled = ::abs(value_.get_num()) * scale;
  mpz_tdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), value_.get_den_mpz_t());
  std::string s = scaled.get_str();
  if (static_cast<int>(s.size()) <= digits) {
    s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  }
  if (digits > 0) s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  if (sign() < 0) s.insert(0, "-");
  return s;
}

std::size_t Rational::DenominatorBits() const {
  return mpz_sizeinbase(value_.get_den_mpz_t(), 2);
}

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) {
    std::fprintf(stderr, "privdist: Rational division by zero\n");
    std::abort();
  }
  value_ /= o.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

absl::StatusOr<Rational> Divide(const Rational& a, const Rational& b) {
  if (b.is_zero()) return absl::InvalidArgumentError("division by zero");
  return a / b;
}

absl::StatusOr<Rational> ParseRational(absl::string_view text) {
  const absl::string_view s = absl::StripAsciiWhitespace(text);
  if (s.empty()) return absl::InvalidArgumentError("empty number");
  if (auto slash = s.find('/'); slash != absl::string_view::npos) {
    mpz_class num, den;
    if (!ParseInteger(s.substr(0, slash), &num) ||
        !ParseInteger(s.substr(slash + 1), &den)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed fraction '", s, "'"));
    }
    if (den == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("zero denominator in '", s, "'"));
    }
    return Rational::FromIntegers(num, den);
  }
  mpz_class num;
  if (ParseInteger(s, &num)) return Rational::FromIntegers(num, 1);
  return ParseDecimal(s);
}

Rational BestRationalInInterval(const Rational& lo, const Rational& hi) {
  if (lo.sign() <= 0 && hi.sign() >= 0) return Rational(0);
  if (hi.sign() < 0) return -BestRationalInInterval(-hi, -lo);
  // 0 < lo <= hi: walk the continued-fraction expansions together.
  const mpz_class whole = lo.floor();
  if (lo.is_integer()) return lo;
  const Rational next = Rational::FromIntegers(whole + 1, 1);
  if (next <= hi) return next;
  // Both endpoints lie strictly inside (whole, whole + 1).
  const Rational base = Rational::FromIntegers(whole, 1);
  const Rational inner = BestRationalInInterval(Rational(1) / (hi - base),
                                                Rational(1) / (lo - base));
  return base + Rational(1) / inner;
}

Rational TaylorLowerBoundExp(const Rational& eps, int terms) {
  Rational sum(0);
  Rational term(1);
  for (int k = 0; k < terms; ++k) {
    if (k > 0) term = term * eps / Rational(k);
    sum += term;
  }
  return sum;
}

int DefaultExpTerms(const Rational& eps, const Rational& tolerance) {
  if (eps.is_zero()) return 1;
  Rational term(1);
  int k = 0;
  // term holds eps^k / k!; stop once the term about to be added is small.
  while (!(term < tolerance)) {
    ++k;
    term = term * eps / Rational(k);
  }
  return k + 1;
}

Rational PowerOfTwo(int exponent) {
  mpz_class p = 1;
  p <<= static_cast<mp_bitcnt_t>(exponent < 0 ? -exponent : exponent);
  return exponent < 0 ? Rational::FromIntegers(1, p)
                      : Rational::FromIntegers(p, 1);
}

Rational RoundDownDyadic(const Rational& x, int bits) {
  mpz_class scale = 1;
  scale <<= bits;
  const Rational scaled = x * Rational::FromIntegers(scale, 1);
  return Rational::FromIntegers(scaled.floor(), scale);
}

Rational RoundUpDyadic(const Rational& x, int bits) {
  mpz_class scale = 1;
  scale <<= bits;
  const Rational scaled = x * Rational::FromIntegers(scale, 1);
  return Rational::FromIntegers(scaled.ceil(), scale);
}

}  // namespace privdist
