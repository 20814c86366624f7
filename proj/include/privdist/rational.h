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

#ifndef PRIVDIST_RATIONAL_H_
#define PRIVDIST_RATIONAL_H_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace privdist {

// Exact arbitrary-precision fraction. Always stored in canonical form:
// positive denominator, numerator and denominator coprime.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value);  // NOLINT: implicit integer promotion
  // Requires den != 0.
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(mpq_class value);

  static Rational FromIntegers(const mpz_class& num, const mpz_class& den);

  const mpq_class& mpq() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  Rational abs() const;
  mpz_class floor() const;
  mpz_class ceil() const;

  // "num/den", or just "num" when the denominator is 1.
  std::string ToString() const;
  // Human-readable only; never used by the computation.
  double ToDouble() const { return value_.get_d(); }
  // Decimal rendering with `digits` fractional digits, truncated toward zero.
  std::string ToDecimal(int digits) const;

  // Bits needed for the denominator; a cheap size measure.
  std::size_t DenominatorBits() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  // Aborts on division by zero; use Divide() for a checked variant.
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.ToString();
  }

 private:
  mpq_class value_;
};

// Checked division: InvalidArgument when `b` is zero.
absl::StatusOr<Rational> Divide(const Rational& a, const Rational& b);

inline const Rational& Max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}
inline const Rational& Min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}

// Parses "num/den", "num", or a terminating decimal literal such as "0.49"
// or "-1.5e-3". Surrounding whitespace is ignored.
absl::StatusOr<Rational> ParseRational(absl::string_view text);

// The rational in [lo, hi] with the smallest denominator; ties on the
// denominator go to the smallest absolute numerator. Requires lo <= hi.
Rational BestRationalInInterval(const Rational& lo, const Rational& hi);

// sum_{k=0}^{terms-1} eps^k / k!, a rational lower bound on e^eps for
// eps >= 0. Requires terms >= 1.
Rational TaylorLowerBoundExp(const Rational& eps, int terms);

// Smallest term count whose last added term is below `tolerance`.
int DefaultExpTerms(const Rational& eps,
                    const Rational& tolerance = Rational(1, 1'000'000'000'000));

// 2^exponent, exact for negative exponents too.
Rational PowerOfTwo(int exponent);

// floor(x * 2^bits) / 2^bits and the matching ceiling. Used to keep iterate
// sizes bounded while rounding in a known direction.
Rational RoundDownDyadic(const Rational& x, int bits);
Rational RoundUpDyadic(const Rational& x, int bits);

}  // namespace privdist

#endif  // PRIVDIST_RATIONAL_H_
