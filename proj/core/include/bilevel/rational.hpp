// Copyright 2026 The bilevel Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact rational scalars, dense vectors and matrices.
//
// Every quantity the solver manipulates lives here: instance data, LP
// tableau entries, decision thresholds, infima and solution coordinates.
// There is no floating point anywhere in the library.

#ifndef BILEVEL_RATIONAL_HPP_
#define BILEVEL_RATIONAL_HPP_

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bilevel {

using BigInt = mpz_class;

// Arbitrary-precision rational, always in lowest terms with a positive
// denominator.
class Rat {
 public:
  Rat() = default;
  Rat(int v) : v_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rat(long v) : v_(v) {}                    // NOLINT(google-explicit-constructor)
  Rat(const BigInt& v) : v_(v) {}           // NOLINT(google-explicit-constructor)
  Rat(const BigInt& num, const BigInt& den);

  // Accepts "p", "p/q", "-p/q" (decimal, optional leading sign on the
  // numerator). Throws std::invalid_argument on malformed text or q = 0.
  static Rat parse(std::string_view text);

  BigInt numerator() const { return v_.get_num(); }
  BigInt denominator() const { return v_.get_den(); }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  // "p/q", or "p" when q = 1.
  std::string to_string() const { return v_.get_str(); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { Rat r; r.v_ = -a.v_; return r; }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rat& q);

BigInt floor_rat(const Rat& q);
BigInt ceil_rat(const Rat& q);
Rat abs(const Rat& q);
// 2^k for k >= 0, 2^-|k| otherwise.
Rat pow2(long k);
BigInt lcm(const BigInt& a, const BigInt& b);

using QVector = std::vector<Rat>;
using IntVector = std::vector<BigInt>;

QVector to_qvector(const IntVector& v);
// Throws std::invalid_argument if any entry is not an integer.
IntVector to_intvector(const QVector& v);
bool is_integral(std::span<const Rat> v);

// Throws DimensionError on length mismatch.
Rat dot(std::span<const Rat> a, std::span<const Rat> b);
QVector zeros(std::size_t n);
QVector unit(std::size_t n, std::size_t i, const Rat& scale = 1);
std::string to_string(std::span<const Rat> v);
std::string to_string(const IntVector& v);

// Dense row-major rational matrix with explicit shape.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  // Ragged rows are a DimensionError. An empty list yields a 0x0 matrix.
  QMatrix(std::initializer_list<std::initializer_list<Rat>> rows);

  // `cols` fixes the width when `rows` is empty.
  static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Rat> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  QVector row_vector(std::size_t i) const;
  QVector column(std::size_t j) const;
  QVector multiply(std::span<const Rat> v) const;

  QMatrix transpose() const;
  // Vertical stack; column counts must agree.
  static QMatrix vstack(const QMatrix& top, const QMatrix& bottom);

  bool is_integer() const;

  friend bool operator==(const QMatrix&, const QMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

std::size_t rank(QMatrix m);
Rat determinant(QMatrix m);
// Unique solution of a square system, or nullopt if singular.
std::optional<QVector> solve_square(QMatrix m, QVector rhs);

// L = prod_j max(1, ceil(||col_j||_2)). By Hadamard's inequality every
// square submatrix S satisfies |det S| <= L. Empty matrices give 1.
// Throws std::invalid_argument on non-integer entries.
BigInt subdeterminant_bound(const QMatrix& m);

}  // namespace bilevel

#endif  // BILEVEL_RATIONAL_HPP_
