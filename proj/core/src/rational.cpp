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

#include "bilevel/rational.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bilevel/errors.hpp"

namespace bilevel {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rat::Rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.v_ == 0) throw std::domain_error("Rat: division by zero");
  v_ /= o.v_;
  return *this;
}

Rat Rat::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num_text = body.substr(0, slash);
  const std::string_view den_text =
      slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num_text) || !all_digits(den_text)) {
    throw std::invalid_argument("Rat: malformed rational '" + std::string(text) + "'");
  }
  BigInt num(std::string(num_text), 10);
  BigInt den(std::string(den_text), 10);
  if (den == 0) throw std::invalid_argument("Rat: zero denominator in '" + std::string(text) + "'");
  if (negative) num = -num;
  return Rat(num, den);
}

std::ostream& operator<<(std::ostream& os, const Rat& q) { return os << q.to_string(); }

BigInt floor_rat(const Rat& q) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), q.raw().get_num_mpz_t(), q.raw().get_den_mpz_t());
  return out;
}

BigInt ceil_rat(const Rat& q) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), q.raw().get_num_mpz_t(), q.raw().get_den_mpz_t());
  return out;
}

Rat abs(const Rat& q) { return q.sign() < 0 ? -q : q; }

Rat pow2(long k) {
  BigInt p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? Rat(BigInt(1), p) : Rat(p);
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

QVector to_qvector(const IntVector& v) { return QVector(v.begin(), v.end()); }

IntVector to_intvector(const QVector& v) {
  IntVector out;
  out.reserve(v.size());
  for (const Rat& q : v) {
    if (!q.is_integer()) throw std::invalid_argument("to_intvector: non-integer entry " + q.to_string());
    out.push_back(q.numerator());
  }
  return out;
}

bool is_integral(std::span<const Rat> v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& q) { return q.is_integer(); });
}

Rat dot(std::span<const Rat> a, std::span<const Rat> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  mpq_class acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].sign() != 0 && b[i].sign() != 0) acc += a[i].raw() * b[i].raw();
  }
  return Rat(acc.get_num(), acc.get_den());
}

QVector zeros(std::size_t n) { return QVector(n, Rat(0)); }

QVector unit(std::size_t n, std::size_t i, const Rat& scale) {
  QVector v(n, Rat(0));
  v.at(i) = scale;
  return v;
}

std::string to_string(std::span<const Rat> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].get_str();
  os << ')';
  return os.str();
}

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rat>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("QMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw DimensionError("QMatrix: row " + std::to_string(i) + " has " +
                           std::to_string(rows[i].size()) + " entries, expected " +
                           std::to_string(cols));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<long>(i * cols));
  }
  return m;
}

QVector QMatrix::row_vector(std::size_t i) const {
  auto r = row(i);
  return QVector(r.begin(), r.end());
}

QVector QMatrix::column(std::size_t j) const {
  QVector out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
  return out;
}

QVector QMatrix::multiply(std::span<const Rat> v) const {
  if (v.size() != cols_) throw DimensionError("QMatrix::multiply: shape mismatch");
  QVector out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(dot(row(i), v));
  return out;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::vstack(const QMatrix& top, const QMatrix& bottom) {
  if (top.cols_ != bottom.cols_) throw DimensionError("QMatrix::vstack: column counts differ");
  QMatrix m(top.rows_ + bottom.rows_, top.cols_);
  std::copy(top.data_.begin(), top.data_.end(), m.data_.begin());
  std::copy(bottom.data_.begin(), bottom.data_.end(),
            m.data_.begin() + static_cast<long>(top.data_.size()));
  return m;
}

bool QMatrix::is_integer() const { return is_integral(data_); }

namespace {

// In-place Gaussian elimination to row echelon form. Returns the pivot
// columns and the sign flips incurred by row swaps.
struct Echelon {
  std::vector<std::size_t> pivots;
  int swaps = 0;
};

Echelon eliminate(QMatrix& m, QVector* rhs) {
  Echelon e;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).sign() == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
      if (rhs) std::swap((*rhs)[p], (*rhs)[r]);
      ++e.swaps;
    }
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c).sign() == 0) continue;
      const Rat f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
      if (rhs) (*rhs)[i] -= f * (*rhs)[r];
    }
    e.pivots.push_back(c);
    ++r;
  }
  return e;
}

BigInt ceil_sqrt(const BigInt& s) {
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), s.get_mpz_t());
  if (root * root < s) root += 1;
  return root;
}

}  // namespace

std::size_t rank(QMatrix m) { return eliminate(m, nullptr).pivots.size(); }

Rat determinant(QMatrix m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant: matrix is not square");
  const Echelon e = eliminate(m, nullptr);
  if (e.pivots.size() < m.rows()) return 0;
  Rat det = (e.swaps % 2) ? -1 : 1;
  for (std::size_t i = 0; i < m.rows(); ++i) det *= m(i, i);
  return det;
}

std::optional<QVector> solve_square(QMatrix m, QVector rhs) {
  const std::size_t n = m.rows();
  if (m.cols() != n || rhs.size() != n) throw DimensionError("solve_square: shape mismatch");
  const Echelon e = eliminate(m, &rhs);
  if (e.pivots.size() < n) return std::nullopt;
  QVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rat acc = rhs[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= m(ii, j) * x[j];
    x[ii] = acc / m(ii, ii);
  }
  return x;
}

BigInt subdeterminant_bound(const QMatrix& m) {
  if (!m.is_integer()) throw std::invalid_argument("subdeterminant_bound: non-integer entries");
  BigInt bound = 1;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    BigInt sq = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const BigInt a = m(i, j).numerator();
      sq += a * a;
    }
    const BigInt norm = ceil_sqrt(sq);
    if (norm > 1) bound *= norm;
  }
  return bound;
}

}  // namespace bilevel
