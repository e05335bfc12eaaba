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

// Exact linear programming and polytope utilities over rationals.
//
// A LinearSystem is a list of rows `a . y  (<=, =, <)  b` over a fixed
// ambient dimension. Strict rows model half-open regions; `closure()` drops
// the strictness. The LP solver is a dense two-phase tableau simplex using
// Bland's rule, so it always terminates and its answers are exact.

#ifndef BILEVEL_POLYHEDRAL_HPP_
#define BILEVEL_POLYHEDRAL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bilevel/rational.hpp"

namespace bilevel {

enum class Relation { kLessEqual, kEqual, kLess };

struct LinRow {
  QVector coeffs;
  Rat rhs;
  Relation relation = Relation::kLessEqual;

  // Exact membership test for a point of matching dimension.
  bool satisfied_by(std::span<const Rat> point) const;
  std::string to_string() const;
};

class LinearSystem {
 public:
  LinearSystem() = default;
  explicit LinearSystem(std::size_t dimension) : dim_(dimension) {}

  std::size_t dimension() const { return dim_; }
  const std::vector<LinRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool has_strict_rows() const;

  // Throws DimensionError when the row length differs from dimension().
  LinearSystem& add(LinRow row);
  LinearSystem& add(QVector coeffs, Relation rel, Rat rhs);
  LinearSystem& add_le(QVector coeffs, Rat rhs) { return add(std::move(coeffs), Relation::kLessEqual, std::move(rhs)); }
  LinearSystem& add_eq(QVector coeffs, Rat rhs) { return add(std::move(coeffs), Relation::kEqual, std::move(rhs)); }
  LinearSystem& add_lt(QVector coeffs, Rat rhs) { return add(std::move(coeffs), Relation::kLess, std::move(rhs)); }
  // lo <= y_i <= hi.
  LinearSystem& add_bounds(std::size_t i, const Rat& lo, const Rat& hi);
  LinearSystem& append(const LinearSystem& other);

  // Every strict row relaxed to <=. Idempotent.
  LinearSystem closure() const;
  bool contains(std::span<const Rat> point) const;

 private:
  std::size_t dim_ = 0;
  std::vector<LinRow> rows_;
};

enum class LpStatus { kInfeasible, kUnbounded, kOptimal };
enum class Sense { kMinimize, kMaximize };

struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  Rat value;
  QVector point;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

// Exact optimum of objective . y over a system without strict rows (strict
// rows are a std::invalid_argument). Free variables are split, so an
// optimal point need not be a vertex when the objective ignores a coordinate.
LpOutcome lp_solve(const LinearSystem& sys, std::span<const Rat> objective,
                   Sense sense = Sense::kMinimize);

// Some point of the closed region, or nullopt when it is empty.
std::optional<QVector> feasible_point(const LinearSystem& sys);

// A point satisfying every row, with strict rows satisfied strictly. A
// common slack t in [0, 1] is subtracted from each strict row's right-hand
// side and maximized; the system is strictly feasible iff the optimum t > 0.
std::optional<QVector> strict_feasible_point(const LinearSystem& sys);

constexpr std::size_t kDefaultVertexCap = 1'000'000;

// All vertices of the closed, bounded region, deduplicated and sorted
// lexicographically. Found by solving every square subsystem of the rows.
// Throws UnboundedSystemError for unbounded regions and ResourceLimitError
// when the number of row subsets exceeds `cap`.
std::vector<QVector> vertices(const LinearSystem& sys, std::size_t cap = kDefaultVertexCap);

struct AffineVertices {
  std::size_t k = 0;  // 1 + affine dimension; 0 for an empty region.
  std::vector<QVector> points;
};

// k = 1 + dim of the region and k affinely independent vertices, picked
// greedily from the lex-ordered vertex list.
AffineVertices affinely_independent_vertices(const LinearSystem& sys,
                                             std::size_t cap = kDefaultVertexCap);

// True iff {y : M y <= 0} = {0}.
bool recession_bounded(const QMatrix& m);

// True iff every recession direction of the closed region vanishes on the
// listed coordinates, i.e. the projection of the region onto them is
// bounded (when non-empty).
bool projection_bounded(const LinearSystem& sys, std::span<const std::size_t> coords);

// The recession matrix of a closed system: <= rows as-is, = rows in both
// directions.
QMatrix recession_matrix(const LinearSystem& sys);

}  // namespace bilevel

#endif  // BILEVEL_POLYHEDRAL_HPP_
