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

// Bilevel instances and their half-open cell decomposition.
//
// An instance is
//
//   inf  c.x + e.z
//   s.t. C x + D z <= p,  z >= 0,
//        x in argmin { psi.x' : A x' <= B z + u, x' integer }.
//
// For integer A and x, the follower's feasible set at z depends only on the
// floor vector r = floor(B z + u). A cell (x, r) therefore indexes the
// region of leader decisions
//
//   C x + D z <= p,  z >= 0,  r_i <= B_i z + u_i < r_i + 1,
//
// on which x is follower-optimal or not as a whole. The bilevel feasible
// set is the disjoint union of the regions of valid cells.
//
// Systems "over (x, z)" use coordinates [0, n) for x and [n, n + d) for z.

#ifndef BILEVEL_CELLS_HPP_
#define BILEVEL_CELLS_HPP_

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bilevel/lattice.hpp"
#include "bilevel/polyhedral.hpp"
#include "bilevel/rational.hpp"

namespace bilevel {

struct Instance {
  std::size_t n = 0;  // follower variables x
  std::size_t d = 0;  // leader variables z
  QMatrix A;          // m x n
  QMatrix B;          // m x d
  QMatrix C;          // h x n
  QMatrix D;          // h x d
  QVector c;          // n
  QVector e;          // d
  QVector psi;        // n
  QVector u;          // m
  QVector p;          // h

  std::size_t m() const { return A.rows(); }
  std::size_t h() const { return C.rows(); }
  std::size_t dimension() const { return n + d; }

  // Throws ValidationError with code "shape-mismatch", "nonintegral-data",
  // "unbounded-P" or "unbounded-follower".
  void validate() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct BilevelPoint {
  IntVector x;
  QVector z;

  // (x, z) as one vector over (x, z) coordinates.
  QVector joined() const;
  friend bool operator==(const BilevelPoint&, const BilevelPoint&) = default;
};

struct Cell {
  IntVector x;
  IntVector r;

  friend auto operator<=>(const Cell& a, const Cell& b) {
    if (auto c = compare_int(a.x, b.x); c != 0) return c;
    return compare_int(a.r, b.r);
  }
  friend bool operator==(const Cell&, const Cell&) = default;

 private:
  static std::strong_ordering compare_int(const IntVector& a, const IntVector& b);
};

struct Limits {
  std::size_t cell_cap = 1'000'000;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t node_cap = kDefaultNodeCap;
  std::size_t vertex_cap = kDefaultVertexCap;
  // Unattained witnesses land within this fraction of the cell's objective
  // range above the infimum.
  Rat witness_fraction = pow2(-20);
};

// Upper-level rows over (x, z): C x + D z <= p and z >= 0.
LinearSystem upper_system(const Instance& inst);
// Follower rows over (x, z): A x - B z <= u.
LinearSystem follower_rows(const Instance& inst);
// Follower rows over x' at a fixed leader decision: A x' <= B z + u.
LinearSystem follower_system_at(const Instance& inst, std::span<const Rat> z);
// Rows over (x, z) with x fixed, as rows over z.
LinearSystem specialize_x(std::span<const LinRow> rows, const Instance& inst, const IntVector& x);
// The half-open region of a cell with extra rows over (x, z), as rows over z.
LinearSystem cell_region(const Instance& inst, const Cell& cell, std::span<const LinRow> extras = {});

// floor(B z + u).
IntVector floor_rhs(const Instance& inst, std::span<const Rat> z);

// Enumerates, screens and caches cells for one instance. Follower-optimality
// only depends on (x, r) and is memoized across calls; everything else is
// recomputed, so results never depend on call history.
class CellEnumerator {
 public:
  using Visitor = std::function<bool(const Cell& cell, const QVector& region_point)>;

  explicit CellEnumerator(Instance inst, Limits limits = {});

  const Instance& instance() const { return inst_; }
  const Limits& limits() const { return limits_; }

  // No x' with A x' <= r and psi.x' <= psi.x - 1.
  bool follower_optimal(const Cell& cell);
  // A x <= r, follower-optimal, and the region (with extras) has a strictly
  // feasible point, which is returned.
  std::optional<QVector> valid_region_point(const Cell& cell, std::span<const LinRow> extras);
  bool is_valid(const Cell& cell, std::span<const LinRow> extras) {
    return valid_region_point(cell, extras).has_value();
  }

  // Visits valid cells in lexicographic (x, r) order until the visitor
  // returns false. Returns the number of valid cells visited.
  std::size_t for_each_valid(std::span<const LinRow> extras, const Visitor& visit);
  std::vector<Cell> enumerate(std::span<const LinRow> extras);

  // Total valid cells visited over the lifetime of this enumerator.
  std::size_t cells_visited() const { return visited_; }

 private:
  bool scan_floors(const LinearSystem& closed, std::size_t row,
                   std::span<const LinRow> extras, const Visitor& visit, std::size_t& count,
                   Cell& cell);

  Instance inst_;
  Limits limits_;
  std::map<Cell, bool> follower_cache_;
  std::size_t visited_ = 0;
};

bool is_valid_cell(const Instance& inst, const Cell& cell, std::span<const LinRow> extras = {});
std::vector<Cell> enumerate_cells(const Instance& inst, std::span<const LinRow> extras = {},
                                  const Limits& limits = {});

struct CellInfimum {
  Rat inf;
  bool attained = false;
  // A point of the region: optimal when attained, otherwise within the
  // witness tolerance above the infimum.
  std::optional<BilevelPoint> witness;
};

// Infimum of objective (over (x, z)) on a valid cell's region. Throws
// std::invalid_argument when the cell region is empty.
CellInfimum cell_infimum(const Instance& inst, const Cell& cell, std::span<const Rat> objective,
                         std::span<const LinRow> extras = {}, const Limits& limits = {});

// Direct check of the definition: x integer, upper rows, follower rows, and
// psi.x equal to the follower's integer optimum at z.
bool bilevel_feasible(const Instance& inst, std::span<const Rat> x, std::span<const Rat> z);
bool bilevel_feasible(const Instance& inst, const BilevelPoint& point);

}  // namespace bilevel

#endif  // BILEVEL_CELLS_HPP_
