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

#include "bilevel/cells.hpp"

#include <stdexcept>

#include "bilevel/errors.hpp"

namespace bilevel {

namespace {

void check_shape(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("shape-mismatch", what);
}

void check_integer(const QMatrix& m, const char* name) {
  if (!m.is_integer()) throw ValidationError("nonintegral-data", std::string(name) + " has non-integer entries");
}

void check_integer(const QVector& v, const char* name) {
  if (!is_integral(v)) throw ValidationError("nonintegral-data", std::string(name) + " has non-integer entries");
}

bool is_zero_row(std::span<const Rat> v) {
  for (const Rat& q : v) {
    if (q.sign() != 0) return false;
  }
  return true;
}

}  // namespace

void Instance::validate() const {
  check_shape(n >= 1, "n must be at least 1");
  check_shape(d >= 1, "d must be at least 1");
  check_shape(A.cols() == n, "A must have n columns");
  check_shape(B.rows() == m() && B.cols() == d, "B must be m x d");
  check_shape(C.cols() == n, "C must have n columns");
  check_shape(D.rows() == h() && D.cols() == d, "D must be h x d");
  check_shape(c.size() == n, "c must have length n");
  check_shape(e.size() == d, "e must have length d");
  check_shape(psi.size() == n, "psi must have length n");
  check_shape(u.size() == m(), "u must have length m");
  check_shape(p.size() == h(), "p must have length h");
  check_integer(A, "A");
  check_integer(B, "B");
  check_integer(C, "C");
  check_integer(D, "D");
  check_integer(c, "c");
  check_integer(e, "e");
  check_integer(psi, "psi");
  check_integer(u, "u");
  check_integer(p, "p");
  if (!recession_bounded(recession_matrix(upper_system(*this)))) {
    throw ValidationError("unbounded-P", "the upper-level polyhedron is unbounded");
  }
  if (!recession_bounded(A)) {
    throw ValidationError("unbounded-follower", "the follower's feasible sets are unbounded");
  }
}

QVector BilevelPoint::joined() const {
  QVector v = to_qvector(x);
  v.insert(v.end(), z.begin(), z.end());
  return v;
}

std::strong_ordering Cell::compare_int(const IntVector& a, const IntVector& b) {
  const std::size_t k = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < k; ++i) {
    const int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.size() <=> b.size();
}

LinearSystem upper_system(const Instance& inst) {
  const std::size_t dim = inst.dimension();
  LinearSystem sys(dim);
  for (std::size_t i = 0; i < inst.h(); ++i) {
    QVector row = inst.C.row_vector(i);
    const auto dz = inst.D.row(i);
    row.insert(row.end(), dz.begin(), dz.end());
    sys.add_le(std::move(row), inst.p[i]);
  }
  for (std::size_t j = 0; j < inst.d; ++j) sys.add_le(unit(dim, inst.n + j, -1), 0);
  return sys;
}

LinearSystem follower_rows(const Instance& inst) {
  LinearSystem sys(inst.dimension());
  for (std::size_t i = 0; i < inst.m(); ++i) {
    QVector row = inst.A.row_vector(i);
    for (const Rat& b : inst.B.row(i)) row.push_back(-b);
    sys.add_le(std::move(row), inst.u[i]);
  }
  return sys;
}

LinearSystem follower_system_at(const Instance& inst, std::span<const Rat> z) {
  LinearSystem sys(inst.n);
  for (std::size_t i = 0; i < inst.m(); ++i) {
    sys.add_le(inst.A.row_vector(i), dot(inst.B.row(i), z) + inst.u[i]);
  }
  return sys;
}

LinearSystem specialize_x(std::span<const LinRow> rows, const Instance& inst, const IntVector& x) {
  const QVector xq = to_qvector(x);
  LinearSystem out(inst.d);
  for (const LinRow& r : rows) {
    if (r.coeffs.size() != inst.dimension()) throw DimensionError("specialize_x: row is not over (x, z)");
    const std::span<const Rat> cx(r.coeffs.data(), inst.n);
    QVector cz(r.coeffs.begin() + static_cast<long>(inst.n), r.coeffs.end());
    out.add(std::move(cz), r.relation, r.rhs - dot(cx, xq));
  }
  return out;
}

LinearSystem cell_region(const Instance& inst, const Cell& cell, std::span<const LinRow> extras) {
  LinearSystem sys = specialize_x(upper_system(inst).rows(), inst, cell.x);
  for (std::size_t i = 0; i < inst.m(); ++i) {
    QVector b = inst.B.row_vector(i);
    QVector neg_b = b;
    for (Rat& q : neg_b) q = -q;
    sys.add_le(std::move(neg_b), inst.u[i] - Rat(cell.r[i]));
    sys.add_lt(std::move(b), Rat(cell.r[i]) + 1 - inst.u[i]);
  }
  sys.append(specialize_x(extras, inst, cell.x));
  return sys;
}

IntVector floor_rhs(const Instance& inst, std::span<const Rat> z) {
  IntVector r;
  r.reserve(inst.m());
  for (std::size_t i = 0; i < inst.m(); ++i) r.push_back(floor_rat(dot(inst.B.row(i), z) + inst.u[i]));
  return r;
}

CellEnumerator::CellEnumerator(Instance inst, Limits limits)
    : inst_(std::move(inst)), limits_(std::move(limits)) {}

bool CellEnumerator::follower_optimal(const Cell& cell) {
  if (auto it = follower_cache_.find(cell); it != follower_cache_.end()) return it->second;
  LinearSystem better(inst_.n);
  for (std::size_t i = 0; i < inst_.m(); ++i) better.add_le(inst_.A.row_vector(i), Rat(cell.r[i]));
  better.add_le(inst_.psi, dot(inst_.psi, to_qvector(cell.x)) - 1);
  const bool optimal = !mixed_feasible(better, MixedPattern::all_integer(inst_.n),
                                       BoundsCheck::kAssumeBounded, limits_.node_cap)
                            .has_value();
  follower_cache_.emplace(cell, optimal);
  return optimal;
}

std::optional<QVector> CellEnumerator::valid_region_point(const Cell& cell,
                                                          std::span<const LinRow> extras) {
  if (cell.x.size() != inst_.n || cell.r.size() != inst_.m()) {
    throw DimensionError("cell shape does not match the instance");
  }
  const QVector xq = to_qvector(cell.x);
  for (std::size_t i = 0; i < inst_.m(); ++i) {
    if (dot(inst_.A.row(i), xq) > Rat(cell.r[i])) return std::nullopt;
  }
  if (!follower_optimal(cell)) return std::nullopt;
  return strict_feasible_point(cell_region(inst_, cell, extras));
}

bool CellEnumerator::scan_floors(const LinearSystem& closed, std::size_t row,
                                 std::span<const LinRow> extras, const Visitor& visit,
                                 std::size_t& count, Cell& cell) {
  if (row == inst_.m()) {
    if (!follower_optimal(cell)) return true;
    auto point = strict_feasible_point(cell_region(inst_, cell, extras));
    if (!point) return true;
    ++visited_;
    if (++count > limits_.cell_cap) {
      throw ResourceLimitError("cell enumeration exceeded " + std::to_string(limits_.cell_cap) + " cells");
    }
    return visit(cell, *point);
  }
  const QVector xq = to_qvector(cell.x);
  const BigInt ax = floor_rat(dot(inst_.A.row(row), xq));
  const QVector b = inst_.B.row_vector(row);
  const Rat& ui = inst_.u[row];
  BigInt r_lo;
  BigInt r_hi;
  const bool constant = is_zero_row(b);
  if (constant) {
    r_lo = r_hi = floor_rat(ui);
  } else {
    const LpOutcome lo = lp_solve(closed, b, Sense::kMinimize);
    if (lo.status == LpStatus::kInfeasible) return true;
    const LpOutcome hi = lp_solve(closed, b, Sense::kMaximize);
    if (!lo.optimal() || !hi.optimal()) throw UnboundedSystemError("cell region is unbounded");
    r_lo = floor_rat(lo.value + ui);
    r_hi = floor_rat(hi.value + ui);
  }
  if (r_lo < ax) r_lo = ax;
  for (BigInt r = r_lo; r <= r_hi; ++r) {
    LinearSystem next = closed;
    if (!constant) {
      QVector neg_b = b;
      for (Rat& q : neg_b) q = -q;
      next.add_le(std::move(neg_b), ui - Rat(r));
      next.add_le(b, Rat(r) + 1 - ui);
    }
    cell.r.push_back(r);
    const bool more = scan_floors(next, row + 1, extras, visit, count, cell);
    cell.r.pop_back();
    if (!more) return false;
  }
  return true;
}

std::size_t CellEnumerator::for_each_valid(std::span<const LinRow> extras, const Visitor& visit) {
  LinearSystem lifted = upper_system(inst_);
  for (const LinRow& r : extras) lifted.add(r);
  std::vector<std::size_t> x_coords(inst_.n);
  for (std::size_t j = 0; j < inst_.n; ++j) x_coords[j] = j;
  const auto xs = enumerate_integer_projection(lifted, x_coords, limits_.enumeration_cap);

  const LinearSystem upper = upper_system(inst_);
  std::size_t count = 0;
  for (const IntVector& x : xs) {
    LinearSystem closed = specialize_x(upper.rows(), inst_, x);
    closed.append(specialize_x(extras, inst_, x).closure());
    Cell cell{x, {}};
    if (!scan_floors(closed, 0, extras, visit, count, cell)) break;
  }
  return count;
}

std::vector<Cell> CellEnumerator::enumerate(std::span<const LinRow> extras) {
  std::vector<Cell> out;
  for_each_valid(extras, [&](const Cell& c, const QVector&) {
    out.push_back(c);
    return true;
  });
  return out;
}

bool is_valid_cell(const Instance& inst, const Cell& cell, std::span<const LinRow> extras) {
  CellEnumerator cells(inst);
  return cells.is_valid(cell, extras);
}

std::vector<Cell> enumerate_cells(const Instance& inst, std::span<const LinRow> extras,
                                  const Limits& limits) {
  CellEnumerator cells(inst, limits);
  return cells.enumerate(extras);
}

CellInfimum cell_infimum(const Instance& inst, const Cell& cell, std::span<const Rat> objective,
                         std::span<const LinRow> extras, const Limits& limits) {
  if (objective.size() != inst.dimension()) throw DimensionError("cell_infimum: objective is not over (x, z)");
  const LinearSystem region = cell_region(inst, cell, extras);
  const LinearSystem closed = region.closure();
  const std::span<const Rat> obj_x = objective.subspan(0, inst.n);
  const QVector obj_z(objective.begin() + static_cast<long>(inst.n), objective.end());
  const Rat offset = dot(obj_x, to_qvector(cell.x));

  const LpOutcome lo = lp_solve(closed, obj_z, Sense::kMinimize);
  if (!lo.optimal()) throw std::invalid_argument("cell_infimum: cell region is empty");
  CellInfimum out;
  out.inf = lo.value + offset;

  LinearSystem at_inf = region;
  at_inf.add_eq(obj_z, lo.value);
  if (auto z = strict_feasible_point(at_inf)) {
    out.attained = true;
    out.witness = BilevelPoint{cell.x, std::move(*z)};
    return out;
  }
  const LpOutcome hi = lp_solve(closed, obj_z, Sense::kMaximize);
  const Rat delta = (hi.value - lo.value) * limits.witness_fraction;
  LinearSystem near = region;
  near.add_le(obj_z, lo.value + delta);
  if (auto z = strict_feasible_point(near)) out.witness = BilevelPoint{cell.x, std::move(*z)};
  return out;
}

bool bilevel_feasible(const Instance& inst, std::span<const Rat> x, std::span<const Rat> z) {
  if (x.size() != inst.n || z.size() != inst.d) return false;
  if (!is_integral(x)) return false;
  QVector joined(x.begin(), x.end());
  joined.insert(joined.end(), z.begin(), z.end());
  if (!upper_system(inst).contains(joined)) return false;
  if (!follower_rows(inst).contains(joined)) return false;
  const LpOutcome best =
      integer_min(inst.psi, follower_system_at(inst, z), BoundsCheck::kAssumeBounded);
  return best.optimal() && best.value == dot(inst.psi, x);
}

bool bilevel_feasible(const Instance& inst, const BilevelPoint& point) {
  return bilevel_feasible(inst, to_qvector(point.x), point.z);
}

}  // namespace bilevel
