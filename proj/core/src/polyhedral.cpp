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

#include "bilevel/polyhedral.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "bilevel/errors.hpp"

namespace bilevel {

bool LinRow::satisfied_by(std::span<const Rat> point) const {
  const Rat lhs = dot(coeffs, point);
  switch (relation) {
    case Relation::kLessEqual: return lhs <= rhs;
    case Relation::kEqual: return lhs == rhs;
    case Relation::kLess: return lhs < rhs;
  }
  return false;
}

std::string LinRow::to_string() const {
  std::ostringstream os;
  os << bilevel::to_string(coeffs) << " . y "
     << (relation == Relation::kLessEqual ? "<=" : relation == Relation::kEqual ? "=" : "<") << ' '
     << rhs;
  return os.str();
}

bool LinearSystem::has_strict_rows() const {
  return std::any_of(rows_.begin(), rows_.end(),
                     [](const LinRow& r) { return r.relation == Relation::kLess; });
}

LinearSystem& LinearSystem::add(LinRow row) {
  if (row.coeffs.size() != dim_) {
    throw DimensionError("LinearSystem: row of length " + std::to_string(row.coeffs.size()) +
                         " in dimension " + std::to_string(dim_));
  }
  rows_.push_back(std::move(row));
  return *this;
}

LinearSystem& LinearSystem::add(QVector coeffs, Relation rel, Rat rhs) {
  return add(LinRow{std::move(coeffs), std::move(rhs), rel});
}

LinearSystem& LinearSystem::add_bounds(std::size_t i, const Rat& lo, const Rat& hi) {
  add_le(unit(dim_, i, -1), -lo);
  add_le(unit(dim_, i), hi);
  return *this;
}

LinearSystem& LinearSystem::append(const LinearSystem& other) {
  for (const LinRow& r : other.rows_) add(r);
  return *this;
}

LinearSystem LinearSystem::closure() const {
  LinearSystem out = *this;
  for (LinRow& r : out.rows_) {
    if (r.relation == Relation::kLess) r.relation = Relation::kLessEqual;
  }
  return out;
}

bool LinearSystem::contains(std::span<const Rat> point) const {
  return std::all_of(rows_.begin(), rows_.end(),
                     [&](const LinRow& r) { return r.satisfied_by(point); });
}

std::optional<QVector> feasible_point(const LinearSystem& sys) {
  LpOutcome lp = lp_solve(sys.closure(), zeros(sys.dimension()));
  if (!lp.optimal()) return std::nullopt;
  return std::move(lp.point);
}

std::optional<QVector> strict_feasible_point(const LinearSystem& sys) {
  if (!sys.has_strict_rows()) return feasible_point(sys);
  const std::size_t n = sys.dimension();
  // Variables (y, t): strict rows become a.y + t <= b.
  LinearSystem lifted(n + 1);
  for (const LinRow& r : sys.rows()) {
    QVector c = r.coeffs;
    c.push_back(r.relation == Relation::kLess ? Rat(1) : Rat(0));
    lifted.add(std::move(c), r.relation == Relation::kLess ? Relation::kLessEqual : r.relation, r.rhs);
  }
  lifted.add_bounds(n, 0, 1);
  const LpOutcome lp = lp_solve(lifted, unit(n + 1, n), Sense::kMaximize);
  if (!lp.optimal() || lp.value.sign() <= 0) return std::nullopt;
  return QVector(lp.point.begin(), lp.point.begin() + static_cast<long>(n));
}

QMatrix recession_matrix(const LinearSystem& sys) {
  std::vector<QVector> rows;
  for (const LinRow& r : sys.rows()) {
    rows.push_back(r.coeffs);
    if (r.relation == Relation::kEqual) {
      QVector neg = r.coeffs;
      for (Rat& q : neg) q = -q;
      rows.push_back(std::move(neg));
    }
  }
  return QMatrix::from_rows(rows, sys.dimension());
}

namespace {

// Rows of the cone {y : M y <= 0}, cut by the unit box.
LinearSystem cone_in_box(const QMatrix& m) {
  LinearSystem cone(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) cone.add_le(m.row_vector(i), 0);
  for (std::size_t j = 0; j < m.cols(); ++j) cone.add_bounds(j, -1, 1);
  return cone;
}

bool cone_vanishes_on(const QMatrix& m, std::span<const std::size_t> coords) {
  const LinearSystem cone = cone_in_box(m);
  for (std::size_t j : coords) {
    const QVector dir = unit(m.cols(), j);
    for (Sense s : {Sense::kMaximize, Sense::kMinimize}) {
      const LpOutcome lp = lp_solve(cone, dir, s);
      if (!lp.optimal() || lp.value.sign() != 0) return false;
    }
  }
  return true;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// C(n, k), saturating at limit + 1.
std::size_t choose_capped(std::size_t n, std::size_t k, std::size_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > limit) return limit + 1;
  }
  return static_cast<std::size_t>(c);
}

}  // namespace

bool recession_bounded(const QMatrix& m) {
  const auto all = iota_indices(m.cols());
  return cone_vanishes_on(m, all);
}

bool projection_bounded(const LinearSystem& sys, std::span<const std::size_t> coords) {
  return cone_vanishes_on(recession_matrix(sys.closure()), coords);
}

std::vector<QVector> vertices(const LinearSystem& sys, std::size_t cap) {
  const LinearSystem closed = sys.closure();
  const std::size_t n = closed.dimension();
  if (!recession_bounded(recession_matrix(closed))) {
    throw UnboundedSystemError("vertices: region is unbounded");
  }
  if (n == 0) {
    if (closed.contains(QVector{})) return {QVector{}};
    return {};
  }
  const auto& rows = closed.rows();
  if (choose_capped(rows.size(), n, cap) > cap) {
    throw ResourceLimitError("vertices: more than " + std::to_string(cap) + " row subsets");
  }
  std::set<QVector> found;
  if (rows.size() < n) return {};
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  for (;;) {
    QMatrix m(n, n);
    QVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const LinRow& r = rows[pick[i]];
      for (std::size_t j = 0; j < n; ++j) m(i, j) = r.coeffs[j];
      rhs[i] = r.rhs;
    }
    if (auto y = solve_square(std::move(m), std::move(rhs)); y && closed.contains(*y)) {
      found.insert(std::move(*y));
    }
    // Next combination in lexicographic order.
    std::size_t i = n;
    while (i-- > 0) {
      if (pick[i] != i + rows.size() - n) break;
      if (i == 0) return {found.begin(), found.end()};
    }
    ++pick[i];
    for (std::size_t j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
}

AffineVertices affinely_independent_vertices(const LinearSystem& sys, std::size_t cap) {
  const std::vector<QVector> all = vertices(sys, cap);
  AffineVertices out;
  if (all.empty()) return out;
  const std::size_t n = sys.dimension();
  out.points.push_back(all.front());
  std::vector<QVector> diffs;
  for (std::size_t v = 1; v < all.size() && diffs.size() < n; ++v) {
    QVector d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = all[v][j] - all.front()[j];
    diffs.push_back(std::move(d));
    if (rank(QMatrix::from_rows(diffs, n)) == diffs.size()) {
      out.points.push_back(all[v]);
    } else {
      diffs.pop_back();
    }
  }
  out.k = out.points.size();
  return out;
}

}  // namespace bilevel
