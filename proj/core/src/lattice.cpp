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

#include "bilevel/lattice.hpp"

#include <stdexcept>

#include "bilevel/errors.hpp"

namespace bilevel {

MixedPattern::MixedPattern(std::size_t dimension, std::span<const std::size_t> integer_coords)
    : integer_(dimension, false) {
  for (std::size_t i : integer_coords) {
    if (i >= dimension) throw DimensionError("MixedPattern: coordinate out of range");
    integer_[i] = true;
  }
}

MixedPattern MixedPattern::all_integer(std::size_t dimension) {
  MixedPattern p(dimension);
  p.integer_.assign(dimension, true);
  return p;
}

MixedPattern MixedPattern::range(std::size_t dimension, std::size_t first, std::size_t count) {
  if (first + count > dimension) throw DimensionError("MixedPattern: range out of bounds");
  MixedPattern p(dimension);
  for (std::size_t i = first; i < first + count; ++i) p.integer_[i] = true;
  return p;
}

std::vector<std::size_t> MixedPattern::integer_coords() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < integer_.size(); ++i) {
    if (integer_[i]) out.push_back(i);
  }
  return out;
}

namespace {

void require_bounded(const LinearSystem& sys, const MixedPattern& pattern, BoundsCheck check) {
  if (check == BoundsCheck::kAssumeBounded) return;
  const auto coords = pattern.integer_coords();
  if (!projection_bounded(sys, coords)) {
    throw UnboundedSystemError("integer coordinates are unbounded over the system");
  }
}

// Lowest-index integer coordinate holding a fractional value, or dimension.
std::size_t first_fractional(const QVector& y, const MixedPattern& pattern) {
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (pattern.is_integer(j) && !y[j].is_integer()) return j;
  }
  return y.size();
}

class BranchAndBound {
 public:
  BranchAndBound(std::span<const Rat> objective, const MixedPattern& pattern, std::size_t node_cap,
                 bool stop_at_first)
      : objective_(objective), pattern_(pattern), node_cap_(node_cap), stop_at_first_(stop_at_first) {}

  void run(const LinearSystem& sys) {
    if (done_) return;
    if (++nodes_ > node_cap_) {
      throw ResourceLimitError("branch-and-bound exceeded " + std::to_string(node_cap_) + " nodes");
    }
    const LpOutcome lp = lp_solve(sys, objective_);
    if (lp.status == LpStatus::kInfeasible) return;
    if (lp.status == LpStatus::kUnbounded) {
      throw UnboundedSystemError("branch-and-bound relaxation is unbounded");
    }
    if (best_ && lp.value >= best_->value) return;
    const std::size_t j = first_fractional(lp.point, pattern_);
    if (j == lp.point.size()) {
      best_ = lp;
      if (stop_at_first_) done_ = true;
      return;
    }
    const BigInt down = floor_rat(lp.point[j]);
    const std::size_t n = sys.dimension();
    LinearSystem left = sys;
    left.add_le(unit(n, j), Rat(down));
    run(left);
    LinearSystem right = sys;
    right.add_le(unit(n, j, -1), -Rat(down + 1));
    run(right);
  }

  const std::optional<LpOutcome>& best() const { return best_; }

 private:
  std::span<const Rat> objective_;
  const MixedPattern& pattern_;
  std::size_t node_cap_;
  bool stop_at_first_;
  bool done_ = false;
  std::size_t nodes_ = 0;
  std::optional<LpOutcome> best_;
};

void enumerate_projection(const LinearSystem& sys, std::span<const std::size_t> coords,
                          std::size_t level, IntVector& prefix, std::vector<IntVector>& out,
                          std::size_t cap) {
  if (level == coords.size()) {
    if (out.size() >= cap) {
      throw ResourceLimitError("integer enumeration exceeded " + std::to_string(cap) + " points");
    }
    out.push_back(prefix);
    return;
  }
  const std::size_t n = sys.dimension();
  const QVector dir = unit(n, coords[level]);
  const LpOutcome lo = lp_solve(sys, dir, Sense::kMinimize);
  if (lo.status == LpStatus::kInfeasible) return;
  const LpOutcome hi = lp_solve(sys, dir, Sense::kMaximize);
  if (!lo.optimal() || !hi.optimal()) {
    throw UnboundedSystemError("integer enumeration over an unbounded coordinate");
  }
  // Each integer in [lo, hi] is attained by the convex slice, so the fixed
  // system below stays feasible.
  for (BigInt v = ceil_rat(lo.value); v <= floor_rat(hi.value); ++v) {
    LinearSystem fixed = sys;
    fixed.add_eq(dir, Rat(v));
    prefix.push_back(v);
    enumerate_projection(fixed, coords, level + 1, prefix, out, cap);
    prefix.pop_back();
  }
}

}  // namespace

std::optional<QVector> mixed_feasible(const LinearSystem& sys, const MixedPattern& pattern,
                                      BoundsCheck check, std::size_t node_cap) {
  if (pattern.dimension() != sys.dimension()) throw DimensionError("mixed_feasible: pattern dimension");
  const LinearSystem closed = sys.closure();
  require_bounded(closed, pattern, check);
  const QVector zero = zeros(sys.dimension());
  BranchAndBound bb(zero, pattern, node_cap, /*stop_at_first=*/true);
  bb.run(closed);
  if (!bb.best()) return std::nullopt;
  return bb.best()->point;
}

LpOutcome integer_min(std::span<const Rat> objective, const LinearSystem& sys, BoundsCheck check,
                      std::size_t node_cap) {
  const std::size_t n = sys.dimension();
  if (objective.size() != n) throw DimensionError("integer_min: objective length mismatch");
  const MixedPattern pattern = MixedPattern::all_integer(n);
  LinearSystem work = sys.closure();
  require_bounded(work, pattern, check);

  BranchAndBound bb(objective, pattern, node_cap, /*stop_at_first=*/false);
  bb.run(work);
  if (!bb.best()) return {};
  const Rat value = bb.best()->value;

  // Lexicographic refinement among optima.
  work.add_eq(QVector(objective.begin(), objective.end()), value);
  IntVector point;
  for (std::size_t j = 0; j < n; ++j) {
    const QVector dir = unit(n, j);
    BranchAndBound coord(dir, pattern, node_cap, /*stop_at_first=*/false);
    coord.run(work);
    if (!coord.best()) throw InvariantViolation("integer_min: optimal face lost an integer point");
    const Rat v = coord.best()->value;
    point.push_back(v.numerator());
    work.add_eq(dir, v);
  }
  return {LpStatus::kOptimal, value, to_qvector(point)};
}

std::vector<IntVector> enumerate_integer_projection(const LinearSystem& sys,
                                                    std::span<const std::size_t> coords,
                                                    std::size_t cap) {
  std::vector<IntVector> out;
  IntVector prefix;
  enumerate_projection(sys.closure(), coords, 0, prefix, out, cap);
  return out;
}

std::vector<QVector> enumerate_integers(const LinearSystem& sys, std::size_t cap) {
  std::vector<std::size_t> coords(sys.dimension());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
  std::vector<QVector> out;
  for (const IntVector& w : enumerate_integer_projection(sys, coords, cap)) out.push_back(to_qvector(w));
  return out;
}

LinearSystem tighten_strict_rows(const LinearSystem& sys, const MixedPattern& pattern) {
  LinearSystem out(sys.dimension());
  for (const LinRow& r : sys.rows()) {
    if (r.relation != Relation::kLess) {
      out.add(r);
      continue;
    }
    BigInt scale = r.rhs.denominator();
    for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
      if (r.coeffs[j].sign() == 0) continue;
      if (!pattern.is_integer(j)) {
        throw std::invalid_argument("tighten_strict_rows: strict row touches a continuous coordinate");
      }
      scale = lcm(scale, r.coeffs[j].denominator());
    }
    QVector c = r.coeffs;
    for (Rat& q : c) q *= Rat(scale);
    const Rat b = r.rhs * Rat(scale);
    out.add_le(std::move(c), Rat(b.numerator() - 1));
  }
  return out;
}

}  // namespace bilevel
