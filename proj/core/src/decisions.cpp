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

#include "bilevel/decisions.hpp"

#include <algorithm>
#include <stdexcept>

#include "bilevel/errors.hpp"

namespace bilevel {

namespace {

// Rows over (x, z) with z fixed, as rows over x.
LinearSystem specialize_z(std::span<const LinRow> rows, const Instance& inst, const QVector& z) {
  LinearSystem out(inst.n);
  for (const LinRow& r : rows) {
    QVector cx(r.coeffs.begin(), r.coeffs.begin() + static_cast<long>(inst.n));
    const std::span<const Rat> cz(r.coeffs.data() + inst.n, inst.d);
    out.add(std::move(cx), r.relation, r.rhs - dot(cz, z));
  }
  return out;
}

}  // namespace

GeneralizedProblem GeneralizedProblem::original(Instance inst, Variant variant) {
  GeneralizedProblem prob;
  prob.objective = inst.c;
  prob.objective.insert(prob.objective.end(), inst.e.begin(), inst.e.end());
  prob.base = std::move(inst);
  prob.variant = variant;
  return prob;
}

std::vector<LinRow> GeneralizedProblem::constraint_rows() const {
  std::vector<LinRow> rows = extra_rows;
  for (std::size_t k = 0; k < fixed_x_prefix.size(); ++k) {
    rows.push_back(LinRow{unit(dimension(), k), Rat(fixed_x_prefix[k]), Relation::kEqual});
  }
  return rows;
}

LinRow GeneralizedProblem::objective_row(Relation rel, const Rat& rhs) const {
  return LinRow{objective, rhs, rel};
}

Rat GeneralizedProblem::value(const BilevelPoint& point) const { return dot(objective, point.joined()); }

bool GeneralizedProblem::feasible(const BilevelPoint& point) const {
  if (!bilevel_feasible(base, point)) return false;
  if (variant == Variant::kPure && !is_integral(point.z)) return false;
  const QVector joined = point.joined();
  const auto rows = constraint_rows();
  return std::all_of(rows.begin(), rows.end(), [&](const LinRow& r) { return r.satisfied_by(joined); });
}

GeneralizedProblem GeneralizedProblem::with_row(LinRow row) const {
  GeneralizedProblem out = *this;
  out.extra_rows.push_back(std::move(row));
  return out;
}

GeneralizedProblem GeneralizedProblem::with_objective(QVector obj) const {
  GeneralizedProblem out = *this;
  out.objective = std::move(obj);
  return out;
}

GeneralizedProblem GeneralizedProblem::with_prefix(IntVector prefix) const {
  GeneralizedProblem out = *this;
  out.fixed_x_prefix = std::move(prefix);
  return out;
}

void GeneralizedProblem::check() const {
  if (objective.size() != dimension()) throw DimensionError("objective is not over (x, z)");
  if (fixed_x_prefix.size() > base.n) throw DimensionError("fixed prefix longer than x");
  for (const LinRow& r : extra_rows) {
    if (r.coeffs.size() != dimension()) throw DimensionError("extra row is not over (x, z)");
  }
}

DecisionContext::DecisionContext(const Instance& inst, Limits limits) : cells_(inst, std::move(limits)) {}

void DecisionContext::check_same_base(const GeneralizedProblem& prob) const {
  prob.check();
  if (!(prob.base == instance())) throw std::invalid_argument("problem belongs to a different instance");
}

void DecisionContext::sync_cells() { telemetry_.cells = cells_.cells_visited(); }

std::optional<std::pair<Cell, BilevelPoint>> DecisionContext::first_cell(const GeneralizedProblem& prob,
                                                                         std::span<const LinRow> rows) {
  check_same_base(prob);
  std::vector<LinRow> extras = prob.constraint_rows();
  extras.insert(extras.end(), rows.begin(), rows.end());
  std::optional<std::pair<Cell, BilevelPoint>> found;
  cells_.for_each_valid(extras, [&](const Cell& cell, const QVector& z) {
    found.emplace(cell, BilevelPoint{cell.x, z});
    return false;
  });
  sync_cells();
  return found;
}

bool DecisionContext::decide_le(const GeneralizedProblem& prob, const Rat& alpha) {
  if (prob.variant != Variant::kMixed) throw std::invalid_argument("decide_le: problem is not mixed");
  ++telemetry_.decision_queries;
  const LinRow bound = prob.objective_row(Relation::kLessEqual, alpha);
  return first_cell(prob, std::span(&bound, 1)).has_value();
}

std::optional<BilevelPoint> DecisionContext::decide_eq(const GeneralizedProblem& prob, const Rat& v) {
  ++telemetry_.decision_queries;
  const LinRow level = prob.objective_row(Relation::kEqual, v);
  if (prob.variant == Variant::kPure) {
    auto pts = pure_feasible_points(prob, std::span(&level, 1));
    if (pts.empty()) return std::nullopt;
    return pts.front();
  }
  auto found = first_cell(prob, std::span(&level, 1));
  if (!found) return std::nullopt;
  return std::move(found->second);
}

std::optional<Rat> DecisionContext::follower_value(const IntVector& z) {
  if (auto it = follower_values_.find(z); it != follower_values_.end()) return it->second;
  const LpOutcome best = integer_min(instance().psi, follower_system_at(instance(), to_qvector(z)),
                                     BoundsCheck::kAssumeBounded, limits().node_cap);
  std::optional<Rat> value;
  if (best.optimal()) value = best.value;
  follower_values_.emplace(z, value);
  return value;
}

LinearSystem DecisionContext::pure_system(const GeneralizedProblem& prob,
                                          std::span<const LinRow> rows) const {
  const Instance& inst = instance();
  LinearSystem sys = upper_system(inst);
  for (const LinRow& r : prob.constraint_rows()) sys.add(r);
  for (const LinRow& r : rows) sys.add(r);
  return tighten_strict_rows(sys, MixedPattern::all_integer(inst.dimension()));
}

bool DecisionContext::decide_le_pure(const GeneralizedProblem& prob, const Rat& alpha) {
  check_same_base(prob);
  if (prob.variant != Variant::kPure) throw std::invalid_argument("decide_le_pure: problem is not pure");
  ++telemetry_.decision_queries;
  const Instance& inst = instance();
  const LinRow bound = prob.objective_row(Relation::kLessEqual, alpha);
  const LinearSystem sys = pure_system(prob, std::span(&bound, 1));
  std::vector<std::size_t> z_coords(inst.d);
  for (std::size_t j = 0; j < inst.d; ++j) z_coords[j] = inst.n + j;
  for (const IntVector& z : enumerate_integer_projection(sys, z_coords, limits().enumeration_cap)) {
    const auto phi = follower_value(z);
    if (!phi) continue;
    const QVector zq = to_qvector(z);
    LinearSystem xs = follower_system_at(inst, zq);
    xs.add_le(inst.psi, *phi);
    xs.append(specialize_z(sys.rows(), inst, zq));
    if (mixed_feasible(xs, MixedPattern::all_integer(inst.n), BoundsCheck::kAssumeBounded,
                       limits().node_cap)) {
      return true;
    }
  }
  return false;
}

std::vector<BilevelPoint> DecisionContext::pure_feasible_points(const GeneralizedProblem& prob,
                                                                std::span<const LinRow> rows) {
  check_same_base(prob);
  const Instance& inst = instance();
  const LinearSystem sys = pure_system(prob, rows);
  std::vector<std::size_t> z_coords(inst.d);
  for (std::size_t j = 0; j < inst.d; ++j) z_coords[j] = inst.n + j;
  std::vector<BilevelPoint> out;
  for (const IntVector& z : enumerate_integer_projection(sys, z_coords, limits().enumeration_cap)) {
    const auto phi = follower_value(z);
    if (!phi) continue;
    const QVector zq = to_qvector(z);
    LinearSystem xs = follower_system_at(inst, zq);
    xs.add_le(inst.psi, *phi);
    xs.append(specialize_z(sys.rows(), inst, zq));
    for (const QVector& x : enumerate_integers(xs, limits().enumeration_cap)) {
      out.push_back(BilevelPoint{to_intvector(x), zq});
      if (out.size() > limits().enumeration_cap) {
        throw ResourceLimitError("pure feasible set exceeds the enumeration cap");
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const BilevelPoint& a, const BilevelPoint& b) {
    return a.joined() < b.joined();
  });
  return out;
}

bool decide_le(const GeneralizedProblem& prob, const Rat& alpha) {
  DecisionContext ctx(prob.base);
  return ctx.decide_le(prob, alpha);
}

std::optional<BilevelPoint> decide_eq(const GeneralizedProblem& prob, const Rat& v) {
  DecisionContext ctx(prob.base);
  return ctx.decide_eq(prob, v);
}

bool decide_le_pure(const GeneralizedProblem& prob, const Rat& alpha) {
  DecisionContext ctx(prob.base);
  return ctx.decide_le_pure(prob, alpha);
}

}  // namespace bilevel
