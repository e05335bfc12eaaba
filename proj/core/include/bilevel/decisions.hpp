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

// Decision oracles over generalized bilevel problems.
//
// A GeneralizedProblem is an instance plus extra upper-level rows over
// (x, z), an optional fixed prefix of x, and an objective override. The
// oracles answer
//
//   decide_le(alpha):  is there a bilevel feasible point with value <= alpha?
//   decide_eq(v):      a bilevel feasible point with value exactly v, if any;
//
// and decide_le_pure(alpha), the same question with z integer. Note that
// decide_le(v*) is false when the infimum v* is not attained.

#ifndef BILEVEL_DECISIONS_HPP_
#define BILEVEL_DECISIONS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bilevel/cells.hpp"

namespace bilevel {

enum class Variant { kMixed, kPure };

struct GeneralizedProblem {
  Instance base;
  std::vector<LinRow> extra_rows;  // over (x, z)
  IntVector fixed_x_prefix;        // values of x_1 .. x_j
  QVector objective;               // over (x, z)
  Variant variant = Variant::kMixed;

  // The instance itself: no extras, objective (c, e).
  static GeneralizedProblem original(Instance inst, Variant variant = Variant::kMixed);

  std::size_t dimension() const { return base.dimension(); }
  // Extra rows plus one equality per fixed prefix entry.
  std::vector<LinRow> constraint_rows() const;
  // objective . (x, z)  rel  rhs.
  LinRow objective_row(Relation rel, const Rat& rhs) const;
  Rat value(const BilevelPoint& point) const;
  // Bilevel feasible for the base instance and inside every constraint row.
  bool feasible(const BilevelPoint& point) const;

  GeneralizedProblem with_row(LinRow row) const;
  GeneralizedProblem with_objective(QVector objective) const;
  GeneralizedProblem with_prefix(IntVector prefix) const;

  // Shapes of extras, prefix and objective. Throws DimensionError.
  void check() const;
};

struct Telemetry {
  std::uint64_t decision_queries = 0;
  // Queries spent bracketing the infimum (a subset of decision_queries).
  std::uint64_t infimum_queries = 0;
  std::uint64_t bisection_steps = 0;
  std::uint64_t reconstruction_steps = 0;
  std::uint64_t cells = 0;
};

// Oracle state for one base instance: cell machinery with its memo tables
// and the telemetry counters. Answers depend only on the arguments.
class DecisionContext {
 public:
  explicit DecisionContext(const Instance& inst, Limits limits = {});

  const Instance& instance() const { return cells_.instance(); }
  const Limits& limits() const { return cells_.limits(); }
  CellEnumerator& cells() { return cells_; }
  Telemetry& telemetry() { return telemetry_; }
  const Telemetry& telemetry() const { return telemetry_; }

  bool decide_le(const GeneralizedProblem& prob, const Rat& alpha);
  std::optional<BilevelPoint> decide_eq(const GeneralizedProblem& prob, const Rat& v);
  bool decide_le_pure(const GeneralizedProblem& prob, const Rat& alpha);

  // Lexicographically least valid cell of the problem with `rows` added,
  // together with a strictly interior region point.
  std::optional<std::pair<Cell, BilevelPoint>> first_cell(const GeneralizedProblem& prob,
                                                          std::span<const LinRow> rows);

  // Follower optimum psi.x' at an integer leader decision (memoized).
  std::optional<Rat> follower_value(const IntVector& z);
  // Every point of the pure bilevel feasible set satisfying the problem's
  // constraint rows (and `rows`), in lexicographic (x, z) order.
  std::vector<BilevelPoint> pure_feasible_points(const GeneralizedProblem& prob,
                                                 std::span<const LinRow> rows = {});

 private:
  void check_same_base(const GeneralizedProblem& prob) const;
  // Upper-level system over (x, z) with the problem's rows and `rows`,
  // strict rows tightened for the all-integer lattice.
  LinearSystem pure_system(const GeneralizedProblem& prob, std::span<const LinRow> rows) const;
  void sync_cells();

  CellEnumerator cells_;
  Telemetry telemetry_;
  std::map<IntVector, std::optional<Rat>> follower_values_;
};

bool decide_le(const GeneralizedProblem& prob, const Rat& alpha);
std::optional<BilevelPoint> decide_eq(const GeneralizedProblem& prob, const Rat& v);
bool decide_le_pure(const GeneralizedProblem& prob, const Rat& alpha);

}  // namespace bilevel

#endif  // BILEVEL_DECISIONS_HPP_
