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

// Top-level solvers.
//
// Mixed case (z continuous):
//   1. bracket the infimum v* between LP bounds of the upper-level
//      relaxation and bisect with decide_le until the bracket is narrower
//      than 1/(2 L^2), where L bounds the denominator of v*;
//   2. recover v* as the unique rational with denominator <= L in the
//      bracket (continued-fraction walk of the Stern-Brocot tree);
//   3. attainment: decide_eq(v*);
//   4. if attained, fix x* component by component (integer bisection),
//      then the floor vector r by successive infima rho_i, and take the
//      barycenter of affinely independent vertices of the closed final
//      region as z*;
//   5. otherwise optionally return an epsilon-optimal point.
//
// Pure case (z integer): integer bisection on v*, then lex-min x* and z*,
// cross-checked against a direct enumeration of the feasible set.

#ifndef BILEVEL_ENGINE_HPP_
#define BILEVEL_ENGINE_HPP_

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bilevel/decisions.hpp"

namespace bilevel {

enum class SolveStatus { kInfeasible, kAttained, kUnattained };

const char* to_string(SolveStatus s);

struct EpsSolution {
  BilevelPoint point;
  Rat value;
  Rat epsilon;
};

struct LexTrace {
  IntVector x_star;
  QVector rho;
  IntVector r;
  LinearSystem q_system;  // over z; strict upper floor rows included
  std::size_t k = 0;
  std::vector<QVector> vertices;
  QVector z_star;
  BigInt delta_denominator;  // k times the lcm of the vertex denominators
};

struct SolveReport {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<Rat> infimum;
  std::optional<BilevelPoint> solution;
  std::optional<EpsSolution> eps_solution;
  std::optional<LexTrace> trace;
  Telemetry telemetry;
};

// How an epsilon request is interpreted for the fallback point.
enum class EpsMode {
  kAdditive,        // value <= v* + eps
  kMultiplicative,  // value <= (1 + eps) v*, only when v* > 0
};

// LP minimum and maximum of the objective over the closed relaxation
// (upper rows and constraint rows, follower ignored). Throws
// InfeasibleRelaxation when that relaxation is empty.
std::pair<Rat, Rat> objective_bounds(const GeneralizedProblem& prob);

// Denominator bound for the infimum: the column-norm product of the
// z-coefficient rows (D, B, extras scaled to integer data), times the lcm of
// the objective's denominators.
BigInt denominator_cap(const GeneralizedProblem& prob);

// The unique rational with denominator <= cap in [lo, hi]. The smallest
// denominator rational in the interval is found by a continued-fraction
// walk; it is certified unique when hi - lo < 1 / (cap * q), q its
// denominator, which always holds once hi - lo < 1 / cap^2. Throws
// InvariantViolation when no admissible rational exists or uniqueness cannot
// be certified. `steps`, if given, receives the walk length.
Rat rational_reconstruct(const Rat& lo, const Rat& hi, const BigInt& cap,
                         std::uint64_t* steps = nullptr);

struct SearchStats {
  std::uint64_t queries = 0;
  std::uint64_t bisection_steps = 0;
  std::uint64_t reconstruction_steps = 0;
};

// Finds v = inf { t : le(t) } for a monotone predicate whose answer set is
// [v, inf) or (v, inf), given lo <= v <= hi and a denominator bound for v.
// Returns nullopt when le(hi) is false. Queries: le(hi), le(lo), then
// bisection to width < 1/(2 cap^2).
std::optional<Rat> bracket_and_reconstruct(const std::function<bool(const Rat&)>& le, Rat lo,
                                           Rat hi, const BigInt& cap, SearchStats& stats);

class Engine {
 public:
  explicit Engine(const Instance& inst, Limits limits = {});

  DecisionContext& context() { return ctx_; }

  // Exact infimum, or nullopt when the problem is infeasible.
  std::optional<Rat> infimum(const GeneralizedProblem& prob);
  LexTrace lex_extract(const GeneralizedProblem& prob, const Rat& v_star);
  EpsSolution eps_point(const GeneralizedProblem& prob, const Rat& v_star, const Rat& eps,
                        EpsMode mode = EpsMode::kAdditive);

  SolveReport solve_mixed(const GeneralizedProblem& prob, std::optional<Rat> eps = std::nullopt,
                          EpsMode mode = EpsMode::kAdditive);
  SolveReport solve_pure(const GeneralizedProblem& prob);
  SolveReport reference(const GeneralizedProblem& prob);

 private:
  // Smallest integer t with decide(t), given the relaxation bounds; nullopt
  // when there is none.
  std::optional<BigInt> integer_minimum(const GeneralizedProblem& prob, bool pure);
  bool decide(const GeneralizedProblem& prob, const Rat& alpha, bool pure);
  SolveReport pure_enumeration(const GeneralizedProblem& prob);

  DecisionContext ctx_;
};

SolveReport solve_mixed(const Instance& inst, std::optional<Rat> eps = std::nullopt);
SolveReport solve_mixed(const GeneralizedProblem& prob, std::optional<Rat> eps = std::nullopt);
SolveReport solve_pure(const Instance& inst);
SolveReport solve_pure(const GeneralizedProblem& prob);
std::optional<Rat> infimum(const GeneralizedProblem& prob);
LexTrace lex_extract(const GeneralizedProblem& prob, const Rat& v_star);
EpsSolution eps_point(const GeneralizedProblem& prob, const Rat& v_star, const Rat& eps);

// Independent brute-force solver. Mixed: every valid cell's infimum, the
// minimum over cells, and a lex-first optimal point. Pure: full enumeration
// of the feasible set.
SolveReport reference_oracle(const Instance& inst, Variant variant);
SolveReport reference_oracle(const GeneralizedProblem& prob);

}  // namespace bilevel

#endif  // BILEVEL_ENGINE_HPP_
