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

#include <random>

#include "bilevel/errors.hpp"
#include "bilevel/generator.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bilevel;
using bilevel::testing::ceiling_instance;
using bilevel::testing::scan_rationals;
using bilevel::testing::with_objective;

namespace {

Rat q(long p, long d) { return Rat(BigInt(p), BigInt(d)); }

GeneralizedProblem mixed(const Instance& in) { return GeneralizedProblem::original(in); }
GeneralizedProblem pure(const Instance& in) { return GeneralizedProblem::original(in, Variant::kPure); }

// Upper level forces x = 1 and z = 0, but the follower always answers 0.
Instance forced_conflict() {
  Instance in;
  in.n = 1;
  in.d = 1;
  in.A = QMatrix{{1}, {-1}};
  in.B = QMatrix{{0}, {0}};
  in.u = {1, 0};
  in.psi = {1};
  in.C = QMatrix{{-1}, {1}, {0}};
  in.D = QMatrix{{0}, {0}, {1}};
  in.p = {-1, 1, 0};
  in.c = {1};
  in.e = {1};
  return in;
}

Instance contradictory_upper() {
  Instance in = ceiling_instance();
  in.C = QMatrix{{0}, {1}, {-1}, {0}};
  in.D = QMatrix{{1}, {0}, {0}, {1}};
  in.p = {1, 1, 0, -1};
  return in;
}

// Smallest k with 2^k >= x, for x > 0.
long ceil_log2(const Rat& x) {
  long k = 0;
  while (pow2(k) < x) ++k;
  while (pow2(k - 1) >= x) --k;
  return k;
}

}  // namespace

TEST_CASE("objective bounds") {
  const auto b = objective_bounds(mixed(ceiling_instance()));
  CHECK(b.first == -1);
  CHECK(b.second == 1);
  const auto z = objective_bounds(mixed(with_objective(ceiling_instance(), {0}, {0})));
  CHECK(z.first == 0);
  CHECK(z.second == 0);
  CHECK_THROWS_AS(objective_bounds(mixed(contradictory_upper())), InfeasibleRelaxation);
}

TEST_CASE("denominator caps") {
  const auto prob = mixed(ceiling_instance());
  CHECK(denominator_cap(prob) == 2);
  Instance flat = ceiling_instance();
  flat.B = QMatrix{{0}, {0}, {0}};
  flat.D = QMatrix{{0}, {0}, {0}};
  CHECK(denominator_cap(mixed(flat)) == 1);
  CHECK(denominator_cap(prob.with_row(LinRow{{0, 3}, 2, Relation::kLessEqual})) == 4);
  // Rational rows are scaled to integer data first: z <= 1/2 becomes 2z <= 1.
  CHECK(denominator_cap(prob.with_row(LinRow{{0, 1}, q(1, 2), Relation::kLessEqual})) == 3);
  // Objective denominators multiply in.
  CHECK(denominator_cap(prob.with_objective({q(1, 3), 1})) == 6);
}

TEST_CASE("rational reconstruction") {
  CHECK(rational_reconstruct(q(21, 50), q(43, 100), 10) == q(3, 7));
  CHECK(scan_rationals(q(21, 50), q(43, 100), 10) == std::vector<Rat>{q(3, 7)});
  CHECK(rational_reconstruct(q(1, 3), q(1, 3), 3) == q(1, 3));
  CHECK(rational_reconstruct(q(1, 3), q(1, 3), 1000) == q(1, 3));
  CHECK(rational_reconstruct(q(-101, 100), q(-99, 100), 2) == -1);
  CHECK_THROWS_AS(rational_reconstruct(q(41, 100), q(42, 100), 2), InvariantViolation);
  CHECK_THROWS_AS(rational_reconstruct(0, 1, 1), InvariantViolation);
  CHECK_THROWS_AS(rational_reconstruct(1, 0, 5), std::invalid_argument);
  std::uint64_t steps = 0;
  rational_reconstruct(q(21, 50), q(43, 100), 10, &steps);
  CHECK(steps >= 2);
}

TEST_CASE("reconstruction matches a scan of all small-denominator rationals") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<long> cap_pick(1, 30), num(-200, 200), den(1, 30);
  for (int t = 0; t < 500; ++t) {
    const long cap = cap_pick(rng);
    const Rat target(BigInt(num(rng)), BigInt(den(rng)));
    if (target.denominator() > cap) continue;
    // Any bracket of width < 1/cap^2 around the target.
    const Rat w = Rat(BigInt(1), BigInt(2 * cap * cap));
    const Rat lo = target - w * q(1, 3);
    const Rat hi = target + w * q(1, 2);
    const auto all = scan_rationals(lo, hi, cap);
    REQUIRE(all.size() == 1);
    CHECK(rational_reconstruct(lo, hi, cap) == all.front());
    CHECK(all.front() == target);
  }
}

TEST_CASE("bracket search finds hidden rationals within the query bound") {
  std::mt19937_64 rng(62);
  std::uniform_int_distribution<long> den(1, 10000);
  for (int t = 0; t < 200; ++t) {
    const long qd = den(rng);
    const long pn = std::uniform_int_distribution<long>(0, qd)(rng);
    const Rat hidden{BigInt(pn), BigInt(qd)};
    for (bool closed : {true, false}) {
      SearchStats stats;
      const auto le = [&](const Rat& a) { return closed ? hidden <= a : hidden < a; };
      const auto got = bracket_and_reconstruct(le, 0, 1, 10000, stats);
      REQUIRE(got);
      CHECK(*got == hidden);
      CHECK(stats.queries <= 28 + 3);
    }
  }
  SearchStats stats;
  CHECK_FALSE(bracket_and_reconstruct([](const Rat&) { return false; }, 0, 1, 10, stats));
  CHECK(stats.queries == 1);
}

TEST_CASE("infimum") {
  CHECK(infimum(mixed(ceiling_instance())) == std::optional<Rat>(-1));
  CHECK(infimum(mixed(with_objective(ceiling_instance(), {1}, {1}))) == std::optional<Rat>(0));
  const auto cut = mixed(with_objective(ceiling_instance(), {-1}, {2}))
                       .with_row(LinRow{{0, -1}, q(-1, 2), Relation::kLessEqual});
  CHECK(infimum(cut) == std::optional<Rat>(0));
  CHECK_FALSE(infimum(mixed(contradictory_upper())));
  CHECK_FALSE(infimum(mixed(forced_conflict())));
}

TEST_CASE("solving the ceiling instance") {
  const auto report = solve_mixed(ceiling_instance(), q(1, 8));
  CHECK(report.status == SolveStatus::kUnattained);
  CHECK(report.infimum == std::optional<Rat>(-1));
  CHECK_FALSE(report.solution);
  REQUIRE(report.eps_solution);
  CHECK(report.eps_solution->value <= q(-7, 8));
  CHECK(bilevel_feasible(ceiling_instance(), report.eps_solution->point));
  CHECK(report.eps_solution->point.x == IntVector{1});

  const auto flipped = solve_mixed(with_objective(ceiling_instance(), {1}, {1}));
  CHECK(flipped.status == SolveStatus::kAttained);
  CHECK(flipped.infimum == std::optional<Rat>(0));
  REQUIRE(flipped.solution);
  CHECK(*flipped.solution == BilevelPoint{{0}, {0}});

  CHECK(solve_mixed(contradictory_upper()).status == SolveStatus::kInfeasible);
  CHECK(solve_mixed(forced_conflict()).status == SolveStatus::kInfeasible);
}

TEST_CASE("unattained reports bracket the infimum") {
  const auto prob = mixed(ceiling_instance());
  const auto report = solve_mixed(prob);
  REQUIRE(report.infimum);
  const BigInt cap = denominator_cap(prob);
  const Rat gamma(BigInt(1), 2 * cap * cap);
  CHECK_FALSE(decide_eq(prob, *report.infimum));
  CHECK(decide_le(prob, *report.infimum + gamma));
  CHECK_FALSE(decide_le(prob, *report.infimum - gamma));
}

TEST_CASE("lexicographic extraction traces") {
  const auto flipped = mixed(with_objective(ceiling_instance(), {1}, {1}));
  const LexTrace a = lex_extract(flipped, 0);
  CHECK(a.x_star == IntVector{0});
  CHECK(a.rho == QVector{0, 1, 0});
  CHECK(a.r == IntVector{0, 1, 0});
  CHECK(a.k == 1);
  CHECK(a.z_star == QVector{0});
  CHECK(a.delta_denominator == 1);

  const auto cut = mixed(ceiling_instance()).with_row(LinRow{{0, -1}, q(-1, 2), Relation::kLessEqual});
  const LexTrace b = lex_extract(cut, q(-1, 2));
  CHECK(b.x_star == IntVector{1});
  // The level row -x + z = -1/2 pins z = 1/2, so rho_1 = -1/2.
  CHECK(b.rho.front() == q(-1, 2));
  CHECK(b.r == IntVector{-1, 1, 0});
  CHECK(b.z_star == QVector{q(1, 2)});
  for (const LinRow& row : b.q_system.rows()) CHECK(row.satisfied_by(b.z_star));
  CHECK(b.delta_denominator % b.z_star.front().denominator() == 0);

  CHECK_THROWS_AS(lex_extract(mixed(ceiling_instance()), -1), InvariantViolation);
}

TEST_CASE("lexicographic extraction on a full-dimensional optimal face") {
  // With objective -x the optimum -1 is attained on all of {1} x (0, 1].
  const auto prob = mixed(with_objective(ceiling_instance(), {-1}, {0}));
  const auto report = solve_mixed(prob);
  REQUIRE(report.status == SolveStatus::kAttained);
  REQUIRE(report.trace);
  CHECK(report.trace->k == 2);
  CHECK(report.trace->z_star == QVector{q(1, 2)});
  CHECK(report.trace->delta_denominator == 2);
  for (const LinRow& row : report.trace->q_system.rows()) CHECK(row.satisfied_by(report.trace->z_star));
}

TEST_CASE("epsilon points") {
  const auto prob = mixed(ceiling_instance());
  const EpsSolution a = eps_point(prob, -1, q(1, 8));
  CHECK(a.value <= q(-7, 8));
  CHECK(bilevel_feasible(ceiling_instance(), a.point));
  const auto flipped = mixed(with_objective(ceiling_instance(), {1}, {1}));
  const EpsSolution b = eps_point(flipped, 0, 1);
  CHECK(b.value <= 1);
  CHECK(b.point == BilevelPoint{{0}, {0}});
  const EpsSolution c = eps_point(prob, -1, 2);
  CHECK(c.value <= 1);
  CHECK(bilevel_feasible(ceiling_instance(), c.point));
  CHECK_THROWS_AS(eps_point(prob, -1, 0), std::invalid_argument);

  Engine engine(ceiling_instance());
  CHECK_THROWS_AS(engine.eps_point(prob, -1, q(1, 2), EpsMode::kMultiplicative), std::invalid_argument);
  const Instance flipped_in = with_objective(ceiling_instance(), {1}, {1});
  const auto shifted = mixed(flipped_in);
  Engine flipped_engine(flipped_in);
  const EpsSolution m = flipped_engine.eps_point(shifted.with_row(LinRow{{-1, 0}, -1, Relation::kLessEqual}), 1,
                                         q(1, 4), EpsMode::kMultiplicative);
  CHECK(m.value <= q(5, 4));
}

TEST_CASE("pure solver") {
  const auto a = solve_pure(ceiling_instance());
  CHECK(a.status == SolveStatus::kAttained);
  CHECK(a.infimum == std::optional<Rat>(0));
  REQUIRE(a.solution);
  CHECK(*a.solution == BilevelPoint{{0}, {0}});

  const auto b = solve_pure(with_objective(ceiling_instance(), {1}, {1}));
  CHECK(b.infimum == std::optional<Rat>(0));
  CHECK(*b.solution == BilevelPoint{{0}, {0}});

  CHECK(solve_pure(forced_conflict()).status == SolveStatus::kInfeasible);
  CHECK(solve_pure(contradictory_upper()).status == SolveStatus::kInfeasible);
  CHECK_THROWS_AS(solve_pure(pure(ceiling_instance()).with_objective({q(1, 2), 1})), std::invalid_argument);
}

TEST_CASE("reference oracle on the ceiling instance") {
  const auto a = reference_oracle(ceiling_instance(), Variant::kMixed);
  CHECK(a.status == SolveStatus::kUnattained);
  CHECK(a.infimum == std::optional<Rat>(-1));
  const auto b = reference_oracle(with_objective(ceiling_instance(), {1}, {1}), Variant::kMixed);
  CHECK(b.status == SolveStatus::kAttained);
  CHECK(b.infimum == std::optional<Rat>(0));
  CHECK(*b.solution == BilevelPoint{{0}, {0}});
  const auto c = reference_oracle(ceiling_instance(), Variant::kPure);
  CHECK(c.status == SolveStatus::kAttained);
  CHECK(c.infimum == std::optional<Rat>(0));
  CHECK(*c.solution == BilevelPoint{{0}, {0}});
}

TEST_CASE("search and reference oracle agree on random instances") {
  std::mt19937_64 rng(63);
  int attained = 0, unattained = 0;
  for (int t = 0; t < 60; ++t) {
    const Instance in = random_instance(rng);
    const auto prob = mixed(in);
    Engine engine(in);
    const SolveReport s = engine.solve_mixed(prob, q(1, 16));
    const SolveReport o = reference_oracle(prob);
    CHECK(s.status == o.status);
    CHECK(s.infimum == o.infimum);
    if (s.status == SolveStatus::kInfeasible) continue;
    REQUIRE(s.infimum);
    const BigInt cap = denominator_cap(prob);
    CHECK(s.infimum->denominator() <= cap);
    const Rat gamma(BigInt(1), 2 * cap * cap);
    CHECK_FALSE(decide_le(prob, *s.infimum - gamma));
    CHECK(decide_le(prob, *s.infimum + gamma));

    const auto bounds = objective_bounds(prob);
    const Rat width = (bounds.second - bounds.first) * Rat(2 * cap * cap);
    const long bound = width.sign() > 0 ? ceil_log2(width) + 3 : 3;
    CHECK(static_cast<long>(s.telemetry.infimum_queries) <= bound);

    if (s.status == SolveStatus::kAttained) {
      ++attained;
      REQUIRE(s.solution);
      REQUIRE(o.solution);
      CHECK(bilevel_feasible(in, *s.solution));
      CHECK(prob.value(*s.solution) == *s.infimum);
      CHECK(bilevel_feasible(in, *o.solution));
      CHECK(prob.value(*o.solution) == *o.infimum);
      CHECK_FALSE(o.solution->x < s.solution->x);
      REQUIRE(s.trace);
      for (std::size_t i = 0; i < s.trace->r.size(); ++i) CHECK(s.trace->r[i] == floor_rat(s.trace->rho[i]));
      for (const LinRow& row : s.trace->q_system.rows()) CHECK(row.satisfied_by(s.trace->z_star));
    } else {
      ++unattained;
      CHECK_FALSE(decide_eq(prob, *s.infimum));
      REQUIRE(s.eps_solution);
      CHECK(s.eps_solution->value <= *s.infimum + q(1, 16));
      CHECK(bilevel_feasible(in, s.eps_solution->point));
    }
  }
  CHECK(attained > 0);
}

TEST_CASE("pure drivers agree with brute force on random instances") {
  std::mt19937_64 rng(64);
  for (int t = 0; t < 60; ++t) {
    const Instance in = random_instance(rng);
    const SolveReport s = solve_pure(in);
    const auto brute = bilevel::testing::brute_pure_points(in, 2, 2);
    if (brute.empty()) {
      CHECK(s.status == SolveStatus::kInfeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::kAttained);
    const auto prob = pure(in);
    Rat best = prob.value(brute.front());
    for (const auto& p : brute) best = std::min(best, prob.value(p));
    CHECK(*s.infimum == best);
    CHECK(s.infimum->is_integer());
    for (const auto& p : brute) {
      if (prob.value(p) == best) {
        CHECK(*s.solution == p);
        break;
      }
    }
  }
}
