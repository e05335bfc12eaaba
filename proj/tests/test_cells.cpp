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
#include "invariants.hpp"
#include "support.hpp"

using namespace bilevel;
using bilevel::testing::ceiling_instance;

namespace {

Rat q(long p, long d) { return Rat(BigInt(p), BigInt(d)); }

}  // namespace

TEST_CASE("instance validation") {
  Instance in = ceiling_instance();
  CHECK_NOTHROW(in.validate());

  Instance shape = in;
  shape.u = {0, 1};
  try {
    shape.validate();
    FAIL("expected a shape error");
  } catch (const ValidationError& e) {
    CHECK(e.code() == "shape-mismatch");
  }

  Instance frac = in;
  frac.A(0, 0) = q(1, 2);
  try {
    frac.validate();
    FAIL("expected a data error");
  } catch (const ValidationError& e) {
    CHECK(e.code() == "nonintegral-data");
  }

  Instance open = in;
  open.C = QMatrix{{1}, {-1}};
  open.D = QMatrix{{0}, {0}};
  open.p = {1, 0};
  try {
    open.validate();
    FAIL("expected unbounded P");
  } catch (const ValidationError& e) {
    CHECK(e.code() == "unbounded-P");
  }

  Instance follower = in;
  follower.A = QMatrix{{-1}};
  follower.B = QMatrix{{-1}};
  follower.u = {0};
  try {
    follower.validate();
    FAIL("expected unbounded follower");
  } catch (const ValidationError& e) {
    CHECK(e.code() == "unbounded-follower");
  }
}

TEST_CASE("floor vectors") {
  const Instance in = ceiling_instance();
  CHECK(floor_rhs(in, QVector{q(1, 2)}) == IntVector{-1, 1, 0});
  CHECK(floor_rhs(in, QVector{0}) == IntVector{0, 1, 0});
  CHECK(floor_rhs(in, QVector{1}) == IntVector{-1, 1, 0});
}

TEST_CASE("cell validity on the ceiling instance") {
  const Instance in = ceiling_instance();
  CHECK(is_valid_cell(in, Cell{{1}, {-1, 1, 0}}));
  CHECK(is_valid_cell(in, Cell{{0}, {0, 1, 0}}));
  CHECK_FALSE(is_valid_cell(in, Cell{{1}, {0, 1, 0}}));
  // x = 0 is not follower-feasible once z > 0.
  CHECK_FALSE(is_valid_cell(in, Cell{{0}, {-1, 1, 0}}));

  // The region of (1, (-1, 1, 0)) is z in (0, 1].
  const LinearSystem region = cell_region(in, Cell{{1}, {-1, 1, 0}});
  CHECK(region.contains(QVector{1}));
  CHECK(region.contains(QVector{q(1, 1000)}));
  CHECK_FALSE(region.contains(QVector{0}));
}

TEST_CASE("cell enumeration on the ceiling instance") {
  const Instance in = ceiling_instance();
  const auto cells = enumerate_cells(in);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0] == Cell{{0}, {0, 1, 0}});
  CHECK(cells[1] == Cell{{1}, {-1, 1, 0}});

  Instance empty = in;
  empty.C = QMatrix{{0}, {1}, {-1}, {0}};
  empty.D = QMatrix{{1}, {0}, {0}, {1}};
  empty.p = {1, 1, 0, -1};
  CHECK(enumerate_cells(empty).empty());

  const GeneralizedProblem prob = GeneralizedProblem::original(in);
  const LinRow cut = prob.objective_row(Relation::kLessEqual, -1);
  CHECK(enumerate_cells(in, std::span(&cut, 1)).empty());
}

TEST_CASE("cell enumeration honours the cap") {
  Limits tiny;
  tiny.cell_cap = 1;
  CHECK_THROWS_AS(enumerate_cells(ceiling_instance(), {}, tiny), ResourceLimitError);
}

TEST_CASE("cell infima on the ceiling instance") {
  const Instance in = ceiling_instance();
  const QVector obj{-1, 1};
  const CellInfimum open = cell_infimum(in, Cell{{1}, {-1, 1, 0}}, obj);
  CHECK(open.inf == -1);
  CHECK_FALSE(open.attained);
  REQUIRE(open.witness);
  const Rat delta = pow2(-20);
  const Rat v = dot(obj, open.witness->joined());
  CHECK(v > -1);
  CHECK(v <= -1 + delta);
  CHECK(bilevel_feasible(in, *open.witness));

  const CellInfimum point = cell_infimum(in, Cell{{0}, {0, 1, 0}}, obj);
  CHECK(point.inf == 0);
  CHECK(point.attained);
  REQUIRE(point.witness);
  CHECK(*point.witness == BilevelPoint{{0}, {0}});

  const CellInfimum flipped = cell_infimum(in, Cell{{1}, {-1, 1, 0}}, QVector{1, 1});
  CHECK(flipped.inf == 1);
  CHECK_FALSE(flipped.attained);

  CHECK_THROWS_AS(cell_infimum(in, Cell{{5}, {7, 7, 7}}, obj), std::invalid_argument);
}

TEST_CASE("direct bilevel feasibility") {
  const Instance in = ceiling_instance();
  CHECK(bilevel_feasible(in, QVector{0}, QVector{0}));
  CHECK(bilevel_feasible(in, QVector{1}, QVector{q(1, 2)}));
  CHECK_FALSE(bilevel_feasible(in, QVector{1}, QVector{0}));
  CHECK_FALSE(bilevel_feasible(in, QVector{q(1, 2)}, QVector{q(1, 2)}));
  CHECK_FALSE(bilevel_feasible(in, QVector{1}, QVector{2}));
}

TEST_CASE("results do not depend on call history") {
  const Instance in = ceiling_instance();
  CellEnumerator cells(in);
  const GeneralizedProblem prob = GeneralizedProblem::original(in);
  const LinRow cut = prob.objective_row(Relation::kLessEqual, q(-1, 2));
  const auto first = cells.enumerate(std::span(&cut, 1));
  const auto all = cells.enumerate({});
  CHECK(cells.enumerate(std::span(&cut, 1)) == first);
  CHECK(first == std::vector<Cell>{Cell{{1}, {-1, 1, 0}}});
  CHECK(all.size() == 2);
}

TEST_CASE("sampled cell invariants on the ceiling instance") {
  std::mt19937_64 rng(41);
  const auto tally = bilevel::testing::check_cell_invariants(ceiling_instance(), rng, 400, 1, 1);
  for (const auto& f : tally.failures) INFO(f);
  CHECK(tally.failures.empty());
}

TEST_CASE("sampled cell invariants on random instances") {
  std::mt19937_64 rng(42);
  GeneratorOptions opt;
  for (int t = 0; t < 10; ++t) {
    const Instance in = random_instance(rng, opt);
    const auto tally = bilevel::testing::check_cell_invariants(in, rng, 100, opt.x_box, opt.z_box);
    for (const auto& f : tally.failures) MESSAGE(f);
    CHECK(tally.failures.empty());
  }
}
