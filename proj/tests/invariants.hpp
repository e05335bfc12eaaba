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

// Sampled invariants of the cell decomposition on one instance.

#ifndef BILEVEL_TESTS_INVARIANTS_HPP_
#define BILEVEL_TESTS_INVARIANTS_HPP_

#include <random>
#include <string>
#include <vector>

#include "support.hpp"

namespace bilevel::testing {

struct InvariantTally {
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures.size() < 20) failures.push_back(what);
  }
};

// Follower-feasible integer points in the box [-box, box]^n for right-hand
// side `rhs`.
inline std::vector<QVector> follower_points(const Instance& in, const QVector& rhs, long box) {
  std::vector<QVector> out;
  for (const QVector& x : box_points(in.n, -box, box)) {
    bool ok = true;
    for (std::size_t i = 0; i < in.m() && ok; ++i) ok = dot(in.A.row(i), x) <= rhs[i];
    if (ok) out.push_back(x);
  }
  return out;
}

// `samples` random (x, z) with x in [-x_box, x_box]^n and z in [0, z_box]^d
// on a grid of small denominators, so region boundaries are hit often.
inline InvariantTally check_cell_invariants(const Instance& in, std::mt19937_64& rng, std::size_t samples,
                                            long x_box, long z_box) {
  InvariantTally tally;
  CellEnumerator cells(in);
  const GeneralizedProblem prob = GeneralizedProblem::original(in);
  std::uniform_int_distribution<long> xs(-x_box, x_box);
  std::uniform_int_distribution<int> den_pick(0, 4);
  const long dens[] = {1, 2, 3, 4, 6};

  for (std::size_t s = 0; s < samples; ++s) {
    QVector x(in.n);
    for (auto& q : x) q = xs(rng);
    const long den = dens[den_pick(rng)];
    const QVector z = random_rational_vector(rng, in.d, 0, z_box, den);
    const IntVector r = floor_rhs(in, z);
    const Cell cell{to_intvector(x), r};
    const std::string tag = "x=" + to_string(x) + " z=" + to_string(z);
    ++tally.samples;

    // Partition: z lies in the region of its own floor vector and in no
    // neighbouring one.
    const bool upper_ok = satisfies(upper_system(in), [&] {
      QVector j = x;
      j.insert(j.end(), z.begin(), z.end());
      return j;
    }());
    const LinearSystem region = cell_region(in, cell);
    tally.expect(region.contains(z) == upper_ok, "partition/own: " + tag);
    for (std::size_t i = 0; i < in.m(); ++i) {
      for (int step : {-1, 1}) {
        Cell other = cell;
        other.r[i] += step;
        tally.expect(!cell_region(in, other).contains(z), "partition/neighbour: " + tag);
      }
    }

    // Equivalence with the direct definition, itself checked by brute force.
    const bool direct = bilevel_feasible(in, x, z);
    tally.expect(direct == brute_bilevel_feasible(in, x, z, x_box), "bilevel_feasible vs brute: " + tag);
    const bool via_cell = upper_ok && cells.is_valid(cell, {});
    tally.expect(direct == via_cell, "cell equivalence: " + tag);

    // Constancy: at this z the follower's integer feasible set equals the
    // one determined by r alone.
    QVector rhs(in.m());
    for (std::size_t i = 0; i < in.m(); ++i) rhs[i] = dot(in.B.row(i), z) + in.u[i];
    tally.expect(follower_points(in, rhs, x_box) == follower_points(in, to_qvector(r), x_box),
                 "constancy: " + tag);

    // Per-cell infimum is a lower bound on every region point.
    if (via_cell) {
      const CellInfimum ci = cell_infimum(in, cell, prob.objective);
      tally.expect(ci.inf <= prob.value(BilevelPoint{cell.x, z}), "cell infimum lower bound: " + tag);
      if (ci.witness) {
        tally.expect(bilevel_feasible(in, *ci.witness), "cell witness feasible: " + tag);
        tally.expect(prob.value(*ci.witness) >= ci.inf, "cell witness above infimum: " + tag);
      }
    }
  }

  // Every enumerated cell is valid, its region point re-verifies, and the
  // floor vector of that point is the cell's own.
  for (const Cell& c : cells.enumerate({})) {
    const auto z = cells.valid_region_point(c, {});
    tally.expect(z.has_value(), "enumerated cell valid");
    if (!z) continue;
    tally.expect(floor_rhs(in, *z) == c.r, "region point floor vector");
    tally.expect(bilevel_feasible(in, to_qvector(c.x), *z), "region point bilevel feasible");
  }
  return tally;
}

}  // namespace bilevel::testing

#endif  // BILEVEL_TESTS_INVARIANTS_HPP_
