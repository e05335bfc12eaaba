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

// Integer and mixed-integer feasibility over bounded polyhedra.
//
// Branch-and-bound with exact LP relaxations: branch on the lowest-index
// fractional integer coordinate, down branch first.

#ifndef BILEVEL_LATTICE_HPP_
#define BILEVEL_LATTICE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bilevel/polyhedral.hpp"
#include "bilevel/rational.hpp"

namespace bilevel {

class MixedPattern {
 public:
  explicit MixedPattern(std::size_t dimension) : integer_(dimension, false) {}
  // Throws DimensionError for indices outside [0, dimension).
  MixedPattern(std::size_t dimension, std::span<const std::size_t> integer_coords);

  static MixedPattern all_integer(std::size_t dimension);
  // Coordinates [first, first + count) integer.
  static MixedPattern range(std::size_t dimension, std::size_t first, std::size_t count);

  std::size_t dimension() const { return integer_.size(); }
  bool is_integer(std::size_t i) const { return integer_[i]; }
  std::vector<std::size_t> integer_coords() const;

 private:
  std::vector<bool> integer_;
};

constexpr std::size_t kDefaultNodeCap = 1'000'000;

// Callers that validated boundedness once (for example at instance
// construction) may skip the per-call recession test.
enum class BoundsCheck { kVerify, kAssumeBounded };
constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// A point of the closed system whose pattern coordinates are integer. The
// projection onto those coordinates must be bounded (checked up front;
// UnboundedSystemError otherwise). ResourceLimitError past `node_cap`.
std::optional<QVector> mixed_feasible(const LinearSystem& sys, const MixedPattern& pattern,
                                      BoundsCheck check = BoundsCheck::kVerify,
                                      std::size_t node_cap = kDefaultNodeCap);

// Minimum of objective over the integer points of a bounded closed system.
// The returned point is the lexicographically smallest integer optimum.
// Status is kOptimal or kInfeasible.
LpOutcome integer_min(std::span<const Rat> objective, const LinearSystem& sys,
                      BoundsCheck check = BoundsCheck::kVerify,
                      std::size_t node_cap = kDefaultNodeCap);

// All integer points, in lexicographic order. ResourceLimitError past `cap`.
std::vector<QVector> enumerate_integers(const LinearSystem& sys,
                                        std::size_t cap = kDefaultEnumerationCap);

// All integer vectors w such that some point of the closed system has
// coordinates `coords` equal to w, in lexicographic order.
std::vector<IntVector> enumerate_integer_projection(const LinearSystem& sys,
                                                    std::span<const std::size_t> coords,
                                                    std::size_t cap = kDefaultEnumerationCap);

// Rewrites strict rows for use over all-integer points: with the row scaled
// to integer data, a.y < b becomes a.y <= ceil(b) - 1. Rows whose
// coefficients vanish on non-integer coordinates are the only ones that
// change; other strict rows are a std::invalid_argument.
LinearSystem tighten_strict_rows(const LinearSystem& sys, const MixedPattern& pattern);

}  // namespace bilevel

#endif  // BILEVEL_LATTICE_HPP_
