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

// Seeded random instances for property tests, fuzzing and benchmarks.

#ifndef BILEVEL_GENERATOR_HPP_
#define BILEVEL_GENERATOR_HPP_

#include <cstdint>
#include <random>

#include "bilevel/cells.hpp"

namespace bilevel {

struct GeneratorOptions {
  std::size_t max_n = 2;
  std::size_t max_d = 2;
  std::size_t max_follower_rows = 3;  // random rows of (A, B, u)
  std::size_t max_upper_rows = 3;     // random rows of (C, D, p)
  long coefficient_range = 3;         // entries drawn from [-range, range]
  long x_box = 2;                     // |x_i| <= x_box, upper and follower
  long z_box = 2;                     // 0 <= z_j <= z_box
};

// Random rows plus box rows, so every result passes validate().
Instance random_instance(std::mt19937_64& rng, const GeneratorOptions& options = {});

}  // namespace bilevel

#endif  // BILEVEL_GENERATOR_HPP_
