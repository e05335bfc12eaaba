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

#include "bilevel/generator.hpp"

namespace bilevel {

namespace {

class Draw {
 public:
  explicit Draw(std::mt19937_64& rng) : rng_(rng) {}

  long between(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  QVector row(std::size_t len, long range) {
    QVector v;
    for (std::size_t i = 0; i < len; ++i) v.emplace_back(between(-range, range));
    return v;
  }

 private:
  std::mt19937_64& rng_;
};

}  // namespace

Instance random_instance(std::mt19937_64& rng, const GeneratorOptions& opt) {
  Draw draw(rng);
  Instance inst;
  inst.n = static_cast<std::size_t>(draw.between(1, static_cast<long>(opt.max_n)));
  inst.d = static_cast<std::size_t>(draw.between(1, static_cast<long>(opt.max_d)));
  const long k = opt.coefficient_range;

  std::vector<QVector> a, b, c, dz;
  QVector u, p;
  const auto follower_rows = static_cast<std::size_t>(draw.between(0, static_cast<long>(opt.max_follower_rows)));
  for (std::size_t i = 0; i < follower_rows; ++i) {
    a.push_back(draw.row(inst.n, k));
    b.push_back(draw.row(inst.d, k));
    u.emplace_back(draw.between(-k, k));
  }
  const auto upper_rows = static_cast<std::size_t>(draw.between(0, static_cast<long>(opt.max_upper_rows)));
  for (std::size_t i = 0; i < upper_rows; ++i) {
    c.push_back(draw.row(inst.n, k));
    dz.push_back(draw.row(inst.d, k));
    p.emplace_back(draw.between(0, k));
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (int sign : {1, -1}) {
      a.push_back(unit(inst.n, i, sign));
      b.push_back(zeros(inst.d));
      u.emplace_back(opt.x_box);
      c.push_back(unit(inst.n, i, sign));
      dz.push_back(zeros(inst.d));
      p.emplace_back(opt.x_box);
    }
  }
  for (std::size_t j = 0; j < inst.d; ++j) {
    c.push_back(zeros(inst.n));
    dz.push_back(unit(inst.d, j));
    p.emplace_back(opt.z_box);
  }

  inst.A = QMatrix::from_rows(a, inst.n);
  inst.B = QMatrix::from_rows(b, inst.d);
  inst.C = QMatrix::from_rows(c, inst.n);
  inst.D = QMatrix::from_rows(dz, inst.d);
  inst.u = std::move(u);
  inst.p = std::move(p);
  inst.c = draw.row(inst.n, k);
  inst.e = draw.row(inst.d, k);
  inst.psi = draw.row(inst.n, k);
  return inst;
}

}  // namespace bilevel
