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

// Fixtures and brute-force oracles shared by the test suites. Nothing here
// calls into the solver's LP, lattice or cell code.

#ifndef BILEVEL_TESTS_SUPPORT_HPP_
#define BILEVEL_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bilevel/engine.hpp"

namespace bilevel::testing {

// min x' s.t. x' >= z, 0 <= x' <= 1, integer; upper level 0 <= z <= 1 and
// 0 <= x <= 1; objective -x + z. The follower answers x = ceil(z), so the
// feasible set is {(0,0)} plus {1} x (0,1].
inline Instance ceiling_instance() {
  Instance in;
  in.n = 1;
  in.d = 1;
  in.A = QMatrix{{-1}, {1}, {-1}};
  in.B = QMatrix{{-1}, {0}, {0}};
  in.u = {0, 1, 0};
  in.psi = {1};
  in.C = QMatrix{{0}, {1}, {-1}};
  in.D = QMatrix{{1}, {0}, {0}};
  in.p = {1, 1, 0};
  in.c = {-1};
  in.e = {1};
  return in;
}

inline Instance with_objective(Instance in, QVector c, QVector e) {
  in.c = std::move(c);
  in.e = std::move(e);
  return in;
}

inline std::string fixture(const std::string& name) { return std::string(BILEVEL_FIXTURE_DIR) + "/" + name; }

// Determinant by cofactor expansion along the first row.
inline Rat laplace_det(const std::vector<QVector>& m) {
  const std::size_t k = m.size();
  if (k == 0) return 1;
  if (k == 1) return m[0][0];
  Rat total = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<QVector> minor;
    for (std::size_t i = 1; i < k; ++i) {
      QVector row;
      for (std::size_t c = 0; c < k; ++c) {
        if (c != j) row.push_back(m[i][c]);
      }
      minor.push_back(std::move(row));
    }
    const Rat term = m[0][j] * laplace_det(minor);
    total += (j % 2 == 0) ? term : -term;
  }
  return total;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      f(idx);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

// Largest |det| over all square submatrices.
inline Rat max_subdeterminant(const QMatrix& m) {
  Rat best = 0;
  for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
    for_each_subset(m.rows(), k, [&](const std::vector<std::size_t>& rows) {
      for_each_subset(m.cols(), k, [&](const std::vector<std::size_t>& cols) {
        std::vector<QVector> s;
        for (std::size_t i : rows) {
          QVector r;
          for (std::size_t j : cols) r.push_back(m(i, j));
          s.push_back(std::move(r));
        }
        best = std::max(best, abs(laplace_det(s)));
      });
    });
  }
  return best;
}

// Every integer point of [lo, hi]^dim in lexicographic order.
inline std::vector<QVector> box_points(std::size_t dim, long lo, long hi) {
  std::vector<QVector> out;
  QVector cur(dim, Rat(lo));
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == dim) {
      out.push_back(cur);
      return;
    }
    for (long v = lo; v <= hi; ++v) {
      cur[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline bool satisfies(const LinearSystem& sys, const QVector& pt) {
  return std::all_of(sys.rows().begin(), sys.rows().end(), [&](const LinRow& r) { return r.satisfied_by(pt); });
}

// All p/q in [lo, hi] with 1 <= q <= cap, in lowest terms, ascending.
inline std::vector<Rat> scan_rationals(const Rat& lo, const Rat& hi, long cap) {
  std::vector<Rat> out;
  for (long q = 1; q <= cap; ++q) {
    const BigInt first = ceil_rat(lo * Rat(q));
    const BigInt last = floor_rat(hi * Rat(q));
    for (BigInt p = first; p <= last; ++p) out.emplace_back(p, BigInt(q));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Follower optimum at z by scanning integer x' in a box that contains every
// follower-feasible point (the caller supplies the box).
inline std::optional<Rat> brute_follower_value(const Instance& in, const QVector& z, long box) {
  std::optional<Rat> best;
  for (const QVector& x : box_points(in.n, -box, box)) {
    bool ok = true;
    for (std::size_t i = 0; i < in.m() && ok; ++i) {
      ok = dot(in.A.row(i), x) <= dot(in.B.row(i), z) + in.u[i];
    }
    if (!ok) continue;
    const Rat v = dot(in.psi, x);
    if (!best || v < *best) best = v;
  }
  return best;
}

inline bool brute_bilevel_feasible(const Instance& in, const QVector& x, const QVector& z, long box) {
  for (const Rat& q : z) {
    if (q.sign() < 0) return false;
  }
  for (std::size_t i = 0; i < in.h(); ++i) {
    if (dot(in.C.row(i), x) + dot(in.D.row(i), z) > in.p[i]) return false;
  }
  for (std::size_t i = 0; i < in.m(); ++i) {
    if (dot(in.A.row(i), x) > dot(in.B.row(i), z) + in.u[i]) return false;
  }
  const auto phi = brute_follower_value(in, z, box);
  return phi && *phi == dot(in.psi, x);
}

// Pure feasible set by brute force over a box of x and z, lexicographic.
inline std::vector<BilevelPoint> brute_pure_points(const Instance& in, long x_box, long z_box) {
  std::vector<BilevelPoint> out;
  for (const QVector& x : box_points(in.n, -x_box, x_box)) {
    for (const QVector& z : box_points(in.d, 0, z_box)) {
      if (brute_bilevel_feasible(in, x, z, x_box)) out.push_back({to_intvector(x), z});
    }
  }
  return out;
}

inline QVector random_rational_vector(std::mt19937_64& rng, std::size_t dim, long lo, long hi, long den) {
  std::uniform_int_distribution<long> num(lo * den, hi * den);
  QVector v;
  for (std::size_t i = 0; i < dim; ++i) v.emplace_back(BigInt(num(rng)), BigInt(den));
  return v;
}

}  // namespace bilevel::testing

#endif  // BILEVEL_TESTS_SUPPORT_HPP_
