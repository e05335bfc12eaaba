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

// Dense two-phase primal simplex over exact rationals.
//
// Free variables are split as y = y+ - y-; each <= row gets a slack; rows
// whose slack cannot start basic get an artificial. Bland's rule (lowest
// index entering column, lowest basic index among ratio ties) guarantees
// termination.

#include <stdexcept>
#include <vector>

#include "bilevel/polyhedral.hpp"
#include "bilevel/errors.hpp"

namespace bilevel {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : a_(rows, std::vector<mpq_class>(cols)), b_(rows), basis_(rows), cost_(cols),
        allowed_(cols, true) {}

  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return cost_.size(); }

  mpq_class& at(std::size_t i, std::size_t j) { return a_[i][j]; }
  mpq_class& rhs(std::size_t i) { return b_[i]; }
  std::size_t& basic(std::size_t i) { return basis_[i]; }
  void forbid(std::size_t j) { allowed_[j] = false; }

  // Installs cost vector c and prices out the current basis.
  void set_costs(const std::vector<mpq_class>& c) {
    cost_ = c;
    neg_value_ = 0;
    for (std::size_t i = 0; i < rows(); ++i) {
      const mpq_class& cb = c[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < cols(); ++j) {
        if (sgn(a_[i][j]) != 0) cost_[j] -= cb * a_[i][j];
      }
      neg_value_ -= cb * b_[i];
    }
  }

  mpq_class value() const { return -neg_value_; }

  // Returns false if the objective is unbounded below.
  bool optimize() {
    for (;;) {
      std::size_t enter = cols();
      for (std::size_t j = 0; j < cols(); ++j) {
        if (allowed_[j] && sgn(cost_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols()) return true;
      std::size_t leave = rows();
      mpq_class best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (sgn(a_[i][enter]) <= 0) continue;
        mpq_class ratio = b_[i] / a_[i][enter];
        if (leave == rows() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const mpq_class p = a_[r][c];
    auto& prow = a_[r];
    for (auto& v : prow) {
      if (sgn(v) != 0) v /= p;
    }
    b_[r] /= p;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r || sgn(a_[i][c]) == 0) continue;
      const mpq_class f = a_[i][c];
      for (std::size_t j = 0; j < cols(); ++j) {
        if (sgn(prow[j]) != 0) a_[i][j] -= f * prow[j];
      }
      b_[i] -= f * b_[r];
    }
    if (sgn(cost_[c]) != 0) {
      const mpq_class f = cost_[c];
      for (std::size_t j = 0; j < cols(); ++j) {
        if (sgn(prow[j]) != 0) cost_[j] -= f * prow[j];
      }
      neg_value_ -= f * b_[r];
    }
    basis_[r] = c;
  }

  void erase_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<long>(r));
    b_.erase(b_.begin() + static_cast<long>(r));
    basis_.erase(basis_.begin() + static_cast<long>(r));
  }

  std::vector<mpq_class> primal() const {
    std::vector<mpq_class> w(cols());
    for (std::size_t i = 0; i < rows(); ++i) w[basis_[i]] = b_[i];
    return w;
  }

 private:
  std::vector<std::vector<mpq_class>> a_;
  std::vector<mpq_class> b_;
  std::vector<std::size_t> basis_;
  std::vector<mpq_class> cost_;
  std::vector<bool> allowed_;
  mpq_class neg_value_ = 0;
};

bool all_zero(std::span<const Rat> v) {
  for (const Rat& q : v) {
    if (q.sign() != 0) return false;
  }
  return true;
}

Rat to_rat(const mpq_class& q) { return Rat(q.get_num(), q.get_den()); }

}  // namespace

LpOutcome lp_solve(const LinearSystem& sys, std::span<const Rat> objective, Sense sense) {
  const std::size_t n = sys.dimension();
  if (objective.size() != n) throw DimensionError("lp_solve: objective length mismatch");

  // Constant rows are decided up front; the rest enter the tableau.
  std::vector<const LinRow*> live;
  for (const LinRow& row : sys.rows()) {
    if (row.relation == Relation::kLess) {
      throw std::invalid_argument("lp_solve: strict rows are not allowed; use strict_feasible_point");
    }
    if (all_zero(row.coeffs)) {
      const bool ok = row.relation == Relation::kEqual ? row.rhs.sign() == 0 : row.rhs.sign() >= 0;
      if (!ok) return {};
      continue;
    }
    live.push_back(&row);
  }

  const std::size_t m = live.size();
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (const LinRow* row : live) {
    if (row->relation == Relation::kLessEqual) {
      ++slacks;
      if (row->rhs.sign() < 0) ++artificials;
    } else {
      ++artificials;
    }
  }
  const std::size_t structural = 2 * n;
  const std::size_t cols = structural + slacks + artificials;
  Tableau t(m, cols);

  std::size_t next_slack = structural;
  std::size_t next_art = structural + slacks;
  for (std::size_t i = 0; i < m; ++i) {
    const LinRow& row = *live[i];
    const bool flip = row.rhs.sign() < 0;
    for (std::size_t j = 0; j < n; ++j) {
      const mpq_class& a = row.coeffs[j].raw();
      if (sgn(a) == 0) continue;
      t.at(i, 2 * j) = flip ? mpq_class(-a) : a;
      t.at(i, 2 * j + 1) = flip ? a : mpq_class(-a);
    }
    t.rhs(i) = flip ? mpq_class(-row.rhs.raw()) : row.rhs.raw();
    if (row.relation == Relation::kLessEqual) {
      t.at(i, next_slack) = flip ? -1 : 1;
      if (!flip) t.basic(i) = next_slack;
      ++next_slack;
    }
    if (row.relation == Relation::kEqual || flip) {
      t.at(i, next_art) = 1;
      t.basic(i) = next_art;
      ++next_art;
    }
  }

  const std::size_t first_art = structural + slacks;
  if (artificials > 0) {
    std::vector<mpq_class> phase1(cols);
    for (std::size_t j = first_art; j < cols; ++j) phase1[j] = 1;
    t.set_costs(phase1);
    t.optimize();
    if (sgn(t.value()) > 0) return {};
    // Drive artificials out of the basis; rows where that is impossible
    // are linearly dependent on the others.
    for (std::size_t i = t.rows(); i-- > 0;) {
      if (t.basic(i) < first_art) continue;
      std::size_t c = first_art;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (sgn(t.at(i, j)) != 0) {
          c = j;
          break;
        }
      }
      if (c < first_art) {
        t.pivot(i, c);
      } else {
        t.erase_row(i);
      }
    }
    for (std::size_t j = first_art; j < cols; ++j) t.forbid(j);
  }

  std::vector<mpq_class> cost(cols);
  for (std::size_t j = 0; j < n; ++j) {
    const mpq_class c = sense == Sense::kMinimize ? objective[j].raw() : mpq_class(-objective[j].raw());
    cost[2 * j] = c;
    cost[2 * j + 1] = -c;
  }
  t.set_costs(cost);
  if (!t.optimize()) return {LpStatus::kUnbounded, Rat(0), {}};

  const auto w = t.primal();
  LpOutcome out;
  out.status = LpStatus::kOptimal;
  out.point.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.point.push_back(to_rat(w[2 * j] - w[2 * j + 1]));
  out.value = dot(objective, out.point);
  return out;
}

}  // namespace bilevel
