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

#include "bilevel/engine.hpp"

#include <stdexcept>

#include "bilevel/errors.hpp"

namespace bilevel {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kAttained: return "attained";
    case SolveStatus::kUnattained: return "unattained";
  }
  return "unknown";
}

namespace {

LinearSystem closed_relaxation(const GeneralizedProblem& prob) {
  LinearSystem sys = upper_system(prob.base);
  for (const LinRow& r : prob.constraint_rows()) sys.add(r);
  return sys.closure();
}

Telemetry since(const Telemetry& now, const Telemetry& start) {
  return {now.decision_queries - start.decision_queries, now.infimum_queries - start.infimum_queries,
          now.bisection_steps - start.bisection_steps,
          now.reconstruction_steps - start.reconstruction_steps, now.cells - start.cells};
}

Rat simplest_between(const Rat& lo, const Rat& hi, std::uint64_t& steps) {
  ++steps;
  const BigInt c = ceil_rat(lo);
  if (Rat(c) <= hi) return Rat(c);
  // floor(lo) < lo <= hi < floor(lo) + 1 from here on.
  const Rat f(floor_rat(lo));
  return f + Rat(1) / simplest_between(Rat(1) / (hi - f), Rat(1) / (lo - f), steps);
}

bool integer_coefficients(const QVector& v) { return is_integral(v); }

}  // namespace

std::pair<Rat, Rat> objective_bounds(const GeneralizedProblem& prob) {
  prob.check();
  const LinearSystem sys = closed_relaxation(prob);
  const LpOutcome lo = lp_solve(sys, prob.objective, Sense::kMinimize);
  if (lo.status == LpStatus::kInfeasible) throw InfeasibleRelaxation("upper-level relaxation is empty");
  const LpOutcome hi = lp_solve(sys, prob.objective, Sense::kMaximize);
  if (!lo.optimal() || !hi.optimal()) throw InvariantViolation("upper-level relaxation is unbounded");
  return {lo.value, hi.value};
}

BigInt denominator_cap(const GeneralizedProblem& prob) {
  const Instance& inst = prob.base;
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < inst.h(); ++i) rows.push_back(inst.D.row_vector(i));
  for (std::size_t i = 0; i < inst.m(); ++i) rows.push_back(inst.B.row_vector(i));
  for (const LinRow& r : prob.constraint_rows()) {
    BigInt scale = r.rhs.denominator();
    for (const Rat& q : r.coeffs) scale = lcm(scale, q.denominator());
    QVector z(r.coeffs.begin() + static_cast<long>(inst.n), r.coeffs.end());
    for (Rat& q : z) q *= Rat(scale);
    rows.push_back(std::move(z));
  }
  BigInt cap = subdeterminant_bound(QMatrix::from_rows(rows, inst.d));
  BigInt obj_den = 1;
  for (const Rat& q : prob.objective) obj_den = lcm(obj_den, q.denominator());
  return cap * obj_den;
}

Rat rational_reconstruct(const Rat& lo, const Rat& hi, const BigInt& cap, std::uint64_t* steps) {
  if (hi < lo) throw std::invalid_argument("rational_reconstruct: empty interval");
  std::uint64_t walk = 0;
  const Rat r = simplest_between(lo, hi, walk);
  if (steps) *steps += walk;
  if (r.denominator() > cap) {
    throw InvariantViolation("rational_reconstruct: no rational with denominator <= " + cap.get_str() +
                             " in [" + lo.to_string() + ", " + hi.to_string() + "]");
  }
  // Any other p/q in the interval with q <= cap is at least 1/(q * den(r))
  // away from r.
  if (hi - lo >= Rat(BigInt(1), cap * r.denominator())) {
    throw InvariantViolation("rational_reconstruct: interval too wide to certify a unique answer");
  }
  return r;
}

std::optional<Rat> bracket_and_reconstruct(const std::function<bool(const Rat&)>& le, Rat lo,
                                           Rat hi, const BigInt& cap, SearchStats& stats) {
  ++stats.queries;
  if (!le(hi)) return std::nullopt;
  if (!(lo < hi)) return hi;
  ++stats.queries;
  if (le(lo)) return lo;
  // Invariant: le(lo) is false and le(hi) is true, so lo <= v <= hi.
  const Rat gap(BigInt(1), 2 * cap * cap);
  while (hi - lo >= gap) {
    const Rat mid = (lo + hi) / 2;
    ++stats.queries;
    ++stats.bisection_steps;
    if (le(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return rational_reconstruct(lo, hi, cap, &stats.reconstruction_steps);
}

Engine::Engine(const Instance& inst, Limits limits) : ctx_(inst, std::move(limits)) {}

bool Engine::decide(const GeneralizedProblem& prob, const Rat& alpha, bool pure) {
  return pure ? ctx_.decide_le_pure(prob, alpha) : ctx_.decide_le(prob, alpha);
}

std::optional<Rat> Engine::infimum(const GeneralizedProblem& prob) {
  std::pair<Rat, Rat> bounds;
  try {
    bounds = objective_bounds(prob);
  } catch (const InfeasibleRelaxation&) {
    return std::nullopt;
  }
  SearchStats stats;
  const auto le = [&](const Rat& alpha) { return ctx_.decide_le(prob, alpha); };
  auto v = bracket_and_reconstruct(le, bounds.first, bounds.second, denominator_cap(prob), stats);
  Telemetry& t = ctx_.telemetry();
  t.infimum_queries += stats.queries;
  t.bisection_steps += stats.bisection_steps;
  t.reconstruction_steps += stats.reconstruction_steps;
  return v;
}

std::optional<BigInt> Engine::integer_minimum(const GeneralizedProblem& prob, bool pure) {
  std::pair<Rat, Rat> bounds;
  try {
    bounds = objective_bounds(prob);
  } catch (const InfeasibleRelaxation&) {
    return std::nullopt;
  }
  BigInt lo = ceil_rat(bounds.first) - 1;
  BigInt hi = floor_rat(bounds.second);
  if (hi <= lo || !decide(prob, Rat(hi), pure)) return std::nullopt;
  while (hi - lo > 1) {
    BigInt mid;
    BigInt sum = lo + hi;
    mpz_fdiv_q_2exp(mid.get_mpz_t(), sum.get_mpz_t(), 1);
    ++ctx_.telemetry().bisection_steps;
    if (decide(prob, Rat(mid), pure)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

LexTrace Engine::lex_extract(const GeneralizedProblem& prob, const Rat& v_star) {
  const Instance& inst = ctx_.instance();
  const std::size_t dim = inst.dimension();
  const GeneralizedProblem level = prob.with_row(prob.objective_row(Relation::kEqual, v_star));

  LexTrace trace;
  trace.x_star = prob.fixed_x_prefix;
  for (std::size_t j = trace.x_star.size(); j < inst.n; ++j) {
    const auto xj = integer_minimum(level.with_prefix(trace.x_star).with_objective(unit(dim, j)), false);
    if (!xj) throw InvariantViolation("lex_extract: no optimal point for x_" + std::to_string(j + 1));
    trace.x_star.push_back(*xj);
  }

  const std::vector<LinRow> extras = level.with_prefix(trace.x_star).constraint_rows();
  std::vector<Cell> compatible = ctx_.cells().enumerate(extras);
  if (compatible.empty()) throw InvariantViolation("lex_extract: no optimal cell for x*");

  for (std::size_t i = 0; i < inst.m(); ++i) {
    const QVector b = inst.B.row_vector(i);
    std::optional<Rat> rho;
    for (const Cell& cell : compatible) {
      const LpOutcome lp = lp_solve(cell_region(inst, cell, extras).closure(), b, Sense::kMinimize);
      if (!lp.optimal()) throw InvariantViolation("lex_extract: valid cell with empty closure");
      if (!rho || lp.value < *rho) rho = lp.value;
    }
    const Rat rho_i = *rho + inst.u[i];
    const BigInt r_i = floor_rat(rho_i);
    trace.rho.push_back(rho_i);
    trace.r.push_back(r_i);
    std::erase_if(compatible, [&](const Cell& c) { return c.r[i] != r_i; });
    if (compatible.empty()) {
      throw InvariantViolation("lex_extract: no cell with r_" + std::to_string(i + 1) + " = " + r_i.get_str());
    }
  }
  if (compatible.size() != 1) throw InvariantViolation("lex_extract: floor vector does not pin a cell");

  const Cell cell{trace.x_star, trace.r};
  trace.q_system = cell_region(inst, cell, extras);
  const AffineVertices aff = affinely_independent_vertices(trace.q_system, ctx_.limits().vertex_cap);
  if (aff.k == 0) throw InvariantViolation("lex_extract: final region has no vertex");
  trace.k = aff.k;
  trace.vertices = aff.points;

  BigInt lcm_den = 1;
  QVector sum = zeros(inst.d);
  for (const QVector& v : aff.points) {
    for (std::size_t j = 0; j < inst.d; ++j) {
      sum[j] += v[j];
      lcm_den = lcm(lcm_den, v[j].denominator());
    }
  }
  const Rat k(static_cast<long>(aff.k));
  for (Rat& q : sum) q /= k;
  trace.z_star = std::move(sum);
  trace.delta_denominator = lcm_den * static_cast<unsigned long>(aff.k);

  for (const LinRow& row : trace.q_system.rows()) {
    if (!row.satisfied_by(trace.z_star)) {
      throw InvariantViolation("lex_extract: barycenter " + to_string(trace.z_star) + " violates " +
                               row.to_string());
    }
  }
  for (const Rat& q : trace.z_star) {
    if (trace.delta_denominator % q.denominator() != 0) {
      throw InvariantViolation("lex_extract: barycenter outside (1/(k Delta)) Z^d");
    }
  }
  const BilevelPoint point{trace.x_star, trace.z_star};
  if (!prob.feasible(point) || prob.value(point) != v_star) {
    throw InvariantViolation("lex_extract: extracted point is not optimal");
  }
  return trace;
}

EpsSolution Engine::eps_point(const GeneralizedProblem& prob, const Rat& v_star, const Rat& eps,
                              EpsMode mode) {
  if (eps.sign() <= 0) throw std::invalid_argument("eps_point: epsilon must be positive");
  Rat target;
  if (mode == EpsMode::kAdditive) {
    target = v_star + eps;
  } else {
    if (v_star.sign() <= 0) throw std::invalid_argument("eps_point: multiplicative mode needs v* > 0");
    target = (Rat(1) + eps) * v_star;
  }
  const LinRow bound = prob.objective_row(Relation::kLessEqual, target);
  auto found = ctx_.first_cell(prob, std::span(&bound, 1));
  if (!found) throw InvariantViolation("eps_point: no feasible point below v* + eps");
  EpsSolution out{found->second, prob.value(found->second), eps};
  if (!(out.value <= target) || !prob.feasible(out.point)) {
    throw InvariantViolation("eps_point: returned point fails its guarantee");
  }
  return out;
}

SolveReport Engine::solve_mixed(const GeneralizedProblem& prob, std::optional<Rat> eps, EpsMode mode) {
  if (prob.variant != Variant::kMixed) throw std::invalid_argument("solve_mixed: problem is not mixed");
  const Telemetry start = ctx_.telemetry();
  SolveReport report;
  const auto finish = [&]() {
    report.telemetry = since(ctx_.telemetry(), start);
    return report;
  };

  // Follower-feasible relaxation: a necessary condition, used only to reject.
  LinearSystem relaxed = closed_relaxation(prob);
  relaxed.append(follower_rows(prob.base));
  if (!mixed_feasible(relaxed, MixedPattern::range(prob.dimension(), 0, prob.base.n),
                      BoundsCheck::kVerify, ctx_.limits().node_cap)) {
    return finish();
  }

  const auto v = infimum(prob);
  if (!v) return finish();
  report.infimum = *v;
  if (ctx_.decide_eq(prob, *v)) {
    report.status = SolveStatus::kAttained;
    report.trace = lex_extract(prob, *v);
    report.solution = BilevelPoint{report.trace->x_star, report.trace->z_star};
  } else {
    report.status = SolveStatus::kUnattained;
    if (eps) report.eps_solution = eps_point(prob, *v, *eps, mode);
  }
  return finish();
}

SolveReport Engine::pure_enumeration(const GeneralizedProblem& prob) {
  const Telemetry start = ctx_.telemetry();
  SolveReport report;
  const auto points = ctx_.pure_feasible_points(prob);
  for (const BilevelPoint& pt : points) {
    const Rat v = prob.value(pt);
    if (!report.infimum || v < *report.infimum) {
      report.infimum = v;
      report.solution = pt;
    }
  }
  if (report.infimum) report.status = SolveStatus::kAttained;
  report.telemetry = since(ctx_.telemetry(), start);
  return report;
}

SolveReport Engine::solve_pure(const GeneralizedProblem& prob) {
  if (prob.variant != Variant::kPure) throw std::invalid_argument("solve_pure: problem is not pure");
  if (!integer_coefficients(prob.objective)) {
    throw std::invalid_argument("solve_pure: objective must have integer coefficients");
  }
  const Telemetry start = ctx_.telemetry();
  SolveReport report;
  const Instance& inst = ctx_.instance();
  const std::size_t dim = inst.dimension();

  LinearSystem relaxed = closed_relaxation(prob);
  relaxed.append(follower_rows(prob.base));
  const bool relaxation_ok = mixed_feasible(relaxed, MixedPattern::all_integer(dim), BoundsCheck::kVerify,
                                            ctx_.limits().node_cap)
                                 .has_value();
  if (relaxation_ok) {
    if (const auto v = integer_minimum(prob, true)) {
      report.status = SolveStatus::kAttained;
      report.infimum = Rat(*v);
      const GeneralizedProblem level = prob.with_row(prob.objective_row(Relation::kEqual, Rat(*v)));
      IntVector xs = prob.fixed_x_prefix;
      for (std::size_t j = xs.size(); j < inst.n; ++j) {
        const auto xj = integer_minimum(level.with_prefix(xs).with_objective(unit(dim, j)), true);
        if (!xj) throw InvariantViolation("solve_pure: lost feasibility fixing x_" + std::to_string(j + 1));
        xs.push_back(*xj);
      }
      GeneralizedProblem fixed = level.with_prefix(xs);
      IntVector zs;
      for (std::size_t j = 0; j < inst.d; ++j) {
        const auto zj = integer_minimum(fixed.with_objective(unit(dim, inst.n + j)), true);
        if (!zj) throw InvariantViolation("solve_pure: lost feasibility fixing z_" + std::to_string(j + 1));
        zs.push_back(*zj);
        fixed = fixed.with_row(LinRow{unit(dim, inst.n + j), Rat(*zj), Relation::kEqual});
      }
      report.solution = BilevelPoint{xs, to_qvector(zs)};
    }
  }

  const SolveReport direct = pure_enumeration(prob);
  if (direct.status != report.status || direct.infimum != report.infimum ||
      direct.solution != report.solution) {
    throw InvariantViolation(std::string("solve_pure: bisection driver (") + to_string(report.status) +
                             ") and direct enumeration (" + to_string(direct.status) + ") disagree");
  }
  report.telemetry = since(ctx_.telemetry(), start);
  return report;
}

SolveReport Engine::reference(const GeneralizedProblem& prob) {
  if (prob.variant == Variant::kPure) return pure_enumeration(prob);
  const Telemetry start = ctx_.telemetry();
  const Instance& inst = ctx_.instance();
  SolveReport report;
  const std::vector<LinRow> extras = prob.constraint_rows();
  const std::vector<Cell> cells = ctx_.cells().enumerate(extras);
  ctx_.telemetry().cells = ctx_.cells().cells_visited();

  std::optional<Rat> best;
  std::vector<std::pair<const Cell*, CellInfimum>> infima;
  for (const Cell& cell : cells) {
    CellInfimum ci = cell_infimum(inst, cell, prob.objective, extras, ctx_.limits());
    if (!best || ci.inf < *best) best = ci.inf;
    infima.emplace_back(&cell, std::move(ci));
  }
  if (!best) {
    report.telemetry = since(ctx_.telemetry(), start);
    return report;
  }
  report.infimum = *best;
  report.status = SolveStatus::kUnattained;
  for (const auto& [cell, ci] : infima) {
    if (ci.inf != *best || !ci.attained) continue;
    report.status = SolveStatus::kAttained;
    // Lex-min z over the closed optimal face; fall back to the interior
    // witness when that corner lies on an open side of the cell.
    LinearSystem face = cell_region(inst, *cell, extras).closure();
    const QVector obj_z(prob.objective.begin() + static_cast<long>(inst.n), prob.objective.end());
    face.add_eq(obj_z, *best - dot(std::span(prob.objective).subspan(0, inst.n), to_qvector(cell->x)));
    QVector z;
    for (std::size_t j = 0; j < inst.d; ++j) {
      const LpOutcome lp = lp_solve(face, unit(inst.d, j), Sense::kMinimize);
      if (!lp.optimal()) throw InvariantViolation("reference_oracle: optimal face is empty");
      z.push_back(lp.value);
      face.add_eq(unit(inst.d, j), lp.value);
    }
    BilevelPoint pt{cell->x, z};
    if (!cell_region(inst, *cell, extras).contains(z)) pt = *ci.witness;
    report.solution = std::move(pt);
    break;
  }
  report.telemetry = since(ctx_.telemetry(), start);
  return report;
}

SolveReport solve_mixed(const Instance& inst, std::optional<Rat> eps) {
  return solve_mixed(GeneralizedProblem::original(inst), std::move(eps));
}

SolveReport solve_mixed(const GeneralizedProblem& prob, std::optional<Rat> eps) {
  Engine engine(prob.base);
  return engine.solve_mixed(prob, std::move(eps));
}

SolveReport solve_pure(const Instance& inst) {
  return solve_pure(GeneralizedProblem::original(inst, Variant::kPure));
}

SolveReport solve_pure(const GeneralizedProblem& prob) {
  Engine engine(prob.base);
  return engine.solve_pure(prob);
}

std::optional<Rat> infimum(const GeneralizedProblem& prob) {
  Engine engine(prob.base);
  return engine.infimum(prob);
}

LexTrace lex_extract(const GeneralizedProblem& prob, const Rat& v_star) {
  Engine engine(prob.base);
  return engine.lex_extract(prob, v_star);
}

EpsSolution eps_point(const GeneralizedProblem& prob, const Rat& v_star, const Rat& eps) {
  Engine engine(prob.base);
  return engine.eps_point(prob, v_star, eps);
}

SolveReport reference_oracle(const Instance& inst, Variant variant) {
  return reference_oracle(GeneralizedProblem::original(inst, variant));
}

SolveReport reference_oracle(const GeneralizedProblem& prob) {
  Engine engine(prob.base);
  return engine.reference(prob);
}

}  // namespace bilevel
