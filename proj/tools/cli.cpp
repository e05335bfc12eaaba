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

#include "cli.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "bilevel/errors.hpp"
#include "bilevel/generator.hpp"
#include "bilevel/io.hpp"

namespace bilevel::cli {

namespace {

struct Options {
  std::string file;
  std::string mode;  // empty: take the file's variant
  std::string engine = "search";
  std::string epsilon;
  std::string alpha;
  bool json = false;
  bool text = false;
  std::uint64_t seed = 1;
  std::size_t count = 100;
};

Variant resolve_variant(const Options& opt, const InstanceFile& file) {
  if (opt.mode.empty()) return file.variant;
  return opt.mode == "pure" ? Variant::kPure : Variant::kMixed;
}

SolveReport run_search(const GeneralizedProblem& prob, const std::optional<Rat>& eps) {
  Engine engine(prob.base);
  if (prob.variant == Variant::kPure) return engine.solve_pure(prob);
  return engine.solve_mixed(prob, eps);
}

// Same status and infimum; when attained both points are feasible and
// optimal, and the search's x is lexicographically no larger.
bool agree(const GeneralizedProblem& prob, const SolveReport& search, const SolveReport& oracle) {
  if (search.status != oracle.status || search.infimum != oracle.infimum) return false;
  if (search.status != SolveStatus::kAttained) return true;
  if (!search.solution || !oracle.solution) return false;
  for (const BilevelPoint* pt : {&*search.solution, &*oracle.solution}) {
    if (!prob.feasible(*pt) || prob.value(*pt) != *search.infimum) return false;
  }
  if (prob.variant == Variant::kPure) return *search.solution == *oracle.solution;
  return !(oracle.solution->x < search.solution->x);
}

int status_exit(SolveStatus s) { return s == SolveStatus::kInfeasible ? kInfeasible : kOk; }

void print_report(std::ostream& out, const Options& opt, const SolveReport& report,
                  std::optional<bool> agreement) {
  out << (opt.json ? report_to_json(report, agreement) : report_to_text(report, agreement));
}

int cmd_solve(const Options& opt, std::ostream& out, std::ostream& err) {
  const InstanceFile file = parse_and_validate(opt.file);
  const GeneralizedProblem prob = GeneralizedProblem::original(file.instance, resolve_variant(opt, file));
  std::optional<Rat> eps;
  if (!opt.epsilon.empty()) {
    eps = Rat::parse(opt.epsilon);
    if (eps->sign() <= 0) throw std::invalid_argument("--epsilon must be positive");
  }
  if (opt.engine == "oracle") {
    const SolveReport report = reference_oracle(prob);
    print_report(out, opt, report, std::nullopt);
    return status_exit(report.status);
  }
  const SolveReport report = run_search(prob, eps);
  if (opt.engine == "both") {
    const bool ok = agree(prob, report, reference_oracle(prob));
    print_report(out, opt, report, ok);
    if (!ok) {
      err << "error: search and reference oracle disagree\n";
      return kInvariant;
    }
    return status_exit(report.status);
  }
  print_report(out, opt, report, std::nullopt);
  return status_exit(report.status);
}

int cmd_decide(const Options& opt, std::ostream& out) {
  const InstanceFile file = parse_and_validate(opt.file);
  const GeneralizedProblem prob = GeneralizedProblem::original(file.instance, resolve_variant(opt, file));
  const Rat alpha = Rat::parse(opt.alpha);
  const bool yes =
      prob.variant == Variant::kPure ? decide_le_pure(prob, alpha) : decide_le(prob, alpha);
  out << (yes ? "true" : "false") << "\n";
  return kOk;
}

int cmd_check(const Options& opt, std::ostream& out) {
  const InstanceFile file = parse_and_validate(opt.file);
  const Instance& inst = file.instance;
  out << "ok: " << (file.name.empty() ? opt.file : file.name) << " n=" << inst.n << " d=" << inst.d
      << " m=" << inst.m() << " h=" << inst.h()
      << " variant=" << (file.variant == Variant::kPure ? "pure" : "mixed") << "\n";
  return kOk;
}

int cmd_oracle(const Options& opt, std::ostream& out) {
  const InstanceFile file = parse_and_validate(opt.file);
  const GeneralizedProblem prob = GeneralizedProblem::original(file.instance, resolve_variant(opt, file));
  const SolveReport report = reference_oracle(prob);
  print_report(out, opt, report, std::nullopt);
  return status_exit(report.status);
}

int cmd_fuzz(const Options& opt, std::ostream& out, std::ostream& err) {
  std::mt19937_64 rng(opt.seed);
  std::map<std::string, std::size_t> tally;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < opt.count; ++i) {
    const Instance inst = random_instance(rng);
    for (Variant v : {Variant::kMixed, Variant::kPure}) {
      if (!opt.mode.empty() && (opt.mode == "pure") != (v == Variant::kPure)) continue;
      const GeneralizedProblem prob = GeneralizedProblem::original(inst, v);
      const SolveReport search = run_search(prob, std::nullopt);
      const std::string key = std::string(v == Variant::kPure ? "pure " : "mixed ") + to_string(search.status);
      ++tally[key];
      if (!agree(prob, search, reference_oracle(prob))) {
        ++mismatches;
        err << "mismatch: instance " << i << " (" << key << ")\n"
            << instance_to_json(InstanceFile{inst, v, "fuzz-" + std::to_string(i)});
      }
    }
  }
  out << "fuzz: seed " << opt.seed << ", " << opt.count << " instances\n";
  for (const auto& [key, n] : tally) out << "  " << key << ": " << n << "\n";
  out << "mismatches: " << mismatches << "\n";
  return mismatches == 0 ? kOk : kInvariant;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact solver for bilevel mixed-integer linear programs"};
  app.require_subcommand(1);
  Options opt;

  const auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", opt.mode, "mixed (z continuous) or pure (z integer)")
        ->check(CLI::IsMember({"mixed", "pure"}));
  };
  const auto add_format = [&](CLI::App* sub) {
    auto* json = sub->add_flag("--json", opt.json, "JSON report");
    auto* text = sub->add_flag("--text", opt.text, "plain-text report (default)");
    json->excludes(text);
  };

  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("file", opt.file, "instance file")->required();
  solve->add_option("--epsilon", opt.epsilon, "return an eps-optimal point when unattained (P/Q)");
  add_mode(solve);
  solve->add_option("--engine", opt.engine, "search, oracle, or both (cross-check)")
      ->check(CLI::IsMember({"search", "oracle", "both"}));
  add_format(solve);
  solve->add_option("--seed", opt.seed, "accepted for uniformity; solving is deterministic");

  CLI::App* decide = app.add_subcommand("decide", "is there a feasible point with value <= alpha?");
  decide->add_option("file", opt.file, "instance file")->required();
  decide->add_option("--alpha", opt.alpha, "threshold (P/Q)")->required();
  add_mode(decide);

  CLI::App* check = app.add_subcommand("check", "validate an instance file");
  check->add_option("file", opt.file, "instance file")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "solve with the brute-force reference oracle");
  oracle->add_option("file", opt.file, "instance file")->required();
  add_mode(oracle);
  add_format(oracle);

  CLI::App* fuzz = app.add_subcommand("fuzz", "random-instance agreement harness");
  fuzz->add_option("--count", opt.count, "number of instances");
  fuzz->add_option("--seed", opt.seed, "RNG seed");
  add_mode(fuzz);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*solve) return cmd_solve(opt, out, err);
    if (*decide) return cmd_decide(opt, out);
    if (*check) return cmd_check(opt, out);
    if (*oracle) return cmd_oracle(opt, out);
    return cmd_fuzz(opt, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error [usage]: " << e.what() << "\n";
    return kValidation;
  } catch (const ResourceLimitError& e) {
    err << "error [resource-cap]: " << e.what() << "\n";
    return kResource;
  } catch (const InvariantViolation& e) {
    err << "error [invariant]: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return kInvariant;
  }
}

}  // namespace bilevel::cli
