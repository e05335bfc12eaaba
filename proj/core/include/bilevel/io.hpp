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

// Instance files and reports.
//
// Instance file (JSON, "format_version": 1):
//
//   { "format_version": 1, "name": "...", "variant": "mixed" | "pure",
//     "n": 1, "d": 1,
//     "A": [[...], ...], "B": ..., "C": ..., "D": ...,   // row-major
//     "c": [...], "e": [...], "psi": [...], "u": [...], "p": [...] }
//
// Every number must be a JSON integer. z >= 0 is implicit and is not stored
// in D and p. Unknown keys (e.g. "notes") are ignored.

#ifndef BILEVEL_IO_HPP_
#define BILEVEL_IO_HPP_

#include <optional>
#include <string>

#include "bilevel/engine.hpp"

namespace bilevel {

struct InstanceFile {
  Instance instance;
  Variant variant = Variant::kMixed;
  std::string name;
};

// Throws ValidationError ("shape-mismatch", "nonintegral-data",
// "unbounded-P", "unbounded-follower", or "parse-error" for unreadable or
// malformed JSON).
InstanceFile parse_instance(const std::string& json_text);
InstanceFile parse_and_validate(const std::string& path);

std::string instance_to_json(const InstanceFile& file);

// Deterministic JSON report; `oracle_agreement` is emitted when given.
std::string report_to_json(const SolveReport& report, std::optional<bool> oracle_agreement = std::nullopt);
std::string report_to_text(const SolveReport& report, std::optional<bool> oracle_agreement = std::nullopt);

}  // namespace bilevel

#endif  // BILEVEL_IO_HPP_
