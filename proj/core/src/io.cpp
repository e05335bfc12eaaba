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

#include "bilevel/io.hpp"

#include <fstream>
#include <sstream>

#include "bilevel/errors.hpp"
#include "json.hpp"

namespace bilevel {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

[[noreturn]] void shape_error(const std::string& what) { throw ValidationError("shape-mismatch", what); }

const Json& field(const Json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) shape_error(std::string("missing field \"") + key + "\"");
  return *it;
}

Rat integer_entry(const Json& v, const std::string& where) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? Rat(BigInt(std::to_string(v.get<std::uint64_t>())))
                                  : Rat(BigInt(std::to_string(v.get<std::int64_t>())));
  }
  if (v.is_number() || v.is_string()) {
    throw ValidationError("nonintegral-data", where + " is not an integer: " + v.dump());
  }
  shape_error(where + " is not a number");
}

std::size_t dimension_field(const Json& doc, const char* key) {
  const Json& v = field(doc, key);
  if (!v.is_number_integer()) throw ValidationError("nonintegral-data", std::string(key) + " must be an integer");
  if (v.get<std::int64_t>() < 1) shape_error(std::string(key) + " must be at least 1");
  return v.get<std::size_t>();
}

QVector vector_field(const Json& doc, const char* key, std::size_t len) {
  const Json& v = field(doc, key);
  if (!v.is_array()) shape_error(std::string(key) + " must be a list");
  if (v.size() != len) {
    shape_error(std::string(key) + " has length " + std::to_string(v.size()) + ", expected " +
                std::to_string(len));
  }
  QVector out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(integer_entry(v[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// rows < 0 means "any number of rows".
QMatrix matrix_field(const Json& doc, const char* key, long rows, std::size_t cols) {
  const Json& v = field(doc, key);
  if (!v.is_array()) shape_error(std::string(key) + " must be a list of rows");
  if (rows >= 0 && v.size() != static_cast<std::size_t>(rows)) {
    shape_error(std::string(key) + " has " + std::to_string(v.size()) + " rows, expected " +
                std::to_string(rows));
  }
  std::vector<QVector> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Json& row = v[i];
    const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    if (!row.is_array()) shape_error(where + " must be a list");
    if (row.size() != cols) {
      shape_error(where + " has length " + std::to_string(row.size()) + ", expected " + std::to_string(cols));
    }
    QVector r;
    for (std::size_t j = 0; j < row.size(); ++j) {
      r.push_back(integer_entry(row[j], where + "[" + std::to_string(j) + "]"));
    }
    out.push_back(std::move(r));
  }
  return QMatrix::from_rows(out, cols);
}

template <class J = Json>
J integer_json(const BigInt& v) {
  if (v.fits_slong_p()) return J(v.get_si());
  return J(v.get_str());
}

OrderedJson rational_list(const QVector& v) {
  OrderedJson out = OrderedJson::array();
  for (const Rat& q : v) out.push_back(q.to_string());
  return out;
}

OrderedJson integer_list(const IntVector& v) {
  OrderedJson out = OrderedJson::array();
  for (const BigInt& q : v) out.push_back(integer_json<OrderedJson>(q));
  return out;
}

OrderedJson point_json(const BilevelPoint& pt) {
  OrderedJson out;
  out["x"] = integer_list(pt.x);
  out["z"] = rational_list(pt.z);
  return out;
}

Json matrix_json(const QMatrix& M) {
  Json out = Json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(integer_json(M(i, j).numerator()));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_json(const QVector& v) {
  Json out = Json::array();
  for (const Rat& q : v) out.push_back(integer_json(q.numerator()));
  return out;
}

}  // namespace

InstanceFile parse_instance(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("parse-error", e.what());
  }
  if (!doc.is_object()) throw ValidationError("parse-error", "instance must be a JSON object");
  if (const auto it = doc.find("format_version"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() != kFormatVersion) {
      throw ValidationError("parse-error", "unsupported format_version " + it->dump());
    }
  }

  InstanceFile file;
  if (const auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ValidationError("parse-error", "name must be a string");
    file.name = it->get<std::string>();
  }
  if (const auto it = doc.find("variant"); it != doc.end()) {
    const std::string v = it->is_string() ? it->get<std::string>() : "";
    if (v == "mixed") {
      file.variant = Variant::kMixed;
    } else if (v == "pure") {
      file.variant = Variant::kPure;
    } else {
      throw ValidationError("parse-error", "variant must be \"mixed\" or \"pure\"");
    }
  }

  Instance& inst = file.instance;
  inst.n = dimension_field(doc, "n");
  inst.d = dimension_field(doc, "d");
  inst.A = matrix_field(doc, "A", -1, inst.n);
  const long m = static_cast<long>(inst.A.rows());
  inst.B = matrix_field(doc, "B", m, inst.d);
  inst.C = matrix_field(doc, "C", -1, inst.n);
  inst.D = matrix_field(doc, "D", static_cast<long>(inst.C.rows()), inst.d);
  inst.c = vector_field(doc, "c", inst.n);
  inst.e = vector_field(doc, "e", inst.d);
  inst.psi = vector_field(doc, "psi", inst.n);
  inst.u = vector_field(doc, "u", inst.A.rows());
  inst.p = vector_field(doc, "p", inst.C.rows());
  inst.validate();
  return file;
}

InstanceFile parse_and_validate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("parse-error", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string instance_to_json(const InstanceFile& file) {
  const Instance& inst = file.instance;
  OrderedJson doc;
  doc["format_version"] = kFormatVersion;
  if (!file.name.empty()) doc["name"] = file.name;
  doc["variant"] = file.variant == Variant::kPure ? "pure" : "mixed";
  doc["n"] = inst.n;
  doc["d"] = inst.d;
  doc["A"] = matrix_json(inst.A);
  doc["B"] = matrix_json(inst.B);
  doc["C"] = matrix_json(inst.C);
  doc["D"] = matrix_json(inst.D);
  doc["c"] = vector_json(inst.c);
  doc["e"] = vector_json(inst.e);
  doc["psi"] = vector_json(inst.psi);
  doc["u"] = vector_json(inst.u);
  doc["p"] = vector_json(inst.p);
  return doc.dump(2) + "\n";
}

std::string report_to_json(const SolveReport& report, std::optional<bool> oracle_agreement) {
  OrderedJson doc;
  doc["format_version"] = kFormatVersion;
  doc["status"] = to_string(report.status);
  doc["infimum"] = report.infimum ? OrderedJson(report.infimum->to_string()) : OrderedJson(nullptr);
  doc["solution"] = report.solution ? point_json(*report.solution) : OrderedJson(nullptr);
  if (report.eps_solution) {
    OrderedJson eps = point_json(report.eps_solution->point);
    eps["value"] = report.eps_solution->value.to_string();
    eps["epsilon"] = report.eps_solution->epsilon.to_string();
    doc["eps_solution"] = std::move(eps);
  } else {
    doc["eps_solution"] = nullptr;
  }
  const Telemetry& t = report.telemetry;
  doc["telemetry"] = {{"decision_queries", t.decision_queries},
                      {"infimum_queries", t.infimum_queries},
                      {"bisection_steps", t.bisection_steps},
                      {"reconstruction_steps", t.reconstruction_steps},
                      {"cells", t.cells}};
  if (oracle_agreement) doc["oracle_agreement"] = *oracle_agreement;
  return doc.dump(2) + "\n";
}

std::string report_to_text(const SolveReport& report, std::optional<bool> oracle_agreement) {
  std::ostringstream out;
  out << "status: " << to_string(report.status) << "\n";
  if (report.infimum) out << "infimum: " << report.infimum->to_string() << "\n";
  if (report.solution) {
    out << "solution: x = " << to_string(to_qvector(report.solution->x))
        << ", z = " << to_string(report.solution->z) << "\n";
  }
  if (report.eps_solution) {
    const EpsSolution& e = *report.eps_solution;
    out << "eps solution (eps = " << e.epsilon.to_string() << "): x = " << to_string(to_qvector(e.point.x))
        << ", z = " << to_string(e.point.z) << ", value = " << e.value.to_string() << "\n";
  }
  const Telemetry& t = report.telemetry;
  out << "decision queries: " << t.decision_queries << " (infimum search " << t.infimum_queries << ")\n"
      << "bisection steps: " << t.bisection_steps << "\n"
      << "reconstruction steps: " << t.reconstruction_steps << "\n"
      << "cells: " << t.cells << "\n";
  if (oracle_agreement) out << "oracle agreement: " << (*oracle_agreement ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace bilevel
