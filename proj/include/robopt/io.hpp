// Copyright 2026 The robopt Authors
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

// JSON model files: schema-checked parsing with JSON-pointer diagnostics,
// canonical serialization, provenance export and CSV number formatting.

#ifndef ROBOPT_IO_HPP_
#define ROBOPT_IO_HPP_

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "robopt/adjustable_integer.hpp"
#include "robopt/model.hpp"
#include "robopt/reformulate.hpp"
#include "robopt/uncertainty.hpp"

namespace robopt {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

// A model document: the model and any named split schemes.
struct ModelFile {
  UncertainLP model;
  std::map<std::string, SplitScheme> splits;
};

namespace internal {

inline std::string Child(const std::string& ptr, const std::string& key) {
  return ptr + "/" + EscapePointer(key);
}

inline std::string Child(const std::string& ptr, std::size_t i) {
  return ptr + "/" + std::to_string(i);
}

[[noreturn]] inline void Fail(const std::string& ptr, const std::string& msg) {
  throw Error((ptr.empty() ? std::string("/") : ptr) + ": " + msg, ptr.empty() ? "/" : ptr);
}

inline void CheckKeys(const Json& j, const std::string& ptr, std::set<std::string> allowed) {
  if (!j.is_object()) Fail(ptr, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) Fail(Child(ptr, k), "unknown field '" + k + "'");
  }
}

// A real given as a JSON number or a decimal string.
inline double Real(const Json& j, const std::string& ptr) {
  double v = 0.0;
  if (j.is_number()) {
    v = j.get<double>();
  } else if (j.is_string()) {
    static const std::regex kDecimal(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
    const std::string s = j.get<std::string>();
    if (!std::regex_match(s, kDecimal)) Fail(ptr, "'" + s + "' is not a decimal number");
    v = std::strtod(s.c_str(), nullptr);
  } else {
    Fail(ptr, "expected a number");
  }
  if (!std::isfinite(v)) Fail(ptr, "NaN and infinite values are rejected");
  return v;
}

// Bound: a real, or null for unbounded in that direction.
inline double Bound(const Json& j, const std::string& ptr, double infinite) {
  return j.is_null() ? infinite : Real(j, ptr);
}

inline int Index(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) Fail(ptr, "expected an integer");
  const long long v = j.get<long long>();
  if (v < 0 || v > 1000000) Fail(ptr, "index out of range");
  return static_cast<int>(v);
}

inline int IndexKey(const std::string& key, const std::string& ptr) {
  static const std::regex kInt(R"(^(0|[1-9]\d{0,5})$)");
  if (!std::regex_match(key, kInt)) Fail(ptr, "key '" + key + "' is not a zeta index");
  return std::stoi(key);
}

inline Vector RealArray(const Json& j, const std::string& ptr) {
  if (!j.is_array()) Fail(ptr, "expected an array of numbers");
  Vector out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(Real(j[i], Child(ptr, i)));
  return out;
}

inline std::vector<int> IndexArray(const Json& j, const std::string& ptr) {
  if (!j.is_array()) Fail(ptr, "expected an array of indices");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(Index(j[i], Child(ptr, i)));
  return out;
}

inline Matrix RealMatrix(const Json& j, const std::string& ptr) {
  if (!j.is_array()) Fail(ptr, "expected an array of rows");
  Matrix out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(RealArray(j[i], Child(ptr, i)));
  return out;
}

inline std::string String(const Json& j, const std::string& ptr) {
  if (!j.is_string()) Fail(ptr, "expected a string");
  return j.get<std::string>();
}

inline bool Bool(const Json& j, const std::string& ptr) {
  if (!j.is_boolean()) Fail(ptr, "expected true or false");
  return j.get<bool>();
}

inline const Json& Required(const Json& j, const std::string& key, const std::string& ptr) {
  if (!j.contains(key)) Fail(ptr, "missing required field '" + key + "'");
  return j.at(key);
}

inline int VarRef(const UncertainLP& m, const std::string& name, const std::string& ptr) {
  const int v = m.FindVariable(name);
  if (v < 0) Fail(ptr, "unknown variable '" + name + "'");
  return v;
}

inline std::map<int, double> Coefs(const UncertainLP& m, const Json& j, const std::string& ptr) {
  if (!j.is_object()) Fail(ptr, "expected an object of variable coefficients");
  std::map<int, double> out;
  for (const auto& [k, v] : j.items()) {
    out[VarRef(m, k, Child(ptr, k))] = Real(v, Child(ptr, k));
  }
  return out;
}

inline std::map<int, double> ZetaCoefs(const Json& j, const std::string& ptr) {
  if (!j.is_object()) Fail(ptr, "expected an object of zeta coefficients");
  std::map<int, double> out;
  for (const auto& [k, v] : j.items()) {
    out[IndexKey(k, Child(ptr, k))] = Real(v, Child(ptr, k));
  }
  return out;
}

inline FactorMap Factors(const UncertainLP& m, const Json& j, const std::string& ptr) {
  if (!j.is_object()) Fail(ptr, "expected an object of variable factor rows");
  FactorMap out;
  for (const auto& [k, v] : j.items()) {
    out[VarRef(m, k, Child(ptr, k))] = ZetaCoefs(v, Child(ptr, k));
  }
  return out;
}

inline UncertaintySet ParseSet(const Json& j, const std::string& ptr) {
  CheckKeys(j, ptr, {"kind", "parameters"});
  const std::string kind = String(Required(j, "kind", ptr), Child(ptr, "kind"));
  const std::string pp = Child(ptr, "parameters");
  const Json empty = Json::object();
  const Json& p = j.contains("parameters") ? j.at("parameters") : empty;
  auto req = [&](const char* key) -> const Json& { return Required(p, key, pp); };
  auto at = [&](const char* key) { return Child(pp, key); };
  try {
    if (kind == "box") {
      CheckKeys(p, pp, {"lower", "upper", "radius"});
      if (p.contains("radius")) {
        if (p.contains("lower") || p.contains("upper")) {
          Fail(at("radius"), "give either radius or lower/upper");
        }
        return MakeBoxRadius(RealArray(p.at("radius"), at("radius")));
      }
      return MakeBox(RealArray(req("lower"), at("lower")), RealArray(req("upper"), at("upper")));
    }
    if (kind == "ball") {
      CheckKeys(p, pp, {"center", "omega"});
      return MakeBall(RealArray(req("center"), at("center")), Real(req("omega"), at("omega")));
    }
    if (kind == "ball_box") {
      CheckKeys(p, pp, {"dim", "omega"});
      return MakeBallBox(Index(req("dim"), at("dim")), Real(req("omega"), at("omega")));
    }
    if (kind == "budgeted") {
      CheckKeys(p, pp, {"dim", "gamma"});
      return MakeBudgeted(Index(req("dim"), at("dim")), Real(req("gamma"), at("gamma")));
    }
    if (kind == "polyhedral") {
      CheckKeys(p, pp, {"dim", "D", "q"});
      const Matrix d = RealMatrix(req("D"), at("D"));
      const Vector q = RealArray(req("q"), at("q"));
      if (p.contains("dim")) return MakePolyhedral(Index(p.at("dim"), at("dim")), d, q);
      return MakePolyhedral(d, q);
    }
    if (kind == "clt") {
      CheckKeys(p, pp, {"dim", "mu", "sigma", "rho", "lower", "upper"});
      return MakeClt(Index(req("dim"), at("dim")), Real(req("mu"), at("mu")),
                     Real(req("sigma"), at("sigma")), Real(req("rho"), at("rho")),
                     RealArray(req("lower"), at("lower")), RealArray(req("upper"), at("upper")));
    }
    if (kind == "scenario_hull") {
      CheckKeys(p, pp, {"points"});
      return MakeScenarioHull(RealMatrix(req("points"), at("points")));
    }
  } catch (const Error& e) {
    if (!e.pointer().empty()) throw;
    Fail(pp, e.what());
  }
  Fail(Child(ptr, "kind"), "unknown set kind '" + kind + "'");
}

inline RowSense ParseSense(const Json& j, const std::string& ptr) {
  const std::string s = String(j, ptr);
  if (s == "<=") return RowSense::kLessEqual;
  if (s == ">=") return RowSense::kGreaterEqual;
  if (s == "==" || s == "=") return RowSense::kEqual;
  Fail(ptr, "sense must be one of <=, >=, ==");
}

inline const char* SenseString(RowSense s) {
  switch (s) {
    case RowSense::kLessEqual:
      return "<=";
    case RowSense::kGreaterEqual:
      return ">=";
    case RowSense::kEqual:
      return "==";
  }
  return "?";
}

inline Json BoundJson(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace internal

// Parses a model document. Errors carry a JSON pointer to the field.
inline ModelFile ParseModelJson(const Json& doc) {
  using namespace internal;  // NOLINT(build/namespaces)
  ModelFile out;
  UncertainLP& m = out.model;
  CheckKeys(doc, "", {"format", "variables", "sets", "constraints", "objective", "stages",
                      "splits"});
  if (doc.contains("format") && String(doc.at("format"), "/format") != "robopt-model") {
    Fail("/format", "expected \"robopt-model\"");
  }
  const Json& vars = Required(doc, "variables", "");
  if (!vars.is_array()) Fail("/variables", "expected an array");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string ptr = Child("/variables", i);
    const Json& v = vars[i];
    CheckKeys(v, ptr, {"name", "lb", "ub", "integer", "adjustable"});
    const std::string name = String(Required(v, "name", ptr), Child(ptr, "name"));
    if (name.empty()) Fail(Child(ptr, "name"), "variable names must be nonempty");
    if (m.FindVariable(name) >= 0) Fail(Child(ptr, "name"), "duplicate variable '" + name + "'");
    const double lb = v.contains("lb") ? Bound(v.at("lb"), Child(ptr, "lb"), -kInfinity) : 0.0;
    const double ub =
        v.contains("ub") ? Bound(v.at("ub"), Child(ptr, "ub"), kInfinity) : kInfinity;
    const bool integer = v.contains("integer") && Bool(v.at("integer"), Child(ptr, "integer"));
    const int j = m.AddVariable(name, lb, ub, integer);
    if (v.contains("adjustable")) {
      const std::string ap = Child(ptr, "adjustable");
      const Json& a = v.at("adjustable");
      CheckKeys(a, ap, {"set", "set_indices", "info_base"});
      AdjustableRule r;
      if (a.contains("set")) r.set = String(a.at("set"), Child(ap, "set"));
      if (a.contains("set_indices")) {
        r.set_indices = IndexArray(a.at("set_indices"), Child(ap, "set_indices"));
      }
      if (a.contains("info_base")) r.info_base = RealMatrix(a.at("info_base"), Child(ap, "info_base"));
      m.variables[j].adjustable = r;
    }
  }
  if (doc.contains("sets")) {
    const Json& sets = doc.at("sets");
    if (!sets.is_object()) Fail("/sets", "expected an object of named sets");
    for (const auto& [name, s] : sets.items()) {
      m.sets[name] = ParseSet(s, Child("/sets", name));
    }
  }
  for (std::size_t j = 0; j < m.variables.size(); ++j) {
    const auto& r = m.variables[j].adjustable;
    if (r && !r->set.empty() && !m.sets.count(r->set)) {
      Fail(Child(Child(Child("/variables", j), "adjustable"), "set"),
           "unknown set '" + r->set + "'");
    }
  }
  if (doc.contains("constraints")) {
    const Json& cons = doc.at("constraints");
    if (!cons.is_array()) Fail("/constraints", "expected an array");
    for (std::size_t i = 0; i < cons.size(); ++i) {
      const std::string ptr = Child("/constraints", i);
      const Json& c = cons[i];
      CheckKeys(c, ptr, {"name", "a", "P", "sense", "rhs", "rhs_P", "set",
                         "allow_uncertain_equality"});
      UncertainConstraint row;
      row.name = c.contains("name") ? String(c.at("name"), Child(ptr, "name"))
                                    : "c" + std::to_string(i);
      if (c.contains("a")) row.a = Coefs(m, c.at("a"), Child(ptr, "a"));
      if (c.contains("P")) row.p = Factors(m, c.at("P"), Child(ptr, "P"));
      row.sense = ParseSense(Required(c, "sense", ptr), Child(ptr, "sense"));
      if (c.contains("rhs")) row.rhs = Real(c.at("rhs"), Child(ptr, "rhs"));
      if (c.contains("rhs_P")) row.rhs_factor = ZetaCoefs(c.at("rhs_P"), Child(ptr, "rhs_P"));
      if (c.contains("set")) {
        row.set = String(c.at("set"), Child(ptr, "set"));
        if (!m.sets.count(row.set)) Fail(Child(ptr, "set"), "unknown set '" + row.set + "'");
      }
      if ((!row.p.empty() || !row.rhs_factor.empty()) && row.set.empty()) {
        Fail(Child(ptr, "set"), "an uncertain constraint must name its set");
      }
      if (c.contains("allow_uncertain_equality")) {
        row.allow_uncertain_equality =
            Bool(c.at("allow_uncertain_equality"), Child(ptr, "allow_uncertain_equality"));
      }
      m.constraints.push_back(std::move(row));
    }
  }
  {
    const Json& o = Required(doc, "objective", "");
    CheckKeys(o, "/objective", {"sense", "c", "constant", "C", "set"});
    const std::string sense = String(Required(o, "sense", "/objective"), "/objective/sense");
    if (sense == "min") {
      m.objective.sense = ObjectiveSense::kMinimize;
    } else if (sense == "max") {
      m.objective.sense = ObjectiveSense::kMaximize;
    } else {
      Fail("/objective/sense", "sense must be min or max");
    }
    if (o.contains("c")) m.objective.c = Coefs(m, o.at("c"), "/objective/c");
    if (o.contains("constant")) m.objective.constant = Real(o.at("constant"), "/objective/constant");
    if (o.contains("C")) m.objective.factor = Factors(m, o.at("C"), "/objective/C");
    if (o.contains("set")) {
      m.objective.set = String(o.at("set"), "/objective/set");
      if (!m.sets.count(m.objective.set)) Fail("/objective/set", "unknown set");
    }
    if (!m.objective.factor.empty() && m.objective.set.empty()) {
      Fail("/objective/set", "an uncertain objective must name its set");
    }
  }
  if (doc.contains("stages")) {
    const Json& st = doc.at("stages");
    if (!st.is_array()) Fail("/stages", "expected an array");
    for (std::size_t i = 0; i < st.size(); ++i) {
      const std::string ptr = Child("/stages", i);
      CheckKeys(st[i], ptr, {"decisions", "observed"});
      Stage s;
      const Json& d = Required(st[i], "decisions", ptr);
      if (!d.is_array()) Fail(Child(ptr, "decisions"), "expected an array of variable names");
      for (std::size_t k = 0; k < d.size(); ++k) {
        const std::string dp = Child(Child(ptr, "decisions"), k);
        s.decisions.push_back(VarRef(m, String(d[k], dp), dp));
      }
      if (st[i].contains("observed")) {
        s.observed = IndexArray(st[i].at("observed"), Child(ptr, "observed"));
      }
      m.stages.push_back(std::move(s));
    }
  }
  if (doc.contains("splits")) {
    const Json& sp = doc.at("splits");
    if (!sp.is_object()) Fail("/splits", "expected an object of named split schemes");
    for (const auto& [name, s] : sp.items()) {
      const std::string ptr = Child("/splits", name);
      CheckKeys(s, ptr, {"set", "indices", "cells"});
      SplitScheme scheme;
      scheme.set = String(Required(s, "set", ptr), Child(ptr, "set"));
      if (!m.sets.count(scheme.set)) Fail(Child(ptr, "set"), "unknown set '" + scheme.set + "'");
      scheme.indices = IndexArray(Required(s, "indices", ptr), Child(ptr, "indices"));
      const Json& cells = Required(s, "cells", ptr);
      if (!cells.is_array()) Fail(Child(ptr, "cells"), "expected an array of cells");
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const std::string cp = Child(Child(ptr, "cells"), c);
        const Matrix iv = RealMatrix(cells[c], cp);
        std::vector<Interval> cell;
        for (std::size_t k = 0; k < iv.size(); ++k) {
          if (iv[k].size() != 2) Fail(Child(cp, k), "an interval has two endpoints");
          cell.push_back({iv[k][0], iv[k][1]});
        }
        if (cell.size() != scheme.indices.size()) {
          Fail(cp, "a cell needs one interval per split index");
        }
        scheme.cells.push_back(std::move(cell));
      }
      try {
        CheckPartition(scheme, m.sets.at(scheme.set));
      } catch (const Error& e) {
        Fail(Child(ptr, "cells"), e.what());
      }
      out.splits[name] = std::move(scheme);
    }
  }
  return out;
}

inline ModelFile ParseModel(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what(), "/");
  } catch (const Json::out_of_range& e) {
    throw Error(std::string("number out of range: ") + e.what(), "/");
  }
  return ParseModelJson(doc);
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ModelFile LoadModel(const std::string& path) { return ParseModel(ReadFile(path)); }

namespace internal {

inline Json SetJson(const UncertaintySet& s) {
  if (s.sliced()) throw Error("a conditional slice cannot be serialized");
  Json p = Json::object();
  switch (s.kind) {
    case SetKind::kBox:
      p["lower"] = s.lower;
      p["upper"] = s.upper;
      break;
    case SetKind::kBall:
      p["center"] = s.center;
      p["omega"] = s.omega;
      break;
    case SetKind::kBallBox:
      p["dim"] = s.dim;
      p["omega"] = s.omega;
      break;
    case SetKind::kBudgeted:
      p["dim"] = s.dim;
      p["gamma"] = s.gamma;
      break;
    case SetKind::kPolyhedral:
      p["dim"] = s.dim;
      p["D"] = s.d;
      p["q"] = s.q;
      break;
    case SetKind::kClt:
      p["dim"] = s.dim;
      p["mu"] = s.mu;
      p["sigma"] = s.sigma;
      p["rho"] = s.rho;
      p["lower"] = s.lower;
      p["upper"] = s.upper;
      break;
    case SetKind::kScenarioHull:
      p["points"] = s.points;
      break;
  }
  Json j = Json::object();
  j["kind"] = ToString(s.kind);
  j["parameters"] = p;
  return j;
}

inline Json CoefJson(const UncertainLP& m, const std::map<int, double>& c) {
  Json j = Json::object();
  for (const auto& [v, x] : c) j[m.variables[v].name] = x;
  return j;
}

inline Json ZetaJson(const std::map<int, double>& c) {
  Json j = Json::object();
  for (const auto& [k, x] : c) j[std::to_string(k)] = x;
  return j;
}

inline Json FactorJson(const UncertainLP& m, const FactorMap& f) {
  Json j = Json::object();
  for (const auto& [v, row] : f) j[m.variables[v].name] = ZetaJson(row);
  return j;
}

}  // namespace internal

inline Json ModelToJson(const ModelFile& f) {
  using namespace internal;  // NOLINT(build/namespaces)
  const UncertainLP& m = f.model;
  Json doc = Json::object();
  doc["format"] = "robopt-model";
  Json vars = Json::array();
  for (const ModelVariable& v : m.variables) {
    Json j = Json::object();
    j["name"] = v.name;
    j["lb"] = BoundJson(v.lower);
    j["ub"] = BoundJson(v.upper);
    j["integer"] = v.integer;
    if (v.adjustable) {
      Json a = Json::object();
      if (!v.adjustable->set.empty()) a["set"] = v.adjustable->set;
      a["set_indices"] = v.adjustable->set_indices;
      a["info_base"] = v.adjustable->info_base;
      j["adjustable"] = a;
    }
    vars.push_back(j);
  }
  doc["variables"] = vars;
  Json sets = Json::object();
  for (const auto& [name, s] : m.sets) sets[name] = SetJson(s);
  doc["sets"] = sets;
  Json cons = Json::array();
  for (const UncertainConstraint& c : m.constraints) {
    Json j = Json::object();
    j["name"] = c.name;
    j["a"] = CoefJson(m, c.a);
    if (!c.p.empty()) j["P"] = FactorJson(m, c.p);
    j["sense"] = SenseString(c.sense);
    j["rhs"] = c.rhs;
    if (!c.rhs_factor.empty()) j["rhs_P"] = ZetaJson(c.rhs_factor);
    if (!c.set.empty()) j["set"] = c.set;
    if (c.allow_uncertain_equality) j["allow_uncertain_equality"] = true;
    cons.push_back(j);
  }
  doc["constraints"] = cons;
  Json o = Json::object();
  o["sense"] = m.objective.sense == ObjectiveSense::kMinimize ? "min" : "max";
  o["c"] = CoefJson(m, m.objective.c);
  o["constant"] = m.objective.constant;
  if (!m.objective.factor.empty()) o["C"] = FactorJson(m, m.objective.factor);
  if (!m.objective.set.empty()) o["set"] = m.objective.set;
  doc["objective"] = o;
  if (!m.stages.empty()) {
    Json st = Json::array();
    for (const Stage& s : m.stages) {
      Json j = Json::object();
      Json d = Json::array();
      for (int v : s.decisions) d.push_back(m.variables[v].name);
      j["decisions"] = d;
      j["observed"] = s.observed;
      st.push_back(j);
    }
    doc["stages"] = st;
  }
  if (!f.splits.empty()) {
    Json sp = Json::object();
    for (const auto& [name, s] : f.splits) {
      Json j = Json::object();
      j["set"] = s.set;
      j["indices"] = s.indices;
      Json cells = Json::array();
      for (const auto& cell : s.cells) {
        Json c = Json::array();
        for (const Interval& iv : cell) c.push_back(Json::array({iv.first, iv.second}));
        cells.push_back(c);
      }
      j["cells"] = cells;
      sp[name] = j;
    }
    doc["splits"] = sp;
  }
  return doc;
}

// Canonical text: two-space indentation and a trailing newline.
inline std::string SerializeModel(const ModelFile& f) { return ModelToJson(f).dump(2) + "\n"; }

inline std::string SerializeModel(const UncertainLP& m) {
  ModelFile f;
  f.model = m;
  return SerializeModel(f);
}

// Overrides one set parameter in a model document: "NAME.KEY=VALUE" where
// VALUE is a JSON literal, e.g. "D.omega=4" or "Z.upper=[1,1]".
inline void ApplySetOverride(Json* doc, const std::string& assignment) {
  const std::size_t dot = assignment.find('.');
  const std::size_t eq = assignment.find('=');
  if (dot == std::string::npos || eq == std::string::npos || dot > eq) {
    throw Error("set override '" + assignment + "' must read NAME.KEY=VALUE", "/sets");
  }
  const std::string name = assignment.substr(0, dot);
  const std::string key = assignment.substr(dot + 1, eq - dot - 1);
  const std::string ptr = "/sets/" + internal::EscapePointer(name);
  if (!doc->contains("sets") || !(*doc)["sets"].contains(name)) {
    throw Error("set override names an unknown set '" + name + "'", ptr);
  }
  Json value;
  try {
    value = Json::parse(assignment.substr(eq + 1));
  } catch (const Json::exception&) {
    throw Error("set override value is not a JSON literal", ptr + "/parameters/" + key);
  }
  (*doc)["sets"][name]["parameters"][key] = value;
}

// ---------------------------------------------------------------------------
// Reports.

inline Json DiagnosticsJson(const std::vector<Diagnostic>& diags) {
  Json out = Json::array();
  for (const Diagnostic& d : diags) {
    Json j = Json::object();
    j["severity"] = ToString(d.severity);
    j["code"] = d.code;
    j["message"] = d.message;
    j["pointer"] = d.pointer;
    if (!d.constraints.empty()) j["constraints"] = d.constraints;
    out.push_back(j);
  }
  return out;
}

// One entry per generated row and variable of a reformulation.
inline Json ProvenanceJson(const ReformulationArtifact& art) {
  auto entry = [](const std::string& name, const Provenance& p) {
    Json j = Json::object();
    j["name"] = name;
    j["source"] = p.source;
    j["set_kind"] = p.set_kind;
    j["role"] = p.role;
    return j;
  };
  Json out = Json::object();
  Json rows = Json::array();
  for (std::size_t i = 0; i < art.rows.size(); ++i) {
    rows.push_back(entry(i < art.milp.rows.size() ? art.milp.rows[i].name : "", art.rows[i]));
  }
  Json vars = Json::array();
  for (std::size_t i = 0; i < art.vars.size(); ++i) {
    vars.push_back(entry(art.milp.variables[i].name, art.vars[i]));
  }
  out["rows"] = rows;
  out["variables"] = vars;
  out["num_original"] = art.num_original;
  return out;
}

inline Json ToleranceJson(const SolverOptions& s) {
  Json j = Json::object();
  j["feasibility"] = s.feasibility_tolerance;
  j["integrality"] = s.integrality_tolerance;
  j["pivot"] = s.pivot_tolerance;
  j["optimality"] = s.optimality_tolerance;
  j["max_iterations"] = s.max_iterations;
  j["max_nodes"] = s.max_nodes;
  return j;
}

// CSV cell text with 17 significant digits.
inline std::string CsvNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Writes rows with comma separators and LF line endings.
inline std::string Csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out += '"';
        for (char ch : c) {
          if (ch == '"') out += '"';
          out += ch;
        }
        out += '"';
      } else {
        out += c;
      }
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

}  // namespace robopt

#endif  // ROBOPT_IO_HPP_
