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

#include "robopt/io.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "integer_recourse_fixture.hpp"
#include "inventory_fixture.hpp"

namespace robopt {
namespace {

std::string Fixture(const std::string& name) {
  return ReadFile(std::string(ROBOPT_FIXTURE_DIR) + "/" + name);
}

const std::vector<std::string> kFixtures = {
    "integer_recourse.json",       "inventory.json", "multistage_inventory.json",
    "pitfall_inequality.json",     "rc_toy.json",    "pitfall_slack_equality.json",
};

// Pointer of the error raised while parsing `text`, or "" when it parses.
std::string ErrorPointer(const std::string& text) {
  try {
    ParseModel(text);
  } catch (const Error& e) {
    return e.pointer();
  }
  return "";
}

const char* kSmall = R"({
  "variables": [{"name": "x", "lb": 0, "ub": 4}, {"name": "y", "lb": null}],
  "sets": {"Z": {"kind": "box", "parameters": {"radius": [1]}}},
  "constraints": [{"a": {"x": 1, "y": 1}, "P": {"x": {"0": 0.5}}, "sense": "<=",
                   "rhs": "3.25", "set": "Z"}],
  "objective": {"sense": "max", "c": {"x": 1}}
})";

TEST(ParseModel, FixturesRoundTripByteIdentical) {
  for (const std::string& name : kFixtures) {
    const std::string text = Fixture(name);
    const std::string once = SerializeModel(ParseModel(text));
    EXPECT_EQ(once, text) << name;
    EXPECT_EQ(SerializeModel(ParseModel(once)), once) << name;
  }
}

TEST(ParseModel, FixtureMatchesBuilder) {
  const ModelFile f = ParseModel(Fixture("integer_recourse.json"));
  EXPECT_EQ(SerializeModel(f.model), SerializeModel(testing::IntegerRecourseModel()));
  ASSERT_EQ(f.splits.count("first_2"), 1u);
  EXPECT_NEAR(SolveArc(f.model, f.splits.at("first_2")).t_star, 31.0, 1e-6);
  const ModelFile inv = ParseModel(Fixture("inventory.json"));
  EXPECT_EQ(SerializeModel(inv.model), SerializeModel(testing::InventoryModel(true)));
}

TEST(ParseModel, DefaultsStringsAndNulls) {
  const ModelFile f = ParseModel(kSmall);
  const UncertainLP& m = f.model;
  ASSERT_EQ(m.num_variables(), 2);
  EXPECT_EQ(m.variables[1].lower, -kInfinity);
  EXPECT_EQ(m.variables[1].upper, kInfinity);
  EXPECT_EQ(m.constraints[0].rhs, 3.25);
  EXPECT_EQ(m.constraints[0].name, "c0");
  EXPECT_EQ(m.constraints[0].p.at(0).at(0), 0.5);
  EXPECT_EQ(m.sets.at("Z").lower, (Vector{-1.0}));
  // Radius input normalizes to lower/upper, after which text is stable.
  const std::string once = SerializeModel(f);
  EXPECT_EQ(SerializeModel(ParseModel(once)), once);
}

TEST(ParseModel, SchemaViolationsCarryPointers) {
  auto with = [](const std::string& from, const std::string& to) {
    std::string s = kSmall;
    const std::size_t at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return s.replace(at, from.size(), to);
  };
  EXPECT_EQ(ErrorPointer(kSmall), "");
  EXPECT_EQ(ErrorPointer(with("\"ub\": 4", "\"ub\": \"NaN\"")), "/variables/0/ub");
  EXPECT_EQ(ErrorPointer(with("\"ub\": 4", "\"ub\": \"inf\"")), "/variables/0/ub");
  EXPECT_EQ(ErrorPointer(with("\"ub\": 4", "\"ub\": 1e999")), "/");
  EXPECT_EQ(ErrorPointer(with("\"ub\": 4", "\"ub\": true")), "/variables/0/ub");
  EXPECT_EQ(ErrorPointer(with("\"ub\": 4", "\"upper\": 4")), "/variables/0/upper");
  EXPECT_EQ(ErrorPointer(with("\"sense\": \"<=\"", "\"sense\": \"<\"")), "/constraints/0/sense");
  EXPECT_EQ(ErrorPointer(with("{\"x\": {\"0\"", "{\"w\": {\"0\"")), "/constraints/0/P/w");
  EXPECT_EQ(ErrorPointer(with("{\"0\": 0.5}", "{\"a\": 0.5}")), "/constraints/0/P/x/a");
  EXPECT_EQ(ErrorPointer(with("\"set\": \"Z\"", "\"set\": \"Q\"")), "/constraints/0/set");
  EXPECT_EQ(ErrorPointer(with(", \"set\": \"Z\"", "")), "/constraints/0/set");
  EXPECT_EQ(ErrorPointer(with("\"radius\": [1]", "\"radius\": [-1]")), "/sets/Z/parameters");
  EXPECT_EQ(ErrorPointer(with("\"box\"", "\"cube\"")), "/sets/Z/kind");
  EXPECT_EQ(ErrorPointer(with("\"max\"", "\"maximize\"")), "/objective/sense");
  EXPECT_EQ(ErrorPointer(with("{\"name\": \"y\"", "{\"name\": \"x\"")), "/variables/1/name");
  EXPECT_EQ(ErrorPointer("{\"variables\": []}"), "/");
  EXPECT_EQ(ErrorPointer("{not json"), "/");
  EXPECT_EQ(ErrorPointer(with("\"variables\"", "\"vars\"")), "/vars");
}

TEST(ParseModel, SplitSchemesAreChecked) {
  std::string s = Fixture("integer_recourse.json");
  Json doc = Json::parse(s);
  doc["splits"]["first_2"]["cells"][1][0][0] = 0.5;
  EXPECT_EQ(ErrorPointer(doc.dump()), "/splits/first_2/cells");
  doc = Json::parse(s);
  doc["splits"]["first_2"]["cells"][1][0] = Json::array({0.0});
  EXPECT_EQ(ErrorPointer(doc.dump()), "/splits/first_2/cells/1/0");
}

TEST(ApplySetOverride, ChangesOneParameter) {
  Json doc = Json::parse(Fixture("inventory.json"));
  ApplySetOverride(&doc, "D.omega=4");
  EXPECT_EQ(ParseModelJson(doc).model.sets.at("D").omega, 4.0);
  EXPECT_THROW(ApplySetOverride(&doc, "E.omega=4"), Error);
  EXPECT_THROW(ApplySetOverride(&doc, "D.omega"), Error);
  EXPECT_THROW(ApplySetOverride(&doc, "D.omega=four"), Error);
  ApplySetOverride(&doc, "D.radius=1");
  EXPECT_THROW(ParseModelJson(doc), Error);
}

TEST(Csv, SeventeenDigitsAndQuoting) {
  EXPECT_EQ(CsvNumber(0.1), "0.10000000000000001");
  EXPECT_EQ(CsvNumber(29.0), "29");
  EXPECT_EQ(CsvNumber(-1.0 / 3.0), "-0.33333333333333331");
  EXPECT_EQ(std::stod(CsvNumber(2.0 / 3.0)), 2.0 / 3.0);
  EXPECT_EQ(Csv({"a", "b,c"}, {{"1", "x\"y"}}), "a,\"b,c\"\n1,\"x\"\"y\"\n");
}

TEST(Provenance, EveryGeneratedRowIsExplained) {
  const ModelFile f = ParseModel(Fixture("integer_recourse.json"));
  UncertainLP stat = f.model;
  for (auto& v : stat.variables) v.adjustable.reset();
  const ReformulationArtifact art = ReformulateRc(stat);
  const Json p = ProvenanceJson(art);
  EXPECT_EQ(p["rows"].size(), art.milp.rows.size());
  EXPECT_EQ(p["variables"].size(), art.milp.variables.size());
  for (const auto& row : p["rows"]) {
    EXPECT_GE(row["source"].get<int>(), 0);
    EXPECT_EQ(row["set_kind"], "box");
  }
}

TEST(Diagnostics, SerializeLintFindings) {
  const ModelFile f = ParseModel(Fixture("pitfall_slack_equality.json"));
  const Json d = DiagnosticsJson(Lint(f.model));
  ASSERT_FALSE(d.empty());
  bool slack = false;
  for (const auto& e : d) slack = slack || e["code"] == "non-adjustable-slack";
  EXPECT_TRUE(slack);
}

}  // namespace
}  // namespace robopt
