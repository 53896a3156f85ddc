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

// Command-line front end. Exit status: 0 success, 1 model or usage error,
// 2 when the solver does not reach an optimal solution.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robopt/adjustable_integer.hpp"
#include "robopt/adversarial.hpp"
#include "robopt/evaluate.hpp"
#include "robopt/io.hpp"
#include "robopt/model.hpp"
#include "robopt/reformulate.hpp"

namespace robopt {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitModel = 1;
constexpr int kExitSolver = 2;

struct RunConfig {
  std::string command;
  std::string model_path;
  std::vector<std::string> set_overrides;
  std::optional<std::uint64_t> seed;
  int samples = 1000;
  std::string mode = "interior";
  std::string uncertainty;
  SolverOptions solver;
  double violation_tolerance = 1e-7;
  std::string output;
  std::string format = "json";
  // Command specific.
  std::string policy = "rc";
  std::string split;
  int split_index = 0;
  int split_count = 0;
  bool reoptimize = true;
  std::vector<std::string> scenarios;
  std::string variable;
  double grid_from = 0.0;
  double grid_to = 0.0;
  double grid_step = 0.0;
  std::string log_path;
  bool provenance = false;
};

std::string StatusString(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

std::string SenseString(ObjectiveSense s) {
  return s == ObjectiveSense::kMinimize ? "min" : "max";
}

Json ValuesJson(const UncertainLP& m, const Vector& x) {
  Json j = Json::object();
  for (int i = 0; i < m.num_variables() && i < static_cast<int>(x.size()); ++i) {
    j[m.variables[i].name] = x[i];
  }
  return j;
}

Json StatsJson(const SummaryStats& s) {
  Json j = Json::object();
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["worst"] = s.worst;
  j["best"] = s.best;
  return j;
}

PolicyKind ParsePolicy(const std::string& s) {
  if (s == "nominal") return PolicyKind::kNominal;
  if (s == "rc") return PolicyKind::kRc;
  if (s == "aarc") return PolicyKind::kAarc;
  if (s == "arc-split") return PolicyKind::kArcSplit;
  throw Error("unknown policy '" + s + "'");
}

class Runner {
 public:
  explicit Runner(RunConfig cfg) : cfg_(std::move(cfg)) {}

  int Run() {
    Load();
    const std::string& c = cfg_.command;
    if (c == "validate" || c == "lint") return Check(c == "lint");
    RequireValid();
    if (c == "solve-nominal") return SolveStatic(PolicyKind::kNominal);
    if (c == "solve-rc") return SolveStatic(PolicyKind::kRc);
    if (c == "solve-aarc") return SolveStatic(PolicyKind::kAarc);
    if (c == "solve-adversarial") return Adversarial();
    if (c == "solve-arc-split") return ArcSplit();
    if (c == "bound") return Bound();
    if (c == "evaluate") return Evaluate();
    if (c == "folding-horizon") return Folding();
    if (c == "compare") return Compare();
    if (c == "sweep") return SweepCommand();
    throw Error("unknown command '" + c + "'");
  }

 private:
  void Load() {
    Json doc;
    try {
      doc = Json::parse(ReadFile(cfg_.model_path));
    } catch (const Json::exception& e) {
      throw Error(std::string("malformed JSON: ") + e.what(), "/");
    }
    for (const std::string& o : cfg_.set_overrides) ApplySetOverride(&doc, o);
    file_ = ParseModelJson(doc);
  }

  const UncertainLP& model() const { return file_.model; }

  void RequireValid() {
    const std::vector<Diagnostic> d = Validate(model());
    for (const Diagnostic& x : d) {
      if (x.severity == Severity::kError) throw Error(x.message, x.pointer);
    }
  }

  Json Header() const {
    Json j = Json::object();
    j["tool"] = "robopt";
    j["version"] = kVersion;
    j["command"] = cfg_.command;
    j["model"] = cfg_.model_path;
    j["set_overrides"] = cfg_.set_overrides;
    j["seed"] = cfg_.seed ? Json(*cfg_.seed) : Json(nullptr);
    j["tolerances"] = ToleranceJson(cfg_.solver);
    j["tolerances"]["violation"] = cfg_.violation_tolerance;
    return j;
  }

  std::string Set() const {
    if (!cfg_.uncertainty.empty()) {
      if (!model().sets.count(cfg_.uncertainty)) {
        throw Error("unknown uncertainty set '" + cfg_.uncertainty + "'");
      }
      return cfg_.uncertainty;
    }
    if (model().sets.size() != 1) {
      throw Error("the model has several sets; choose one with --uncertainty");
    }
    return model().sets.begin()->first;
  }

  std::uint64_t Seed() const {
    if (!cfg_.seed) throw Error("--seed is required for " + cfg_.command);
    return *cfg_.seed;
  }

  SampleMode Mode() const {
    if (cfg_.mode == "interior") return SampleMode::kInterior;
    if (cfg_.mode == "boundary") return SampleMode::kBoundary;
    throw Error("mode must be interior or boundary");
  }

  SampleBatch Draws(Json* report) const {
    const SampleBatch b = Sample(model().sets.at(Set()), cfg_.samples, Seed(), Mode());
    Json s = Json::object();
    s["set"] = Set();
    s["count"] = cfg_.samples;
    s["mode"] = ToString(b.mode);
    s["sampler"] = b.sampler;
    (*report)["sampling"] = s;
    return b;
  }

  std::optional<SplitScheme> Split() const {
    if (!cfg_.split.empty()) {
      auto it = file_.splits.find(cfg_.split);
      if (it == file_.splits.end()) throw Error("unknown split '" + cfg_.split + "'", "/splits");
      return it->second;
    }
    if (cfg_.split_count > 0) {
      const std::string set = Set();
      return EqualSplit(set, model().sets.at(set), cfg_.split_index, cfg_.split_count);
    }
    return std::nullopt;
  }

  PolicyOptions Policy() const {
    PolicyOptions p;
    p.kind = ParsePolicy(cfg_.policy);
    p.solver = cfg_.solver;
    if (p.kind == PolicyKind::kArcSplit) {
      p.split = Split();
      if (!p.split) throw Error("arc-split policy needs --split or --split-count");
    }
    return p;
  }

  int Emit(const Json& report, const std::string& csv, bool ok) {
    const std::string text = cfg_.format == "csv" ? csv : report.dump(2) + "\n";
    if (cfg_.output.empty()) {
      std::cout << text;
    } else {
      std::filesystem::path path(cfg_.output);
      if (const char* dir = std::getenv("ROBOPT_OUTPUT_DIR"); dir && path.is_relative()) {
        path = std::filesystem::path(dir) / path;
      }
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error("cannot write '" + path.string() + "'");
      out << text;
    }
    if (!ok) {
      std::cerr << Json({{"error", "solver"},
                         {"status", report.value("status", std::string("unknown"))},
                         {"message", "no optimal solution"}})
                       .dump()
                << "\n";
      return kExitSolver;
    }
    return kExitOk;
  }

  int Check(bool lint) {
    // Validation already includes the lint findings; validate keeps errors.
    std::vector<Diagnostic> d;
    for (const Diagnostic& x : Validate(model())) {
      if (lint || x.severity == Severity::kError) d.push_back(x);
    }
    Json r = Header();
    r["valid"] = !HasErrors(d);
    r["diagnostics"] = DiagnosticsJson(d);
    std::vector<std::vector<std::string>> rows;
    for (const Diagnostic& x : d) rows.push_back({ToString(x.severity), x.code, x.pointer, x.message});
    Emit(r, Csv({"severity", "code", "pointer", "message"}, rows), true);
    if (HasErrors(d)) {
      for (const Diagnostic& x : d) {
        if (x.severity != Severity::kError) continue;
        std::cerr << Json({{"error", "model"}, {"code", x.code}, {"pointer", x.pointer},
                           {"message", x.message}})
                         .dump()
                  << "\n";
      }
      return kExitModel;
    }
    return kExitOk;
  }

  int SolveStatic(PolicyKind kind) {
    PolicyOptions p;
    p.kind = kind;
    p.solver = cfg_.solver;
    const std::string set = model().sets.empty() ? "" : Set();
    const PolicySolution s = SolvePolicy(model(), set, p);
    Json r = Header();
    r["policy"] = ToString(kind);
    r["status"] = StatusString(s.status);
    r["sense"] = SenseString(model().objective.sense);
    std::vector<std::vector<std::string>> rows;
    if (s.status == SolveStatus::kOptimal) {
      r["objective"] = s.objective;
      r["solution"] = ValuesJson(model(), s.x);
      if (kind == PolicyKind::kAarc) r["solution_at"] = "nominal zeta";
      rows.push_back({"objective", CsvNumber(s.objective)});
      for (int j = 0; j < model().num_variables(); ++j) {
        rows.push_back({model().variables[j].name, CsvNumber(s.x[j])});
      }
    }
    if (cfg_.provenance && kind == PolicyKind::kRc && internal::RcCapable(model())) {
      UncertainLP st = internal::Static(model());
      if (st.objective.IsUncertain()) st = EpigraphObjective(st, "policy#t");
      r["provenance"] = ProvenanceJson(ReformulateRc(st));
    }
    return Emit(r, Csv({"name", "value"}, rows), s.status == SolveStatus::kOptimal);
  }

  int Adversarial() {
    AdversarialOptions opt;
    opt.solver = cfg_.solver;
    std::ofstream log;
    if (!cfg_.log_path.empty()) {
      log.open(cfg_.log_path);
      if (!log) throw Error("cannot write '" + cfg_.log_path + "'");
      opt.log = &log;
    }
    UncertainLP st = internal::Static(model());
    if (st.objective.IsUncertain()) st = EpigraphObjective(st, "policy#t");
    const AdversarialResult a = SolveAdversarial(st, opt);
    const bool ok = a.converged && a.result.status == SolveStatus::kOptimal;
    Json r = Header();
    r["status"] = ok ? "optimal" : StatusString(a.result.status);
    r["converged"] = a.converged;
    r["rounds"] = a.rounds;
    r["objective_trace"] = a.objective_trace;
    std::vector<std::vector<std::string>> rows;
    if (a.result.status == SolveStatus::kOptimal) {
      r["objective"] = a.result.objective;
      r["solution"] = ValuesJson(model(), a.result.values);
      rows.push_back({"objective", CsvNumber(a.result.objective)});
    }
    return Emit(r, Csv({"name", "value"}, rows), ok);
  }

  int ArcSplit() {
    const std::optional<SplitScheme> scheme = Split();
    if (!scheme) throw Error("solve-arc-split needs --split or --split-count");
    ArcOptions opt;
    opt.solver = cfg_.solver;
    const ArcSolution a = SolveArc(model(), *scheme, opt);
    Json r = Header();
    r["subsets"] = scheme->size();
    r["status"] = StatusString(a.status);
    if (a.status != SolveStatus::kOptimal) return Emit(r, "", false);
    r["worst_case"] = a.t_star;
    r["cell_objectives"] = a.cell_objective;
    r["average"] = a.average;
    r["here_and_now"] = ValuesJson(model(), a.x);
    ArcSolution shown = a;
    if (cfg_.reoptimize) {
      const ArcSolution re = ReoptimizeAverage(model(), *scheme, a.t_star, opt);
      if (re.status == SolveStatus::kOptimal) {
        shown = re;
        r["reoptimized"] = {{"worst_case", re.t_star},
                            {"cell_objectives", re.cell_objective},
                            {"average", re.average}};
      }
    }
    Json cells = Json::array();
    for (int i = 0; i < scheme->size(); ++i) {
      Json c = Json::object();
      Json iv = Json::array();
      for (const Interval& x : scheme->cells[i]) iv.push_back({x.first, x.second});
      c["intervals"] = iv;
      c["decision"] = ValuesJson(model(), shown.recourse[i]);
      cells.push_back(c);
    }
    r["cells"] = cells;
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < scheme->size(); ++i) {
      rows.push_back({std::to_string(i + 1), CsvNumber(shown.cell_objective[i])});
    }
    rows.push_back({"worst", CsvNumber(a.t_star)});
    rows.push_back({"average", CsvNumber(shown.average)});
    return Emit(r, Csv({"subset", "objective"}, rows), true);
  }

  int Bound() {
    std::vector<Vector> scen;
    const std::string set = Set();
    for (const std::string& s : cfg_.scenarios) {
      Vector z;
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0' || !std::isfinite(v)) {
          throw Error("scenario '" + s + "' is not a list of numbers");
        }
        z.push_back(v);
      }
      scen.push_back(z);
    }
    if (scen.empty()) {
      const std::optional<SplitScheme> scheme = Split();
      if (!scheme) throw Error("bound needs --scenario values or a split");
      ArcOptions aopt;
      aopt.solver = cfg_.solver;
      const ArcSolution a = SolveArc(model(), *scheme, aopt);
      if (a.status != SolveStatus::kOptimal) throw Error("split solve failed");
      scen = PessimizingScenarios(model(), *scheme, a);
    }
    ArcOptions opt;
    opt.solver = cfg_.solver;
    const SolveResult b = BoundViaScenarios(model(), set, scen, opt);
    Json r = Header();
    r["scenarios"] = scen;
    r["status"] = StatusString(b.status);
    std::vector<std::vector<std::string>> rows;
    if (b.status == SolveStatus::kOptimal) {
      r["bound"] = b.objective;
      rows.push_back({"bound", CsvNumber(b.objective)});
    }
    return Emit(r, Csv({"name", "value"}, rows), b.status == SolveStatus::kOptimal);
  }

  int Evaluate() {
    Json r = Header();
    const std::string set = Set();
    const SampleBatch batch = Draws(&r);
    const PolicyOptions p = Policy();
    const PolicySolution sol = SolvePolicy(model(), set, p);
    r["policy"] = ToString(p.kind);
    r["status"] = StatusString(sol.status);
    if (sol.status != SolveStatus::kOptimal) return Emit(r, "", false);
    EvaluationOptions eopt;
    eopt.tolerance = cfg_.violation_tolerance;
    eopt.reoptimize = AnalysisVariables(model());
    eopt.solver = cfg_.solver;
    const SimulationReport rep = EvaluateSolution(model(), sol.decide, batch, set, eopt);
    const DrawValues ph = PerfectHindsight(model(), batch, set, cfg_.solver);
    PolicyOptions nom = p;
    nom.kind = PolicyKind::kNominal;
    const PolicySolution ns = SolvePolicy(model(), set, nom);
    r["planned_objective"] = sol.objective;
    Json cons = Json::array();
    std::vector<std::vector<std::string>> rows;
    for (const ConstraintStats& c : rep.constraints) {
      cons.push_back({{"name", c.name},
                      {"equality_abs_residual", c.equality},
                      {"violation_probability", c.violation_probability},
                      {"mean_violation", c.mean_violation},
                      {"worst_violation", c.worst_violation},
                      {"std_violation", c.std_violation}});
      rows.push_back({c.name, CsvNumber(c.violation_probability), CsvNumber(c.mean_violation),
                      CsvNumber(c.worst_violation), CsvNumber(c.std_violation)});
    }
    r["constraints"] = cons;
    r["mean_violated_constraints"] = rep.mean_violated_constraints;
    r["objective"] = StatsJson(rep.objective);
    Json prices = Json::object();
    if (ns.status == SolveStatus::kOptimal) {
      const SimulationReport nrep = EvaluateSolution(model(), ns.decide, batch, set, eopt);
      const PriceReport pr =
          Prices(model(), sol.objective, ns.objective, rep.objectives, nrep.objectives, ph.values);
      prices["por"] = pr.por ? Json(*pr.por) : Json(nullptr);
      prices["apor"] = pr.apor;
      prices["pou_mean"] = pr.pou_mean;
      prices["pou_std"] = pr.pou_std;
    }
    prices["hindsight_excluded"] = ph.excluded;
    r["prices"] = prices;
    return Emit(r,
                Csv({"constraint", "violation_probability", "mean_violation", "worst_violation",
                     "std_violation"},
                    rows),
                true);
  }

  int Folding() {
    Json r = Header();
    const std::string set = Set();
    const SampleBatch batch = Draws(&r);
    FoldingOptions fopt;
    fopt.policy = Policy();
    fopt.solver = cfg_.solver;
    const PolicySolution sol = SolvePolicy(model(), set, fopt.policy);
    r["policy"] = ToString(fopt.policy.kind);
    r["status"] = StatusString(sol.status);
    if (sol.status != SolveStatus::kOptimal) return Emit(r, "", false);
    const DrawValues st = StaticObjectives(model(), sol, batch, set, cfg_.solver);
    const DrawValues fh = FoldingHorizon(model(), batch, set, fopt);
    const DrawValues ph = PerfectHindsight(model(), batch, set, cfg_.solver);
    const ObjectiveSense sense = model().objective.sense;
    r["first_stage"] = ValuesJson(model(), sol.x);
    r["static"] = StatsJson(internal::Summarize(st.values, sense));
    r["folding_horizon"] = StatsJson(internal::Summarize(fh.values, sense));
    r["folding_horizon"]["excluded"] = fh.excluded;
    r["hindsight"] = StatsJson(internal::Summarize(ph.values, sense));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < batch.draws.size(); ++i) {
      rows.push_back({std::to_string(i), CsvNumber(st.values[i]), CsvNumber(fh.values[i]),
                      CsvNumber(ph.values[i])});
    }
    return Emit(r, Csv({"draw", "static", "folding_horizon", "hindsight"}, rows), true);
  }

  int Compare() {
    Json r = Header();
    const std::string set = Set();
    const SampleBatch batch = Draws(&r);
    const Comparison c = ComparePolicies(model(), batch, set, cfg_.solver);
    Json rows_json = Json::array();
    std::vector<std::vector<std::string>> rows;
    bool ok = true;
    for (const PolicyRow& p : c.rows) {
      const std::string mode = p.folding ? "folding_horizon" : "static";
      ok = ok && p.status == SolveStatus::kOptimal;
      Json j = {{"policy", ToString(p.kind)}, {"mode", mode}, {"status", StatusString(p.status)},
                {"planned", p.planned},       {"mean", p.stats.mean},
                {"std", p.stats.std},         {"worst", p.stats.worst},
                {"pou_mean", p.pou_mean},     {"pou_std", p.pou_std},
                {"excluded", p.excluded}};
      rows_json.push_back(j);
      rows.push_back({ToString(p.kind), mode, CsvNumber(p.stats.mean), CsvNumber(p.stats.std),
                      CsvNumber(p.stats.worst), CsvNumber(p.pou_mean), CsvNumber(p.pou_std)});
    }
    rows.push_back({"hindsight", "hindsight", CsvNumber(c.hindsight_stats.mean),
                    CsvNumber(c.hindsight_stats.std), CsvNumber(c.hindsight_stats.worst), "0",
                    "0"});
    r["status"] = ok ? "optimal" : "incomplete";
    r["policies"] = rows_json;
    r["hindsight"] = StatsJson(c.hindsight_stats);
    r["hindsight"]["excluded"] = c.hindsight.excluded;
    r["hindsight_dominates"] = c.hindsight_dominates;
    r["sign_test"] = {{"defined", c.sign.defined}, {"pairs", c.sign.pairs},
                      {"zeros", c.sign.zeros},     {"rc_better", c.sign.x_better},
                      {"aarc_better", c.sign.y_better}, {"p_value", c.sign.p_value}};
    r["t_test"] = {{"defined", c.ttest.defined},
                   {"n", c.ttest.n},
                   {"mean_difference", c.ttest.mean_difference},
                   {"std_difference", c.ttest.std_difference},
                   {"t", std::isfinite(c.ttest.t) ? Json(c.ttest.t) : Json(nullptr)},
                   {"df", c.ttest.df},
                   {"p_value", c.ttest.p_value}};
    return Emit(r, Csv({"policy", "mode", "mean", "std", "worst", "pou_mean", "pou_std"}, rows),
                ok);
  }

  int SweepCommand() {
    if (cfg_.variable.empty()) throw Error("sweep needs --variable");
    if (!(cfg_.grid_step > 0.0) || cfg_.grid_to < cfg_.grid_from) {
      throw Error("sweep needs --grid-from <= --grid-to and a positive --grid-step");
    }
    const int v = model().Var(cfg_.variable);
    Vector grid;
    const int n = static_cast<int>(std::floor((cfg_.grid_to - cfg_.grid_from) / cfg_.grid_step + 1e-9));
    for (int i = 0; i <= n; ++i) grid.push_back(cfg_.grid_from + i * cfg_.grid_step);
    Json r = Header();
    const std::string set = Set();
    const SampleBatch batch = Draws(&r);
    FoldingOptions fopt;
    fopt.policy = Policy();
    fopt.solver = cfg_.solver;
    const auto curve = Sweep(model(), v, grid, batch, set, fopt);
    const bool maximize = model().objective.sense == ObjectiveSense::kMaximize;
    std::size_t best = 0;
    std::vector<std::vector<std::string>> rows;
    Json pts = Json::array();
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const double w = curve[i].second;
      const double b = curve[best].second;
      if (maximize ? w > b : w < b) best = i;
      rows.push_back({CsvNumber(curve[i].first), CsvNumber(w)});
      pts.push_back({curve[i].first, std::isfinite(w) ? Json(w) : Json(nullptr)});
    }
    r["policy"] = ToString(fopt.policy.kind);
    r["variable"] = cfg_.variable;
    r["curve"] = pts;
    r["argbest"] = curve[best].first;
    r["best_worst_case"] = curve[best].second;
    r["status"] = "optimal";
    return Emit(r, Csv({cfg_.variable, "worst_case"}, rows), true);
  }

  RunConfig cfg_;
  ModelFile file_;
};

void AddCommon(CLI::App* sub, RunConfig* cfg) {
  sub->add_option("model", cfg->model_path, "model JSON file")->required();
  sub->add_option("--set", cfg->set_overrides, "override a set parameter: NAME.KEY=VALUE");
  sub->add_option("--seed", cfg->seed, "master random seed");
  sub->add_option("--samples", cfg->samples, "number of draws")->check(CLI::PositiveNumber);
  sub->add_option("--mode", cfg->mode, "sampling mode")
      ->check(CLI::IsMember({"interior", "boundary"}));
  sub->add_option("--uncertainty", cfg->uncertainty, "uncertainty set driving the draws");
  sub->add_option("--feasibility-tol", cfg->solver.feasibility_tolerance);
  sub->add_option("--integrality-tol", cfg->solver.integrality_tolerance);
  sub->add_option("--optimality-tol", cfg->solver.optimality_tolerance);
  sub->add_option("--max-nodes", cfg->solver.max_nodes);
  sub->add_option("--max-iterations", cfg->solver.max_iterations);
  sub->add_option("--violation-tol", cfg->violation_tolerance);
  sub->add_option("-o,--output", cfg->output, "report path (stdout when omitted)");
  sub->add_option("--format", cfg->format)->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--policy", cfg->policy)
      ->check(CLI::IsMember({"nominal", "rc", "aarc", "arc-split"}));
  sub->add_option("--split", cfg->split, "named split scheme from the model file");
  sub->add_option("--split-index", cfg->split_index, "zeta coordinate for an equal split");
  sub->add_option("--split-count", cfg->split_count, "number of equal subsets");
  sub->add_flag("!--no-reoptimize", cfg->reoptimize, "skip the average re-optimization");
  sub->add_option("--scenario", cfg->scenarios, "comma-separated zeta for bound");
  sub->add_option("--variable", cfg->variable, "here-and-now variable for sweep");
  sub->add_option("--grid-from", cfg->grid_from);
  sub->add_option("--grid-to", cfg->grid_to);
  sub->add_option("--grid-step", cfg->grid_step);
  sub->add_option("--log", cfg->log_path, "JSON-lines iteration log for solve-adversarial");
  sub->add_flag("--provenance", cfg->provenance, "include row provenance in solve-rc");
}

int Main(int argc, char** argv) {
  CLI::App app{"robopt: robust optimization toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  RunConfig cfg;
  for (const char* name :
       {"validate", "lint", "solve-nominal", "solve-rc", "solve-adversarial", "solve-aarc",
        "solve-arc-split", "bound", "evaluate", "folding-horizon", "compare", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name);
    AddCommon(sub, &cfg);
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << Json({{"error", "usage"}, {"message", e.what()}}).dump() << "\n";
    return kExitModel;
  }
  try {
    return Runner(cfg).Run();
  } catch (const Error& e) {
    std::cerr << Json({{"error", "model"}, {"pointer", e.pointer()}, {"message", e.what()}}).dump()
              << "\n";
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << Json({{"error", "internal"}, {"message", e.what()}}).dump() << "\n";
    return kExitModel;
  }
}

}  // namespace
}  // namespace robopt

int main(int argc, char** argv) { return robopt::Main(argc, argv); }
