#pragma once

#include <filesystem>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "dirac1d/background.hpp"
#include "dirac1d/errors.hpp"
#include "dirac1d/fockspace.hpp"

namespace dirac1d {

using Json = nlohmann::ordered_json;

struct ValidationIssue {
  std::string path;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

struct StateSpec {
  std::string kind = "vacuum";  // vacuum | regularized | two_electron | custom
  int r_cut = 1;
  int p = 2;
  int q_m = 1;
  std::vector<ModeIndex> occupations;
};

struct ScenarioConfig {
  std::string scenario;
  double domain_length = 0.0;
  int cutoff = 3;
  double charge = 1.0;
  std::string potential_preset = "zero";
  Json potential_params = Json::object();
  StateSpec state;
  std::string experiment;
  Json experiment_params = Json::object();
  Json tolerances = Json::object();
  double horizon = 1.0;
  double time_step = 0.01;
  std::string output_directory = "out";
  std::vector<std::string> formats = {"csv", "json"};

  LatticeConfig lattice() const { return LatticeConfig::make(domain_length, cutoff, charge); }
};

// Parses and validates; throws ValidationError listing every violation.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
// Canonical form: every field present, fixed key order, two-space indent.
std::string serialize_scenario(const ScenarioConfig& cfg);

PotentialField build_potential(const ScenarioConfig& cfg);
GaugeFunction build_gauge(const ScenarioConfig& cfg, const Json& gauge);
FockVector build_state(const FockBasis& basis, const StateSpec& state);

struct CheckSpec {
  std::string key;
  std::string tag;    // equation reference shown in reports
  std::string label;
  double tolerance = 0.0;
  std::string relation = "<=";  // measured <= tolerance, or measured >= tolerance
};

struct CheckResult {
  std::string key;
  std::string tag;
  std::string label;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string relation;
  bool passed = false;
  bool skipped = false;
  std::string note;
};

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string format_double(double x);

struct ExperimentOutput {
  std::vector<Table> tables;
  Json summary = Json::object();  // written as <experiment>.json when non-empty
  std::vector<CheckResult> checks;
};

// Resolves declared checks against the configured tolerance overrides.
class CheckBook {
 public:
  CheckBook(const std::vector<CheckSpec>& specs, const Json& overrides);
  CheckResult check(const std::string& key, double measured, std::string note = {}) const;
  CheckResult skip(const std::string& key, std::string note) const;
  double tolerance(const std::string& key) const;

 private:
  const CheckSpec& spec(const std::string& key) const;
  std::vector<CheckSpec> specs_;
  Json overrides_;
};

struct ExperimentInfo {
  std::string name;
  std::string equations;
  std::string description;
  Json params;  // defaults; also the accepted keys and types
  std::vector<CheckSpec> checks;
  bool needs_fock = false;
  std::function<ExperimentOutput(const ScenarioConfig&, const CheckBook&)> run;
};

const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo* find_experiment(const std::string& name);

struct RunReport {
  std::string scenario;
  std::string experiment;
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;

  bool passed() const;
};

// Runs the experiment and writes <out_root>/<scenario>/<experiment>.csv (and
// .json). Throws ResourceError before allocating an oversized Fock space.
RunReport run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_root);

struct ReportSummary {
  std::string text;
  Json json;
  int passed = 0;
  int total = 0;
  bool all_passed() const { return passed == total; }
};

// Renders one line per check and writes report.txt / report.json into dir.
// Throws ConfigError for an empty report list.
ReportSummary emit_report(const std::vector<RunReport>& reports, const std::filesystem::path& dir);
// Re-renders a previously written report.json.
ReportSummary load_report(const std::filesystem::path& dir);

void write_csv(const Table& table, const std::filesystem::path& path);

}  // namespace dirac1d
