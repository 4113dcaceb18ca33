#include <gtest/gtest.h>
#include <sys/wait.h>

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "dirac1d/errors.hpp"
#include "dirac1d/scenario.hpp"

using namespace dirac1d;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<ValidationIssue> issues_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<ValidationIssue>& issues, const std::string& path) {
  for (const auto& i : issues)
    if (i.path == path) return true;
  return false;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dirac1d_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args) {
  const int status = std::system((std::string(DIRAC1D_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& body) {
  const fs::path p = dir / (name + ".json");
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST(Parse, MinimalConfigTakesDefaults) {
  const auto c = parse_scenario(R"({"scenario": "s", "experiment": {"name": "schwinger-standard"}})");
  EXPECT_DOUBLE_EQ(c.domain_length, 2 * std::numbers::pi);
  EXPECT_EQ(c.cutoff, 3);
  EXPECT_DOUBLE_EQ(c.charge, 1.0);
  EXPECT_EQ(c.potential_preset, "zero");
  EXPECT_EQ(c.state.kind, "vacuum");
}

TEST(Parse, RegularizedCutoffMustBeBelowLatticeCutoff) {
  const auto issues = issues_of(R"({"scenario": "s", "lattice": {"cutoff": 2},
      "state": {"kind": "regularized", "r_cut": 2}, "experiment": {"name": "vacuum-stability"}})");
  EXPECT_TRUE(mentions(issues, "state.r_cut"));
}

TEST(Parse, ReportsEveryViolationWithPaths) {
  const auto issues = issues_of(R"({"scenario": "s", "bogus": 1, "lattice": {"cutoff": 40, "extra": true},
      "potential": {"preset": "mode-wave", "params": {"mode": 9}},
      "experiment": {"name": "no-such-experiment"}})");
  EXPECT_TRUE(mentions(issues, "bogus"));
  EXPECT_TRUE(mentions(issues, "lattice.cutoff"));
  EXPECT_TRUE(mentions(issues, "lattice.extra"));
  EXPECT_TRUE(mentions(issues, "experiment.name"));
  EXPECT_GE(issues.size(), 4u);
}

TEST(Parse, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_scenario("{"), ValidationError);
  EXPECT_THROW(parse_scenario("[1, 2]"), ValidationError);
  EXPECT_TRUE(mentions(issues_of(R"({"scenario": "s", "time_step": 0.3, "experiment": {"name": "phase-solver"}})"),
                       "time_step"));
}

TEST(Parse, UnknownToleranceAndParamKeys) {
  const auto issues = issues_of(R"({"scenario": "s", "experiment": {"name": "phase-solver",
      "params": {"nope": 1}, "tolerances": {"residual": 1e-3, "missing": 1}}})");
  EXPECT_TRUE(mentions(issues, "experiment.params.nope"));
  EXPECT_TRUE(mentions(issues, "experiment.tolerances.missing"));
}

TEST(Golden, RoundTripUnchanged) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(DIRAC1D_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const std::string text = slurp(entry.path());
    EXPECT_EQ(serialize_scenario(parse_scenario(text)), text) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 14);
}

TEST(Golden, EveryExperimentCovered) {
  std::set<std::string> seen;
  for (const auto& entry : fs::directory_iterator(DIRAC1D_SCENARIO_DIR))
    if (entry.path().extension() == ".json") seen.insert(load_scenario(entry.path()).experiment);
  for (const auto& e : experiment_registry()) EXPECT_TRUE(seen.count(e.name)) << e.name;
}

TEST(Registry, NamesEquationsAndChecks) {
  for (const auto& e : experiment_registry()) {
    EXPECT_EQ(e.equations.rfind("Eq", 0), 0u) << e.name;
    EXPECT_FALSE(e.checks.empty()) << e.name;
    EXPECT_EQ(find_experiment(e.name), &e);
  }
  EXPECT_EQ(find_experiment("nope"), nullptr);
}

TEST(Report, EmptyListIsUsageError) { EXPECT_THROW(emit_report({}, scratch("empty")), ConfigError); }

TEST(Report, OneLinePerCheckWithTags) {
  const fs::path dir = scratch("report");
  const auto cfg = load_scenario(fs::path(DIRAC1D_SCENARIO_DIR) / "schwinger-standard.json");
  const auto run = run_scenario(cfg, dir);
  EXPECT_EQ(run.checks.size(), find_experiment("schwinger-standard")->checks.size());
  const auto summary = emit_report({run}, dir);
  EXPECT_NE(summary.text.find("Eq 6.17 coincidence derivative: PASS"), std::string::npos);
  EXPECT_NE(summary.text.find("4/4 checks passed"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "schwinger-standard" / "schwinger-standard.csv"));
  EXPECT_EQ(load_report(dir).text, summary.text);
}

TEST(Run, ResourceCeilingBeforeAllocation) {
  const auto cfg = parse_scenario(R"({"scenario": "big", "lattice": {"cutoff": 6},
      "experiment": {"name": "vacuum-energy"}})");
  EXPECT_THROW(run_scenario(cfg, scratch("resource")), ResourceError);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  const fs::path good = fs::path(DIRAC1D_SCENARIO_DIR) / "schwinger-standard.json";
  EXPECT_EQ(cli("run " + good.string() + " --out " + (dir / "ok").string()), 0);
  EXPECT_EQ(cli("report " + (dir / "ok").string()), 0);

  const auto failing = write_config(dir, "tight", R"({"scenario": "tight", "lattice": {"cutoff": 2},
      "experiment": {"name": "schwinger-scaling", "tolerances": {"closed-form": -1.0}}})");
  EXPECT_EQ(cli("run " + failing.string() + " --out " + (dir / "fail").string()), 1);
  EXPECT_NE(slurp(dir / "fail" / "report.txt").find("closed form"), std::string::npos);
  EXPECT_EQ(cli("report " + (dir / "fail").string()), 1);

  const auto invalid = write_config(dir, "bad", R"({"scenario": "bad", "lattice": {"cutoff": 0}})");
  EXPECT_EQ(cli("validate " + invalid.string()), 2);
  EXPECT_EQ(cli("run " + invalid.string()), 2);
  EXPECT_EQ(cli("run"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);

  const auto big = write_config(dir, "big", R"({"scenario": "big", "lattice": {"cutoff": 5},
      "experiment": {"name": "two-electron-current"}, "state": {"kind": "two_electron"}})");
  EXPECT_EQ(cli("run " + big.string() + " --out " + (dir / "big").string()), 3);
  EXPECT_EQ(cli("list-experiments"), 0);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const fs::path cfg = fs::path(DIRAC1D_SCENARIO_DIR) / "two-electron-current.json";
  ASSERT_EQ(cli("run " + cfg.string() + " --out " + a.string()), 0);
  ASSERT_EQ(cli("run " + cfg.string() + " --out " + b.string()), 0);
  for (const auto& entry : fs::directory_iterator(a / "two-electron-current"))
    EXPECT_EQ(slurp(entry.path()), slurp(b / "two-electron-current" / entry.path().filename())) << entry.path();
}
