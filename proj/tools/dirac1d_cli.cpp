#include <CLI11.hpp>

#include <iostream>

#include "dirac1d/scenario.hpp"

namespace {

enum Exit : int { kPass = 0, kCheckFailure = 1, kUsage = 2, kResource = 3 };

void print_issues(const dirac1d::ValidationError& e, const std::string& source) {
  std::cerr << source << ": invalid configuration\n";
  for (const auto& i : e.issues()) std::cerr << "  " << i.path << ": " << i.message << "\n";
}

int cmd_run(const std::vector<std::string>& configs, const std::string& out) {
  std::vector<dirac1d::ScenarioConfig> parsed;
  bool bad = false;
  for (const auto& path : configs) {
    try {
      parsed.push_back(dirac1d::load_scenario(path));
    } catch (const dirac1d::ValidationError& e) {
      print_issues(e, path);
      bad = true;
    }
  }
  if (bad) return kUsage;
  const std::filesystem::path root = out.empty() ? std::filesystem::path(parsed.front().output_directory) : std::filesystem::path(out);
  std::vector<dirac1d::RunReport> reports;
  for (const auto& cfg : parsed) reports.push_back(dirac1d::run_scenario(cfg, root));
  const auto summary = dirac1d::emit_report(reports, root);
  std::cout << summary.text;
  return summary.all_passed() ? kPass : kCheckFailure;
}

int cmd_validate(const std::string& path) {
  try {
    const auto cfg = dirac1d::load_scenario(path);
    std::cout << path << ": valid (" << cfg.experiment << ")\n";
    return kPass;
  } catch (const dirac1d::ValidationError& e) {
    print_issues(e, path);
    return kUsage;
  }
}

int cmd_list() {
  for (const auto& e : dirac1d::experiment_registry()) {
    std::cout << e.name << "  [" << e.equations << "]  " << e.description << "\n";
    for (const auto& c : e.checks)
      std::cout << "    " << c.key << ": " << c.label << " (" << c.relation << " " << c.tolerance << ")\n";
  }
  return kPass;
}

int cmd_report(const std::string& dir) {
  const auto summary = dirac1d::load_report(dir);
  std::cout << summary.text;
  return summary.all_passed() ? kPass : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac field in a classical background: scenario runner"};
  app.require_subcommand(1);

  std::vector<std::string> run_configs;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run one or more scenario configs and write CSV/JSON plus a report");
  run->add_option("configs", run_configs, "Scenario config files")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output root (defaults to the first config's output.directory)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Validate a scenario config and list every violation");
  validate->add_option("config", validate_path, "Scenario config file")->required()->check(CLI::ExistingFile);

  auto* list = app.add_subcommand("list-experiments", "List registered experiments and their checks");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Re-render report.json from a previous run");
  report->add_option("dir", report_dir, "Directory holding report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*run) return cmd_run(run_configs, out_dir);
    if (*validate) return cmd_validate(validate_path);
    if (*list) return cmd_list();
    if (*report) return cmd_report(report_dir);
  } catch (const dirac1d::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const dirac1d::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
