#include "dirac1d/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

namespace dirac1d {

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::string s = "invalid scenario configuration:";
  for (const auto& i : issues) s += "\n  " + i.path + ": " + i.message;
  return s;
}

class Issues {
 public:
  void add(std::string path, std::string message) { list_.push_back({std::move(path), std::move(message)}); }
  bool empty() const { return list_.empty(); }
  const std::vector<ValidationIssue>& list() const { return list_; }

 private:
  std::vector<ValidationIssue> list_;
};

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

bool same_kind(const Json& def, const Json& v) {
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_number()) return v.is_number();
  if (def.is_string()) return v.is_string();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_array()) return v.is_array();
  if (def.is_object()) return v.is_object();
  return true;
}

const char* kind_name(const Json& def) {
  if (def.is_number_integer()) return "an integer";
  if (def.is_number()) return "a number";
  if (def.is_string()) return "a string";
  if (def.is_boolean()) return "a boolean";
  if (def.is_array()) return "an array";
  return "an object";
}

// Overlays `given` on `defaults`, reporting unknown keys and type mismatches;
// the result follows the key order of `defaults`.
Json merge(const Json& defaults, const Json& given, const std::string& path, Issues& issues) {
  Json out = Json::object();
  if (!given.is_object()) {
    issues.add(path, "must be an object");
    return defaults;
  }
  for (auto it = given.begin(); it != given.end(); ++it)
    if (!defaults.contains(it.key())) issues.add(join(path, it.key()), "unknown key");
  for (auto it = defaults.begin(); it != defaults.end(); ++it) {
    const std::string p = join(path, it.key());
    if (!given.contains(it.key())) {
      out[it.key()] = it.value();
    } else if (!same_kind(it.value(), given[it.key()])) {
      issues.add(p, std::string("must be ") + kind_name(it.value()));
      out[it.key()] = it.value();
    } else if (it.value().is_object() && !it.value().empty()) {
      out[it.key()] = merge(it.value(), given[it.key()], p, issues);
    } else {
      out[it.key()] = given[it.key()];
    }
  }
  return out;
}

Json gauge_defaults(double horizon) {
  return Json{{"kind", "mode"}, {"amplitude", 0.1}, {"mode", 1}, {"phase", 0.0}, {"duration", horizon}};
}

Json potential_defaults(const std::string& preset, double L, double horizon) {
  if (preset == "zero") return Json::object();
  if (preset == "uniform-pulse") return Json{{"a0", 0.5}, {"a1", 0.0}, {"duration", horizon}};
  if (preset == "mode-wave")
    return Json{{"a0", 0.1}, {"a1", 0.0}, {"mode", 1}, {"phase", 0.0}, {"duration", horizon}};
  if (preset == "gaussian-pulse")
    return Json{{"amplitude", 0.3},      {"center_time", horizon / 2}, {"width_time", horizon / 6},
                {"center_z", L / 2},     {"width_z", L / 8},           {"bandwidth", 1}};
  if (preset == "traveling-wave") return Json{{"amplitude", 0.2}, {"mode", 1}, {"direction", 1}};
  if (preset == "pure-gauge") return Json{{"gauge", gauge_defaults(horizon)}};
  if (preset == "tabulated") return Json{{"a0", Json::array()}, {"a1", Json::array()}};
  return Json();
}

const std::vector<std::string> kPresets = {"zero",           "uniform-pulse", "mode-wave", "gaussian-pulse",
                                           "traveling-wave", "pure-gauge",    "tabulated"};
const std::vector<std::string> kStateKinds = {"vacuum", "regularized", "two_electron", "custom"};

void validate_gauge(const Json& g, int cutoff, const std::string& path, Issues& issues) {
  const std::string kind = g["kind"].get<std::string>();
  if (kind != "uniform" && kind != "mode") issues.add(join(path, "kind"), "must be \"uniform\" or \"mode\"");
  const int mode = g["mode"].get<int>();
  if (mode < 0 || mode > cutoff) issues.add(join(path, "mode"), "must lie in [0, cutoff]");
  if (!(g["duration"].get<double>() > 0.0)) issues.add(join(path, "duration"), "must be positive");
}

void validate_potential(const std::string& preset, const Json& p, int cutoff, double horizon, double dt,
                        Issues& issues) {
  const std::string base = "potential.params";
  auto positive = [&](const char* key) {
    if (!(p[key].get<double>() > 0.0)) issues.add(join(base, key), "must be positive");
  };
  auto mode_in = [&](const char* key, int lo) {
    const int m = p[key].get<int>();
    if (m < lo || m > cutoff) issues.add(join(base, key), "must lie in [" + std::to_string(lo) + ", cutoff]");
  };
  if (preset == "uniform-pulse") positive("duration");
  if (preset == "mode-wave") {
    positive("duration");
    mode_in("mode", 0);
  }
  if (preset == "gaussian-pulse") {
    positive("width_time");
    positive("width_z");
    mode_in("bandwidth", 0);
  }
  if (preset == "traveling-wave") {
    mode_in("mode", 1);
    const int d = p["direction"].get<int>();
    if (d != 1 && d != -1) issues.add(join(base, "direction"), "must be +1 or -1");
  }
  if (preset == "pure-gauge") validate_gauge(p["gauge"], cutoff, join(base, "gauge"), issues);
  if (preset == "tabulated") {
    const auto rows = static_cast<std::size_t>(std::llround(horizon / dt)) + 1;
    for (const char* key : {"a0", "a1"}) {
      const Json& t = p[key];
      bool ok = t.size() == rows;
      for (const auto& row : t) {
        ok = ok && row.is_array() && row.size() == static_cast<std::size_t>(2 * cutoff + 1);
        if (ok)
          for (const auto& x : row) ok = ok && x.is_number();
      }
      if (!ok)
        issues.add(join(base, key), "must be a " + std::to_string(rows) + " x " + std::to_string(2 * cutoff + 1) +
                                        " array of numbers (time rows, grid columns)");
    }
  }
}

ModeIndex parse_mode(const Json& j, const std::string& path, int cutoff, Issues& issues) {
  ModeIndex m;
  const Json defaults{{"r", 1}, {"spin", 1}, {"species", "electron"}};
  const Json v = merge(defaults, j, path, issues);
  m.r = v["r"].get<int>();
  const int s = v["spin"].get<int>();
  if (s != 1 && s != -1) issues.add(join(path, "spin"), "must be +1 or -1");
  m.s = s == -1 ? Spin::down : Spin::up;
  const std::string sp = v["species"].get<std::string>();
  if (sp != "electron" && sp != "positron") issues.add(join(path, "species"), "must be electron or positron");
  m.species = sp == "positron" ? Species::positron : Species::electron;
  const bool ok = m.s == Spin::up ? (m.r >= 1 && m.r <= cutoff) : (m.r <= -1 && m.r >= -cutoff);
  if (!ok) issues.add(join(path, "r"), "mode outside cutoff or with the wrong sign for its spin");
  return m;
}

Json mode_json(const ModeIndex& m) {
  return Json{{"r", m.r},
              {"spin", sign_of(m.s)},
              {"species", m.species == Species::electron ? "electron" : "positron"}};
}

void validate_experiment(const ScenarioConfig& c, Issues& issues) {
  const Json& p = c.experiment_params;
  const std::string base = "experiment.params";
  const int L = c.cutoff;
  auto r_cut_ok = [&](int R, const std::string& path) {
    if (R < 1 || R >= L) issues.add(path, "must satisfy 1 <= r_cut < cutoff (" + std::to_string(L) + ")");
  };
  if (c.experiment == "car-identities")
    for (const auto& x : p["cutoffs"])
      if (!x.is_number_integer() || x.get<int>() < 1 || x.get<int>() > 3)
        issues.add(join(base, "cutoffs"), "entries must be integers in [1, 3]");
  if (c.experiment == "vacuum-energy") {
    r_cut_ok(p["r_cut"].get<int>(), join(base, "r_cut"));
    if (p["random_states"].get<int>() < 1) issues.add(join(base, "random_states"), "must be positive");
  }
  if (c.experiment == "schwinger-regularized") {
    const int R = p["r_cut"].get<int>();
    r_cut_ok(R, join(base, "r_cut"));
    const Json& pair = p["pair"];
    const int lo = pair["m_lo"].get<int>(), hi = pair["m_hi"].get<int>();
    if (lo < 1 || hi < lo || hi > L) issues.add(join(base, "pair.m_lo"), "support must satisfy 1 <= m_lo <= m_hi <= cutoff");
    for (const char* key : {"f", "g"}) {
      const Json& a = pair[key];
      bool ok = a.size() == static_cast<std::size_t>(std::max(0, hi - lo + 1));
      for (const auto& z : a) ok = ok && z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number();
      if (!ok) issues.add(join(base, std::string("pair.") + key), "must list one [re, im] pair per mode in the window");
    }
    if (p["lambda_span"].get<int>() < 1) issues.add(join(base, "lambda_span"), "must be positive");
  }
  if (c.experiment == "schwinger-scaling") {
    const Json& cs = p["cutoffs"];
    bool ok = cs.size() >= 2;
    for (const auto& x : cs) ok = ok && x.is_number_integer() && x.get<int>() >= 1 && x.get<int>() <= 64;
    if (!ok) issues.add(join(base, "cutoffs"), "needs at least two integers in [1, 64]");
    if (p["r_cut"].get<int>() < 1) issues.add(join(base, "r_cut"), "must be at least 1");
  }
  if (c.experiment == "energy-unboundedness") {
    const int pp = p["p"].get<int>(), qq = p["q_m"].get<int>();
    if (pp < 1 || pp > L) issues.add(join(base, "p"), "must lie in [1, cutoff]");
    if (qq < 1 || qq > L) issues.add(join(base, "q_m"), "must lie in [1, cutoff]");
    if (pp == qq) issues.add(join(base, "q_m"), "must differ from p");
    if (!(p["t_f"].get<double>() > 0.0)) issues.add(join(base, "t_f"), "must be positive");
    if (p["f_values"].size() < 3) issues.add(join(base, "f_values"), "needs at least three values");
    for (const auto& f : p["f_values"])
      if (!f.is_number() || f.get<double>() < 0.0) issues.add(join(base, "f_values"), "entries must be numbers >= 0");
  }
  if (c.experiment == "gauge-check") validate_gauge(p["gauge"], L, join(base, "gauge"), issues);
  for (const char* key : {"steps", "record_every", "csv_stride", "samples"})
    if (p.contains(key) && p[key].get<int>() < (std::string(key) == "steps" ? 0 : 1))
      issues.add(join(base, key), "out of range");
  if (c.experiment == "two-electron-current" && c.state.kind != "two_electron")
    issues.add("state.kind", "experiment two-electron-current needs a two_electron state");
  if (c.experiment == "vacuum-stability" && c.state.kind != "regularized")
    issues.add("state.kind", "experiment vacuum-stability needs a regularized state");
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

ScenarioConfig parse_scenario(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::vector<ValidationIssue>{{"<document>", std::string("not valid JSON: ") + e.what()}});
  }
  if (!root.is_object()) throw ValidationError(std::vector<ValidationIssue>{{"<document>", "top level must be an object"}});

  Issues issues;
  const Json top_defaults{{"scenario", ""},
                          {"lattice", Json::object()},
                          {"potential", Json::object()},
                          {"state", Json::object()},
                          {"experiment", Json::object()},
                          {"horizon", 1.0},
                          {"time_step", 0.01},
                          {"output", Json::object()}};
  for (auto it = root.begin(); it != root.end(); ++it)
    if (!top_defaults.contains(it.key())) issues.add(it.key(), "unknown key");

  ScenarioConfig c;
  auto number = [&](const Json& obj, const char* key, double def, const std::string& path) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number()) {
      issues.add(path, "must be a number");
      return def;
    }
    return obj[key].get<double>();
  };
  auto object = [&](const char* key) {
    if (!root.contains(key)) return Json::object();
    if (!root[key].is_object()) {
      issues.add(key, "must be an object");
      return Json::object();
    }
    return root[key];
  };

  if (!root.contains("scenario") || !root["scenario"].is_string())
    issues.add("scenario", "required string");
  else
    c.scenario = root["scenario"].get<std::string>();
  if (!c.scenario.empty() && !std::regex_match(c.scenario, std::regex("[A-Za-z0-9_.-]+")))
    issues.add("scenario", "may contain only letters, digits, '.', '_' and '-'");
  if (root.contains("scenario") && c.scenario.empty()) issues.add("scenario", "must not be empty");

  const Json lattice =
      merge(Json{{"domain_length", 2.0 * std::numbers::pi}, {"cutoff", 3}, {"charge", 1.0}}, object("lattice"),
            "lattice", issues);
  c.domain_length = lattice["domain_length"].get<double>();
  c.cutoff = lattice["cutoff"].get<int>();
  c.charge = lattice["charge"].get<double>();
  if (!(c.domain_length > 0.0) || !std::isfinite(c.domain_length))
    issues.add("lattice.domain_length", "must be positive");
  if (c.cutoff < 1 || c.cutoff > 16) issues.add("lattice.cutoff", "must lie in [1, 16]");
  if (!std::isfinite(c.charge)) issues.add("lattice.charge", "must be finite");
  const int L = std::clamp(c.cutoff, 1, 16);

  c.horizon = number(root, "horizon", 1.0, "horizon");
  c.time_step = number(root, "time_step", 0.01, "time_step");
  bool times_ok = true;
  if (!(c.horizon > 0.0)) {
    issues.add("horizon", "must be positive");
    times_ok = false;
  }
  if (!(c.time_step > 0.0)) {
    issues.add("time_step", "must be positive");
    times_ok = false;
  }
  if (times_ok) {
    try {
      time_step_count(c.time_step, c.horizon);
    } catch (const ConfigError& e) {
      issues.add("time_step", e.what());
      times_ok = false;
    }
    if (c.domain_length > 0.0 && c.time_step > c.domain_length / (2 * L + 1) * (1.0 + 1e-12))
      issues.add("time_step", "must not exceed the grid spacing L/N");
    if (c.horizon / c.time_step > 1e6) issues.add("time_step", "more than 1e6 time samples");
  }

  const Json pot = object("potential");
  for (auto it = pot.begin(); it != pot.end(); ++it)
    if (it.key() != "preset" && it.key() != "params") issues.add(join("potential", it.key()), "unknown key");
  c.potential_preset = pot.contains("preset") && pot["preset"].is_string() ? pot["preset"].get<std::string>() : "zero";
  if (pot.contains("preset") && !pot["preset"].is_string()) issues.add("potential.preset", "must be a string");
  const Json pdef = potential_defaults(c.potential_preset, c.domain_length, c.horizon);
  if (pdef.is_null()) {
    std::string known;
    for (const auto& p : kPresets) known += (known.empty() ? "" : ", ") + p;
    issues.add("potential.preset", "unknown preset \"" + c.potential_preset + "\" (known: " + known + ")");
  } else {
    c.potential_params = merge(pdef, pot.contains("params") ? pot["params"] : Json::object(), "potential.params", issues);
    if (issues.empty() && times_ok)
      validate_potential(c.potential_preset, c.potential_params, L, c.horizon, c.time_step, issues);
  }

  const Json st = object("state");
  for (auto it = st.begin(); it != st.end(); ++it)
    if (it.key() != "kind" && it.key() != "r_cut" && it.key() != "p" && it.key() != "q_m" &&
        it.key() != "occupations")
      issues.add(join("state", it.key()), "unknown key");
  if (st.contains("kind") && st["kind"].is_string()) c.state.kind = st["kind"].get<std::string>();
  if (std::find(kStateKinds.begin(), kStateKinds.end(), c.state.kind) == kStateKinds.end())
    issues.add("state.kind", "must be one of vacuum, regularized, two_electron, custom");
  auto state_int = [&](const char* key, int def) {
    if (!st.contains(key)) return def;
    if (!st[key].is_number_integer()) {
      issues.add(join("state", key), "must be an integer");
      return def;
    }
    return st[key].get<int>();
  };
  c.state.r_cut = state_int("r_cut", 1);
  c.state.p = state_int("p", 2);
  c.state.q_m = state_int("q_m", 1);
  if (c.state.kind == "regularized" && (c.state.r_cut < 1 || c.state.r_cut >= c.cutoff))
    issues.add("state.r_cut", "must satisfy 1 <= r_cut < cutoff (" + std::to_string(c.cutoff) + ")");
  if (c.state.kind == "two_electron") {
    if (c.state.p < 1 || c.state.p > c.cutoff) issues.add("state.p", "must lie in [1, cutoff]");
    if (c.state.q_m < 1 || c.state.q_m > c.cutoff) issues.add("state.q_m", "must lie in [1, cutoff]");
    if (c.state.p == c.state.q_m) issues.add("state.q_m", "must differ from p");
  }
  if (st.contains("occupations")) {
    if (!st["occupations"].is_array()) {
      issues.add("state.occupations", "must be an array");
    } else {
      for (std::size_t i = 0; i < st["occupations"].size(); ++i)
        c.state.occupations.push_back(
            parse_mode(st["occupations"][i], "state.occupations[" + std::to_string(i) + "]", L, issues));
      for (std::size_t i = 0; i < c.state.occupations.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (c.state.occupations[i] == c.state.occupations[j])
            issues.add("state.occupations[" + std::to_string(i) + "]", "mode listed twice");
    }
  }

  const Json ex = object("experiment");
  for (auto it = ex.begin(); it != ex.end(); ++it)
    if (it.key() != "name" && it.key() != "params" && it.key() != "tolerances")
      issues.add(join("experiment", it.key()), "unknown key");
  if (!ex.contains("name") || !ex["name"].is_string()) {
    issues.add("experiment.name", "required string");
  } else {
    c.experiment = ex["name"].get<std::string>();
    const ExperimentInfo* info = find_experiment(c.experiment);
    if (!info) {
      issues.add("experiment.name", "unknown experiment \"" + c.experiment + "\"");
    } else {
      const std::size_t before = issues.list().size();
      c.experiment_params =
          merge(info->params, ex.contains("params") ? ex["params"] : Json::object(), "experiment.params", issues);
      if (ex.contains("tolerances")) {
        if (!ex["tolerances"].is_object()) {
          issues.add("experiment.tolerances", "must be an object");
        } else {
          for (auto it = ex["tolerances"].begin(); it != ex["tolerances"].end(); ++it) {
            const bool known = std::any_of(info->checks.begin(), info->checks.end(),
                                           [&](const CheckSpec& s) { return s.key == it.key(); });
            if (!known) issues.add(join("experiment.tolerances", it.key()), "unknown check");
            else if (!it.value().is_number() || !std::isfinite(it.value().get<double>()))
              issues.add(join("experiment.tolerances", it.key()), "must be a finite number");
          }
          c.tolerances = ex["tolerances"];
        }
      }
      if (issues.list().size() == before && c.cutoff >= 1 && c.cutoff <= 16) validate_experiment(c, issues);
    }
  }

  const Json out = merge(Json{{"directory", "out"}, {"formats", Json::array({"csv", "json"})}}, object("output"),
                         "output", issues);
  c.output_directory = out["directory"].get<std::string>();
  if (c.output_directory.empty()) issues.add("output.directory", "must not be empty");
  c.formats.clear();
  for (const auto& f : out["formats"]) {
    if (!f.is_string() || (f.get<std::string>() != "csv" && f.get<std::string>() != "json"))
      issues.add("output.formats", "entries must be \"csv\" or \"json\"");
    else
      c.formats.push_back(f.get<std::string>());
  }

  if (!issues.empty()) throw ValidationError(issues.list());
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({{"<file>", "cannot read " + path.string()}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize_scenario(const ScenarioConfig& c) {
  Json state{{"kind", c.state.kind}};
  if (c.state.kind == "regularized") state["r_cut"] = c.state.r_cut;
  if (c.state.kind == "two_electron") {
    state["p"] = c.state.p;
    state["q_m"] = c.state.q_m;
  }
  if (c.state.kind == "custom") {
    state["occupations"] = Json::array();
    for (const auto& m : c.state.occupations) state["occupations"].push_back(mode_json(m));
  }
  Json root{{"scenario", c.scenario},
            {"lattice", {{"domain_length", c.domain_length}, {"cutoff", c.cutoff}, {"charge", c.charge}}},
            {"potential", {{"preset", c.potential_preset}, {"params", c.potential_params}}},
            {"state", state},
            {"experiment", {{"name", c.experiment}, {"params", c.experiment_params}, {"tolerances", c.tolerances}}},
            {"horizon", c.horizon},
            {"time_step", c.time_step},
            {"output", {{"directory", c.output_directory}, {"formats", c.formats}}}};
  return root.dump(2) + "\n";
}

GaugeFunction build_gauge(const ScenarioConfig& c, const Json& g) {
  const LatticeConfig lat = c.lattice();
  const double amp = g["amplitude"].get<double>(), duration = g["duration"].get<double>();
  const ScalarField chi = g["kind"].get<std::string>() == "uniform"
                              ? presets::uniform_gauge(amp, duration)
                              : presets::mode_gauge(lat, amp, g["mode"].get<int>(), g["phase"].get<double>(), duration);
  return sample_gauge(lat, c.time_step, c.horizon, chi);
}

PotentialField build_potential(const ScenarioConfig& c) {
  const LatticeConfig lat = c.lattice();
  const Json& p = c.potential_params;
  const std::string& name = c.potential_preset;
  if (name == "tabulated") {
    auto table = [&](const Json& t) {
      SpaceTimeGrid m(t.size(), lat.grid_points());
      for (std::size_t i = 0; i < t.size(); ++i)
        for (int k = 0; k < lat.grid_points(); ++k) m(i, k) = t[i][k].get<double>();
      return m;
    };
    return tabulated_potential(lat, c.time_step, table(p["a0"]), table(p["a1"]));
  }
  PotentialFunctions f = presets::zero();
  if (name == "uniform-pulse")
    f = presets::uniform_pulse(p["a0"].get<double>(), p["a1"].get<double>(), p["duration"].get<double>());
  else if (name == "mode-wave")
    f = presets::mode_wave(lat, p["a0"].get<double>(), p["a1"].get<double>(), p["mode"].get<int>(),
                           p["phase"].get<double>(), p["duration"].get<double>());
  else if (name == "gaussian-pulse")
    f = presets::gaussian_pulse(lat, p["amplitude"].get<double>(), p["center_time"].get<double>(),
                                p["width_time"].get<double>(), p["center_z"].get<double>(), p["width_z"].get<double>(),
                                p["bandwidth"].get<int>());
  else if (name == "traveling-wave")
    f = presets::traveling_wave(lat, p["amplitude"].get<double>(), p["mode"].get<int>(), p["direction"].get<int>());
  PotentialField pot = sample_potential(lat, c.time_step, c.horizon, f.a0, f.a1);
  if (name == "pure-gauge") pot = gauge_transform(pot, build_gauge(c, p["gauge"]));
  return pot;
}

FockVector build_state(const FockBasis& basis, const StateSpec& s) {
  if (s.kind == "regularized") return vacuum_regularized(basis, {s.r_cut});
  if (s.kind == "two_electron") return two_electron_state(basis, s.p, s.q_m);
  if (s.kind == "custom") return occupation_state(basis, s.occupations);
  return vacuum_standard(basis);
}

CheckBook::CheckBook(const std::vector<CheckSpec>& specs, const Json& overrides)
    : specs_(specs), overrides_(overrides) {}

const CheckSpec& CheckBook::spec(const std::string& key) const {
  for (const auto& s : specs_)
    if (s.key == key) return s;
  throw std::logic_error("undeclared check " + key);
}

double CheckBook::tolerance(const std::string& key) const {
  const CheckSpec& s = spec(key);
  return overrides_.contains(key) ? overrides_[key].get<double>() : s.tolerance;
}

CheckResult CheckBook::check(const std::string& key, double measured, std::string note) const {
  const CheckSpec& s = spec(key);
  const double tol = tolerance(key);
  const bool ok = s.relation == ">=" ? measured >= tol : measured <= tol;
  return {s.key, s.tag, s.label, measured, tol, s.relation, ok && !std::isnan(measured), false, std::move(note)};
}

CheckResult CheckBook::skip(const std::string& key, std::string note) const {
  const CheckSpec& s = spec(key);
  return {s.key, s.tag, s.label, std::nan(""), tolerance(key), s.relation, true, true, std::move(note)};
}

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

RunReport run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_root) {
  const ExperimentInfo* info = find_experiment(cfg.experiment);
  if (!info) throw ValidationError({{"experiment.name", "unknown experiment \"" + cfg.experiment + "\""}});
  if (info->needs_fock && cfg.cutoff > kMaxFockCutoff)
    throw ResourceError("experiment " + cfg.experiment + " needs a Fock space; cutoff " + std::to_string(cfg.cutoff) +
                        " exceeds the ceiling " + std::to_string(kMaxFockCutoff));
  const CheckBook book(info->checks, cfg.tolerances);
  const auto start = std::chrono::steady_clock::now();
  ExperimentOutput out = info->run(cfg, book);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (const auto& spec : info->checks) {
    const auto n = std::count_if(out.checks.begin(), out.checks.end(),
                                 [&](const CheckResult& c) { return c.key == spec.key; });
    if (n != 1) throw std::logic_error("check " + spec.key + " reported " + std::to_string(n) + " times");
  }
  if (out.checks.size() != info->checks.size()) throw std::logic_error("experiment reported undeclared checks");

  const std::filesystem::path dir = out_root / cfg.scenario;
  std::filesystem::create_directories(dir);
  const auto wants = [&](const char* f) { return std::find(cfg.formats.begin(), cfg.formats.end(), f) != cfg.formats.end(); };
  if (wants("csv"))
    for (const auto& t : out.tables) write_csv(t, dir / (t.name + ".csv"));
  if (wants("json") && !out.summary.empty()) {
    std::ofstream js(dir / (cfg.experiment + ".json"), std::ios::binary);
    js << out.summary.dump(2) << "\n";
  }
  return {cfg.scenario, cfg.experiment, std::move(out.checks), wall};
}

namespace {

std::string render(const Json& reports, const std::string& generated, int& passed, int& total) {
  std::ostringstream os;
  os << "dirac1d report (generated " << generated << ")\n";
  passed = total = 0;
  for (const auto& r : reports) {
    os << "\n[" << r["scenario"].get<std::string>() << "] " << r["experiment"].get<std::string>() << "\n";
    for (const auto& c : r["checks"]) {
      const std::string status = c["status"].get<std::string>();
      os << "  " << c["tag"].get<std::string>() << " " << c["label"].get<std::string>() << ": " << status;
      if (status != "SKIP") {
        ++total;
        if (status == "PASS") ++passed;
        const auto num = [](const Json& v) { return v.is_number() ? format_double(v.get<double>()) : std::string("nan"); };
        os << " (measured " << num(c["measured"]) << " " << c["relation"].get<std::string>() << " "
           << num(c["tolerance"]) << ")";
      }
      if (!c["note"].get<std::string>().empty()) os << " - " << c["note"].get<std::string>();
      os << "\n";
    }
  }
  os << "\n" << passed << "/" << total << " checks passed\n";
  return os.str();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ReportSummary emit_report(const std::vector<RunReport>& reports, const std::filesystem::path& dir) {
  if (reports.empty()) throw ConfigError("emit_report needs at least one run report");
  ReportSummary s;
  Json runs = Json::array();
  Json wall = Json::object();
  for (const auto& r : reports) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
      checks.push_back({{"key", c.key},
                        {"tag", c.tag},
                        {"label", c.label},
                        {"status", c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL")},
                        {"measured", c.measured},
                        {"relation", c.relation},
                        {"tolerance", c.tolerance},
                        {"note", c.note}});
    runs.push_back({{"scenario", r.scenario}, {"experiment", r.experiment}, {"passed", r.passed()}, {"checks", checks}});
    wall[r.scenario + "/" + r.experiment] = r.wall_seconds;
  }
  const std::string generated = utc_now();
  s.text = render(runs, generated, s.passed, s.total);
  s.json = Json{{"header", {{"generated", generated}, {"wall_seconds", wall}}},
                {"reports", runs},
                {"summary", {{"passed", s.passed}, {"total", s.total}}}};
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "report.txt", std::ios::binary) << s.text;
  std::ofstream(dir / "report.json", std::ios::binary) << s.json.dump(2) << "\n";
  return s;
}

ReportSummary load_report(const std::filesystem::path& dir) {
  std::ifstream in(dir / "report.json");
  if (!in) throw ConfigError("no report.json in " + dir.string());
  ReportSummary s;
  try {
    in >> s.json;
    if (s.json["reports"].empty()) throw ConfigError("report.json lists no reports");
    s.text = render(s.json["reports"], s.json["header"]["generated"].get<std::string>(), s.passed, s.total);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report.json: ") + e.what());
  }
  return s;
}

}  // namespace dirac1d
