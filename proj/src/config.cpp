#include "qre/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <variant>

#include "qre/errors.hpp"
#include "qre/units.hpp"

namespace qre {

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::tunneling: return "tunneling";
    case ScenarioKind::trapping: return "trapping";
    case ScenarioKind::effective_mass: return "effective_mass";
    case ScenarioKind::relativistic: return "relativistic";
    case ScenarioKind::custom: return "custom";
  }
  return "?";
}

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::none: return "none";
    case PotentialKind::gaussian_barrier: return "gaussian_barrier";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::ramp: return "ramp";
  }
  return "?";
}

std::string to_string(EnvironmentKind k) {
  switch (k) {
    case EnvironmentKind::none: return "none";
    case EnvironmentKind::jets: return "jets";
    case EnvironmentKind::trap: return "trap";
    case EnvironmentKind::effective_mass: return "effective_mass";
    case EnvironmentKind::relativistic: return "relativistic";
  }
  return "?";
}

double EnvironmentConfig::coupling() const {
  if (type == EnvironmentKind::jets || type == EnvironmentKind::trap)
    return p0 > 0.0 ? Cp0 / p0 : 0.0;
  return C;
}

namespace {

template <class E>
std::optional<E> enum_from(const std::string& s, std::initializer_list<E> all) {
  for (E e : all)
    if (to_string(e) == s) return e;
  return std::nullopt;
}

// Zero the parameters the chosen potential and environment do not use, so a
// config has exactly one representation.
void normalize(ScenarioConfig& c) {
  auto& u = c.potential;
  if (u.type != PotentialKind::gaussian_barrier) u.K0 = 0.0;
  if (u.type != PotentialKind::harmonic) u.omega = 0.0;
  if (u.type != PotentialKind::ramp) u.slope = 0.0;
  auto& e = c.environment;
  const bool jets = e.type == EnvironmentKind::jets || e.type == EnvironmentKind::trap;
  if (!jets) e.p0 = e.Cp0 = 0.0;
  if (jets || e.type == EnvironmentKind::none) e.C = 0.0;
  if (e.type != EnvironmentKind::trap) e.omega = 0.0;
  if (e.type != EnvironmentKind::effective_mass) e.effective_mass = 0.0;
  if (e.type != EnvironmentKind::relativistic) e.light_speed = 0.0;
}

double tunneling_duration(const ScenarioConfig& c) {
  const double xt = c.x_threshold.value_or(5.0);
  return (2.0 * xt - c.state.x0) * c.mass / c.state.p0_mean;
}

}  // namespace

ScenarioConfig default_config(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  switch (kind) {
    case ScenarioKind::tunneling: {
      const double k0 = 0.0068;
      c.figure = "2";
      c.grid = {256, -30.0, 30.0};
      c.mass = units::proton_mass;
      c.state = {-10.0, std::sqrt(2.0 * c.mass * k0), 1.0};
      c.potential.type = PotentialKind::gaussian_barrier;
      c.potential.K0 = k0;
      c.environment.type = EnvironmentKind::jets;
      c.environment.p0 = 4e-5;
      c.environment.Cp0 = 5e-4;
      c.x_threshold = 5.0;
      c.schedule = {2.5, 0.0, 10};
      c.schedule.t_final = tunneling_duration(c);
      c.comparators.free = true;
      c.comparators.environment_free = true;
      c.output.stem = "tunneling";
      SweepConfig s;
      s.levels = {5e-4, 1e-3, 1.5e-3};
      c.sweep = s;
      break;
    }
    case ScenarioKind::trapping: {
      const double omega = 0.01;
      c.figure = "3";
      c.grid = {256, -4.0, 4.0};
      c.mass = units::proton_mass;
      c.state = {0.0, 0.0, std::sqrt(units::hbar / (2.0 * c.mass * omega))};
      c.environment.type = EnvironmentKind::trap;
      c.environment.omega = omega;
      c.environment.p0 = 1e-4;
      c.environment.Cp0 = 0.1;
      c.schedule = {0.1, 400.0, 20};
      c.comparators.free = true;
      c.output.stem = "trapping";
      SweepConfig s;
      s.parameter = "Cp0";
      s.values = {0.05, 0.1, 0.2};
      c.sweep = s;
      break;
    }
    case ScenarioKind::effective_mass:
      c.figure = "4";
      c.grid = {512, -27.0, 24.0};
      c.mass = units::proton_mass;
      c.state = {0.0, 0.0, 0.25};
      c.potential.type = PotentialKind::ramp;
      c.potential.slope = 3.2e-3;
      c.environment.type = EnvironmentKind::effective_mass;
      c.environment.effective_mass = 10.0 * units::proton_mass;
      c.environment.C = 0.1;
      c.schedule = {1.6, 5400.0, 15};
      c.comparators.newton = true;
      c.output.stem = "effective_mass";
      break;
    case ScenarioKind::relativistic:
      c.figure = "5";
      c.grid = {256, -4.0, 4.0};
      c.mass = units::electron_mass;
      c.state = {0.0, 0.0, 0.4};
      c.potential.type = PotentialKind::ramp;
      c.potential.slope = -1000.0;
      c.environment.type = EnvironmentKind::relativistic;
      c.environment.light_speed = 10.0;
      c.environment.C = 20.0;
      c.schedule = {2e-5, 0.06, 20};
      c.comparators.relativistic = true;
      c.comparators.newton = true;
      c.output.stem = "relativistic";
      break;
    case ScenarioKind::custom:
      c.output.stem = "custom";
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Document layer

namespace {

using Value = std::variant<double, std::string, bool, std::vector<double>>;

struct Entry {
  Value value;
  int line = 0;
};

using Document = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<Value> parse_value(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    const std::string inner = s.substr(1, s.size() - 2);
    if (inner.find('"') != std::string::npos) return std::nullopt;
    return Value(inner);
  }
  if (s == "true") return Value(true);
  if (s == "false") return Value(false);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') {
    std::vector<double> out;
    const std::string inner = trim(s.substr(1, s.size() - 2));
    if (!inner.empty()) {
      std::stringstream ss(inner);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto v = parse_number(trim(item));
        if (!v) return std::nullopt;
        out.push_back(*v);
      }
    }
    return Value(out);
  }
  if (auto v = parse_number(s)) return Value(*v);
  return std::nullopt;
}

Document parse_document(const std::string& text, std::vector<std::string>& errors) {
  Document doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) {
        errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      section = trim(s.substr(1, s.size() - 2));
      doc[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(s.substr(0, eq));
    if (section.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": key '" + key +
                       "' outside of any section");
      continue;
    }
    auto value = parse_value(s.substr(eq + 1));
    if (!value) {
      errors.push_back("line " + std::to_string(lineno) + ": cannot parse value of '" +
                       section + "." + key + "'");
      continue;
    }
    auto& table = doc[section];
    if (table.count(key)) {
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + section +
                       "." + key + "'");
      continue;
    }
    table[key] = Entry{*value, lineno};
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Schema

struct Field {
  std::function<std::optional<std::string>(ScenarioConfig&, const Value&)> set;
};

template <class T>
std::optional<std::string> expect(const Value& v, T& out, const char* type) {
  if (auto p = std::get_if<T>(&v)) {
    out = *p;
    return std::nullopt;
  }
  return std::string("expected ") + type;
}

Field number(double ScenarioConfig::*member) {
  return {[member](ScenarioConfig& c, const Value& v) { return expect(v, c.*member, "a number"); }};
}

template <class Sub>
Field number(Sub ScenarioConfig::*sub, double Sub::*member) {
  return {[sub, member](ScenarioConfig& c, const Value& v) {
    return expect(v, c.*sub.*member, "a number");
  }};
}

template <class Sub>
Field flag(Sub ScenarioConfig::*sub, bool Sub::*member) {
  return {[sub, member](ScenarioConfig& c, const Value& v) {
    return expect(v, c.*sub.*member, "true or false");
  }};
}

template <class Sub>
Field text(Sub ScenarioConfig::*sub, std::string Sub::*member) {
  return {[sub, member](ScenarioConfig& c, const Value& v) {
    return expect(v, c.*sub.*member, "a string");
  }};
}

std::optional<std::string> to_integer(const Value& v, long& out, long min) {
  double d = 0.0;
  if (auto err = expect(v, d, "an integer")) return err;
  if (d != std::floor(d) || d < static_cast<double>(min) || d > 1e12)
    return "expected an integer >= " + std::to_string(min);
  out = static_cast<long>(d);
  return std::nullopt;
}

SweepConfig& sweep_of(ScenarioConfig& c) {
  if (!c.sweep) c.sweep = SweepConfig{};
  return *c.sweep;
}

const std::map<std::string, std::map<std::string, Field>>& schema() {
  static const std::map<std::string, std::map<std::string, Field>> s = {
      {"scenario",
       {{"kind", {[](ScenarioConfig&, const Value&) { return std::optional<std::string>(); }}},
        {"figure", {[](ScenarioConfig& c, const Value& v) {
           return expect(v, c.figure, "a string");
         }}}}},
      {"grid",
       {{"n_points", {[](ScenarioConfig& c, const Value& v) {
           long n = 0;
           auto err = to_integer(v, n, 1);
           if (!err) c.grid.n_points = static_cast<std::size_t>(n);
           return err;
         }}},
        {"x_min", number(&ScenarioConfig::grid, &GridConfig::x_min)},
        {"x_max", number(&ScenarioConfig::grid, &GridConfig::x_max)}}},
      {"state",
       {{"x0", number(&ScenarioConfig::state, &StateConfig::x0)},
        {"p0_mean", number(&ScenarioConfig::state, &StateConfig::p0_mean)},
        {"sigma_x", number(&ScenarioConfig::state, &StateConfig::sigma_x)}}},
      {"system", {{"mass", number(&ScenarioConfig::mass)}}},
      {"potential",
       {{"type", {[](ScenarioConfig& c, const Value& v) -> std::optional<std::string> {
           std::string s;
           if (auto err = expect(v, s, "a string")) return err;
           auto k = enum_from(s, {PotentialKind::none, PotentialKind::gaussian_barrier,
                                  PotentialKind::harmonic, PotentialKind::ramp});
           if (!k) return "unknown potential type '" + s + "'";
           c.potential.type = *k;
           return std::nullopt;
         }}},
        {"K0", number(&ScenarioConfig::potential, &PotentialConfig::K0)},
        {"omega", number(&ScenarioConfig::potential, &PotentialConfig::omega)},
        {"slope", number(&ScenarioConfig::potential, &PotentialConfig::slope)}}},
      {"environment",
       {{"type", {[](ScenarioConfig& c, const Value& v) -> std::optional<std::string> {
           std::string s;
           if (auto err = expect(v, s, "a string")) return err;
           auto k = enum_from(s, {EnvironmentKind::none, EnvironmentKind::jets,
                                  EnvironmentKind::trap, EnvironmentKind::effective_mass,
                                  EnvironmentKind::relativistic});
           if (!k) return "unknown environment type '" + s + "'";
           c.environment.type = *k;
           return std::nullopt;
         }}},
        {"p0", number(&ScenarioConfig::environment, &EnvironmentConfig::p0)},
        {"Cp0", number(&ScenarioConfig::environment, &EnvironmentConfig::Cp0)},
        {"C", number(&ScenarioConfig::environment, &EnvironmentConfig::C)},
        {"M", number(&ScenarioConfig::environment, &EnvironmentConfig::effective_mass)},
        {"c", number(&ScenarioConfig::environment, &EnvironmentConfig::light_speed)},
        {"omega", number(&ScenarioConfig::environment, &EnvironmentConfig::omega)}}},
      {"schedule",
       {{"dt", number(&ScenarioConfig::schedule, &ScheduleConfig::dt)},
        {"t_final", number(&ScenarioConfig::schedule, &ScheduleConfig::t_final)},
        {"record_every", {[](ScenarioConfig& c, const Value& v) {
           return to_integer(v, c.schedule.record_every, 1);
         }}}}},
      {"measure",
       {{"x_threshold", {[](ScenarioConfig& c, const Value& v) -> std::optional<std::string> {
           double x = 0.0;
           if (auto err = expect(v, x, "a number")) return err;
           c.x_threshold = x;
           return std::nullopt;
         }}}}},
      {"comparators",
       {{"free", flag(&ScenarioConfig::comparators, &ComparatorConfig::free)},
        {"newton", flag(&ScenarioConfig::comparators, &ComparatorConfig::newton)},
        {"relativistic", flag(&ScenarioConfig::comparators, &ComparatorConfig::relativistic)},
        {"environment_free",
         flag(&ScenarioConfig::comparators, &ComparatorConfig::environment_free)}}},
      {"output",
       {{"dir", text(&ScenarioConfig::output, &OutputConfig::dir)},
        {"stem", text(&ScenarioConfig::output, &OutputConfig::stem)}}},
      {"sweep",
       {{"parameter", {[](ScenarioConfig& c, const Value& v) -> std::optional<std::string> {
           std::string s;
           if (auto err = expect(v, s, "a string")) return err;
           if (s != "p0" && s != "Cp0" && s != "C") return "sweep parameter must be p0, Cp0 or C";
           sweep_of(c).parameter = s;
           return std::nullopt;
         }}},
        {"values", {[](ScenarioConfig& c, const Value& v) {
           return expect(v, sweep_of(c).values, "an array of numbers");
         }}},
        {"levels", {[](ScenarioConfig& c, const Value& v) {
           return expect(v, sweep_of(c).levels, "an array of numbers");
         }}},
        {"hold_Cp0", {[](ScenarioConfig& c, const Value& v) {
           return expect(v, sweep_of(c).hold_Cp0, "true or false");
         }}},
        {"points", {[](ScenarioConfig& c, const Value& v) {
           return to_integer(v, sweep_of(c).points, 2);
         }}},
        {"min_fraction", {[](ScenarioConfig& c, const Value& v) {
           return expect(v, sweep_of(c).min_fraction, "a number");
         }}}}},
  };
  return s;
}

bool has(const Document& d, const std::string& section, const std::string& key) {
  auto it = d.find(section);
  return it != d.end() && it->second.count(key) > 0;
}

}  // namespace

void check_config(const ScenarioConfig& c) {
  std::vector<std::string> errors;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  const auto n = c.grid.n_points;
  need(n >= 8 && (n & (n - 1)) == 0, "grid.n_points must be a power of two >= 8");
  need(c.grid.x_max > c.grid.x_min, "grid.x_max must exceed grid.x_min");
  need(c.state.sigma_x > 0.0, "state.sigma_x must be positive");
  need(c.mass > 0.0, "system.mass must be positive");
  need(c.schedule.dt > 0.0, "schedule.dt must be positive");
  need(c.schedule.t_final >= 0.0, "schedule.t_final must be nonnegative");
  need(c.schedule.record_every >= 1, "schedule.record_every must be >= 1");
  switch (c.potential.type) {
    case PotentialKind::gaussian_barrier:
      need(c.potential.K0 != 0.0, "potential.K0 is required for gaussian_barrier");
      break;
    case PotentialKind::harmonic:
      need(c.potential.omega > 0.0, "potential.omega must be positive for harmonic");
      break;
    case PotentialKind::ramp:
      need(c.potential.slope != 0.0, "potential.slope is required for ramp");
      break;
    case PotentialKind::none:
      break;
  }
  const auto& e = c.environment;
  switch (e.type) {
    case EnvironmentKind::jets:
    case EnvironmentKind::trap:
      need(e.p0 > 0.0, "environment.p0 must be positive");
      need(e.Cp0 > 0.0, "environment.Cp0 must be positive");
      if (e.type == EnvironmentKind::trap)
        need(e.omega > 0.0, "environment.omega must be positive for trap");
      if (e.type == EnvironmentKind::jets)
        need(c.potential.type != PotentialKind::none,
             "jets cancel the Hamiltonian potential; potential.type must not be none");
      break;
    case EnvironmentKind::effective_mass:
      need(e.C > 0.0, "environment.C must be positive");
      need(e.effective_mass > 0.0, "environment.M must be positive");
      break;
    case EnvironmentKind::relativistic:
      need(e.C > 0.0, "environment.C must be positive");
      need(e.light_speed > 0.0, "environment.c must be positive");
      break;
    case EnvironmentKind::none:
      break;
  }
  if (c.comparators.newton)
    need(c.potential.type == PotentialKind::ramp || c.potential.type == PotentialKind::none,
         "comparators.newton needs a ramp or no potential");
  if (c.comparators.relativistic)
    need(e.type == EnvironmentKind::relativistic,
         "comparators.relativistic needs the relativistic environment");
  if (c.x_threshold) need(std::isfinite(*c.x_threshold), "measure.x_threshold must be finite");
  need(!c.output.stem.empty(), "output.stem must not be empty");
  need(c.output.stem.find('/') == std::string::npos, "output.stem must not contain '/'");
  if (c.sweep) {
    const auto& s = *c.sweep;
    if (s.parameter == "p0") {
      need(e.type == EnvironmentKind::jets || e.type == EnvironmentKind::trap,
           "a p0 sweep needs a jets or trap environment");
      need(!s.values.empty() || !s.levels.empty(), "sweep needs values or levels");
      need(s.min_fraction > 0.0 && s.min_fraction < 1.0, "sweep.min_fraction must be in (0, 1)");
      need(s.hold_Cp0 || !s.values.empty(), "a p0 sweep at fixed C needs explicit sweep.values");
    } else {
      need(!s.values.empty(), "sweep.values must not be empty");
    }
    for (double v : s.values) need(v > 0.0, "sweep.values must be positive");
    for (double v : s.levels) need(v > 0.0, "sweep.levels must be positive");
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& err : errors) msg += "\n  " + err;
    throw ConfigError(msg);
  }
}

ScenarioConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  const Document doc = parse_document(text, errors);

  ScenarioKind kind = ScenarioKind::custom;
  if (!has(doc, "scenario", "kind")) {
    errors.push_back("missing required key 'scenario.kind'");
  } else {
    const auto& v = doc.at("scenario").at("kind").value;
    const auto* s = std::get_if<std::string>(&v);
    auto k = s ? enum_from(*s, {ScenarioKind::tunneling, ScenarioKind::trapping,
                                ScenarioKind::effective_mass, ScenarioKind::relativistic,
                                ScenarioKind::custom})
               : std::nullopt;
    if (!k)
      errors.push_back("scenario.kind must be one of tunneling, trapping, effective_mass, "
                       "relativistic, custom");
    else
      kind = *k;
  }

  ScenarioConfig c = default_config(kind);
  if (doc.count("sweep") && !c.sweep) c.sweep = SweepConfig{};
  const auto& sch = schema();
  for (const auto& [section, table] : doc) {
    auto sec = sch.find(section);
    if (sec == sch.end()) {
      errors.push_back("unknown section '[" + section + "]'");
      continue;
    }
    for (const auto& [key, entry] : table) {
      auto field = sec->second.find(key);
      if (field == sec->second.end()) {
        errors.push_back("line " + std::to_string(entry.line) + ": unknown key '" + section +
                         "." + key + "'");
        continue;
      }
      if (auto err = field->second.set(c, entry.value))
        errors.push_back("line " + std::to_string(entry.line) + ": " + section + "." + key +
                         ": " + *err);
    }
  }

  if (kind == ScenarioKind::custom) {
    const std::pair<const char*, const char*> required[] = {
        {"grid", "n_points"}, {"grid", "x_min"},     {"grid", "x_max"},
        {"state", "x0"},      {"state", "p0_mean"},  {"state", "sigma_x"},
        {"system", "mass"},   {"schedule", "dt"},    {"schedule", "t_final"}};
    for (const auto& [section, key] : required)
      if (!has(doc, section, key))
        errors.push_back(std::string("missing required key '") + section + "." + key + "'");
  }

  // Jets accept any two of p0, Cp0, C.
  auto& e = c.environment;
  if (e.type == EnvironmentKind::jets || e.type == EnvironmentKind::trap) {
    const bool p = has(doc, "environment", "p0"), q = has(doc, "environment", "Cp0"),
               k = has(doc, "environment", "C");
    if (k && p && q) {
      if (std::abs(e.C * e.p0 - e.Cp0) > 1e-12 * std::abs(e.Cp0))
        errors.push_back("environment: C, p0 and Cp0 are inconsistent (give two of them)");
    } else if (k && p) {
      e.Cp0 = e.C * e.p0;
    } else if (k && q) {
      e.p0 = e.C > 0.0 ? e.Cp0 / e.C : 0.0;
    } else if (k) {
      errors.push_back("environment: C needs p0 or Cp0 alongside");
    }
  }

  if (kind == ScenarioKind::tunneling && !has(doc, "schedule", "t_final") &&
      c.state.p0_mean > 0.0)
    c.schedule.t_final = tunneling_duration(c);

  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& err : errors) msg += "\n  " + err;
    throw ConfigError(msg);
  }
  normalize(c);
  check_config(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }
std::string fmt(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "[scenario]\nkind = " << quote(to_string(c.kind)) << "\nfigure = " << quote(c.figure)
    << "\n\n[grid]\nn_points = " << c.grid.n_points << "\nx_min = " << fmt(c.grid.x_min)
    << "\nx_max = " << fmt(c.grid.x_max) << "\n\n[state]\nx0 = " << fmt(c.state.x0)
    << "\np0_mean = " << fmt(c.state.p0_mean) << "\nsigma_x = " << fmt(c.state.sigma_x)
    << "\n\n[system]\nmass = " << fmt(c.mass) << "\n\n[potential]\ntype = "
    << quote(to_string(c.potential.type)) << "\n";
  switch (c.potential.type) {
    case PotentialKind::gaussian_barrier: o << "K0 = " << fmt(c.potential.K0) << "\n"; break;
    case PotentialKind::harmonic: o << "omega = " << fmt(c.potential.omega) << "\n"; break;
    case PotentialKind::ramp: o << "slope = " << fmt(c.potential.slope) << "\n"; break;
    case PotentialKind::none: break;
  }
  const auto& e = c.environment;
  o << "\n[environment]\ntype = " << quote(to_string(e.type)) << "\n";
  switch (e.type) {
    case EnvironmentKind::trap:
      o << "omega = " << fmt(e.omega) << "\n";
      [[fallthrough]];
    case EnvironmentKind::jets:
      o << "p0 = " << fmt(e.p0) << "\nCp0 = " << fmt(e.Cp0) << "\n";
      break;
    case EnvironmentKind::effective_mass:
      o << "C = " << fmt(e.C) << "\nM = " << fmt(e.effective_mass) << "\n";
      break;
    case EnvironmentKind::relativistic:
      o << "C = " << fmt(e.C) << "\nc = " << fmt(e.light_speed) << "\n";
      break;
    case EnvironmentKind::none:
      break;
  }
  o << "\n[schedule]\ndt = " << fmt(c.schedule.dt) << "\nt_final = " << fmt(c.schedule.t_final)
    << "\nrecord_every = " << c.schedule.record_every << "\n";
  if (c.x_threshold) o << "\n[measure]\nx_threshold = " << fmt(*c.x_threshold) << "\n";
  o << "\n[comparators]\nfree = " << fmt(c.comparators.free)
    << "\nnewton = " << fmt(c.comparators.newton)
    << "\nrelativistic = " << fmt(c.comparators.relativistic)
    << "\nenvironment_free = " << fmt(c.comparators.environment_free) << "\n";
  o << "\n[output]\ndir = " << quote(c.output.dir) << "\nstem = " << quote(c.output.stem)
    << "\n";
  if (c.sweep) {
    const auto& s = *c.sweep;
    o << "\n[sweep]\nparameter = " << quote(s.parameter) << "\nvalues = " << fmt(s.values)
      << "\nlevels = " << fmt(s.levels) << "\nhold_Cp0 = " << fmt(s.hold_Cp0)
      << "\npoints = " << s.points << "\nmin_fraction = " << fmt(s.min_fraction) << "\n";
  }
  return o.str();
}

}  // namespace qre
