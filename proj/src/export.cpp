#include "qre/export.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "qre/errors.hpp"

namespace qre {

namespace {

std::string cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string(); }

void config_block(std::ostringstream& o, const ScenarioConfig& config) {
  o << "# config:\n";
  std::istringstream in(serialize_config(config));
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) o << "#   " << line << "\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

// 1-based column index by name, for gnuplot.
std::map<std::string, int> column_index(const ScenarioResult& r) {
  std::map<std::string, int> idx;
  int k = 1;
  for (const auto& name : series_columns()) idx[name] = k++;
  for (const auto& c : r.comparators) idx[c.name] = k++;
  return idx;
}

}  // namespace

const std::vector<std::string>& series_columns() {
  static const std::vector<std::string> cols = {"t",      "mean_x", "mean_p",       "var_x",
                                                "var_p",  "energy", "purity",       "trace",
                                                "transmission", "mean_G", "mean_F"};
  return cols;
}

std::string series_csv(const ScenarioConfig& config, const ScenarioResult& r) {
  std::ostringstream o;
  o << "# qre time series\n";
  for (const auto& [k, v] : r.series.metadata) o << "# " << k << ": " << v << "\n";
  const auto& d = r.diagnostics;
  o << "# diagnostics: max_trace_drift=" << cell(d.max_trace_drift)
    << " max_hermiticity_defect=" << cell(d.max_hermiticity_defect)
    << " max_purity=" << cell(d.max_purity) << " max_edge_density=" << cell(d.max_edge_density)
    << " max_phase_increment=" << cell(r.max_phase_increment) << "\n";
  if (r.final_min_eigenvalue) o << "# final_min_eigenvalue: " << cell(*r.final_min_eigenvalue) << "\n";
  for (const auto& w : d.warnings) o << "# warning: " << w << "\n";
  config_block(o, config);

  const auto& cols = series_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) o << (i ? "," : "") << cols[i];
  for (const auto& c : r.comparators) o << "," << c.name;
  o << "\n";
  for (std::size_t k = 0; k < r.series.records.size(); ++k) {
    const auto& rec = r.series.records[k];
    o << cell(rec.t) << "," << cell(rec.mean_x) << "," << cell(rec.mean_p) << ","
      << cell(rec.var_x) << "," << cell(rec.var_p) << "," << cell(rec.energy) << ","
      << cell(rec.purity) << "," << cell(rec.trace) << "," << cell(rec.transmission) << ","
      << cell(rec.mean_G) << "," << cell(rec.mean_F);
    for (const auto& c : r.comparators) o << "," << (k < c.values.size() ? cell(c.values[k]) : "");
    o << "\n";
  }
  return o.str();
}

std::string series_gnuplot(const ScenarioConfig& config, const ScenarioResult& r,
                           const std::string& csv_name) {
  const auto idx = column_index(r);
  auto col = [&](const std::string& name) { return idx.count(name) ? idx.at(name) : 0; };
  std::ostringstream o;
  o << "# gnuplot script for " << csv_name << " (figure " << (config.figure.empty() ? "none" : config.figure)
    << ")\n"
    << "set datafile separator ','\nset datafile commentschars '#'\n"
    << "set datafile missing ''\nset key autotitle columnhead\nset xlabel 't (a.u.)'\n"
    << "set terminal pngcairo size 1200,500\nset output '"
    << csv_name.substr(0, csv_name.rfind('.')) << ".png'\n";
  auto panel = [&](const std::string& ylabel, std::vector<std::string> names) {
    o << "set ylabel '" << ylabel << "'\nplot ";
    bool first = true;
    for (const auto& n : names) {
      if (!col(n)) continue;
      o << (first ? "" : ", \\\n     ") << "'" << csv_name << "' using 1:" << col(n)
        << " with lines title '" << n << "'";
      first = false;
    }
    o << "\n";
  };
  o << "set multiplot layout 1,2\n";
  switch (config.kind) {
    case ScenarioKind::tunneling:
      panel("transmission", {"transmission", "cmp_free_transmission", "ref_transmission"});
      panel("purity", {"purity", "ref_purity"});
      break;
    case ScenarioKind::trapping:
      panel("var_x", {"var_x", "cmp_free_var_x", "ref_var_x"});
      panel("energy", {"energy"});
      break;
    case ScenarioKind::effective_mass:
      panel("<x>", {"mean_x", "cmp_newton_mean_x", "ref_mean_x"});
      panel("<p>", {"mean_p", "cmp_newton_mean_p", "ref_mean_p"});
      break;
    case ScenarioKind::relativistic:
      panel("d<x>/dt", {"mean_G", "cmp_rel_velocity"});
      panel("<p>", {"mean_p", "cmp_rel_mean_p", "ref_mean_p"});
      break;
    case ScenarioKind::custom:
      if (r.series.records.front().transmission)
        panel("transmission", {"transmission", "cmp_free_transmission", "ref_transmission"});
      else
        panel("<x>", {"mean_x", "ref_mean_x"});
      panel("purity", {"purity", "ref_purity"});
      break;
  }
  o << "unset multiplot\n";
  return o.str();
}

std::string sweep_csv(const ScenarioConfig& config, const SweepTable& t) {
  std::ostringstream o;
  o << "# qre sweep summary\n# figure: " << (config.figure.empty() ? "none" : config.figure)
    << "\n# scenario: " << to_string(config.kind) << "\n# swept: " << t.parameter << "\n";
  if (!t.levels.empty()) {
    o << "# curves: " << (config.sweep && config.sweep->hold_Cp0 ? "Cp0" : "C") << " =";
    for (double l : t.levels) o << " " << cell(l);
    o << "\n";
  }
  o << "# rows read at the final time of each run; margin = min p0^2/|beta| of the jets\n";
  const std::size_t nl = t.levels.empty() ? 1 : t.levels.size();
  for (std::size_t k = 0; k < t.points.size(); ++k)
    if (t.points[k].status != "ok")
      o << "# status row " << k / nl << " curve " << k % nl << ": " << t.points[k].status << "\n";
  config_block(o, config);

  o << t.parameter;
  static const char* fields[] = {"p0",    "Cp0",          "C",      "margin",    "transmission",
                                 "purity", "free_transmission", "var_x", "energy", "status"};
  for (std::size_t l = 0; l < nl; ++l)
    for (const char* f : fields) {
      o << "," << f;
      if (!t.levels.empty()) o << "_" << l + 1;
    }
  o << "\n";
  for (std::size_t row = 0; row < t.values.size(); ++row) {
    o << cell(t.values[row]);
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& p = t.points[row * nl + l];
      const auto& fr = p.final_record;
      o << "," << cell(p.p0) << "," << cell(p.Cp0) << "," << cell(p.C) << "," << cell(p.margin)
        << "," << (fr ? cell(fr->transmission) : "") << "," << (fr ? cell(fr->purity) : "")
        << "," << cell(p.free_transmission) << "," << (fr ? cell(fr->var_x) : "") << ","
        << (fr ? cell(fr->energy) : "") << "," << (p.status == "ok" ? "ok" : p.status.substr(0, p.status.find(':')));
    }
    o << "\n";
  }
  return o.str();
}

std::string sweep_gnuplot(const ScenarioConfig& config, const SweepTable& t,
                          const std::string& csv_name) {
  const std::size_t nl = t.levels.empty() ? 1 : t.levels.size();
  const int per = 10;
  std::ostringstream o;
  o << "# gnuplot script for " << csv_name << " (figure "
    << (config.figure.empty() ? "none" : config.figure) << ")\n"
    << "set datafile separator ','\nset datafile commentschars '#'\nset datafile missing ''\n"
    << "set xlabel '" << t.parameter << " (a.u.)'\n"
    << (t.parameter == "p0" ? "set logscale x\n" : "")
    << "set terminal pngcairo size 1200,500\nset output '"
    << csv_name.substr(0, csv_name.rfind('.')) << ".png'\nset multiplot layout 1,2\n";
  auto panel = [&](const std::string& label, int offset) {
    o << "set ylabel '" << label << "'\nplot ";
    for (std::size_t l = 0; l < nl; ++l) {
      const int c = 2 + int(l) * per + offset;
      o << (l ? ", \\\n     " : "") << "'" << csv_name << "' every ::1 using 1:" << c
        << " with linespoints title '"
        << (t.levels.empty() ? label : "curve " + std::to_string(l + 1) + " (" + cell(t.levels[l]) + ")")
        << "'";
    }
    o << "\n";
  };
  if (config.kind == ScenarioKind::trapping) {
    panel("var_x", 7);
    panel("energy", 8);
  } else {
    panel("transmission", 4);
    panel("purity", 5);
  }
  o << "unset multiplot\n";
  return o.str();
}

std::string emit_outputs(const ScenarioConfig& config, const ScenarioResult& result,
                         const std::string& dir) {
  const auto base = prepare_dir(dir);
  const std::string csv = config.output.stem + ".csv";
  write_file(base / csv, series_csv(config, result));
  write_file(base / (config.output.stem + ".gp"), series_gnuplot(config, result, csv));
  return (base / csv).string();
}

std::string emit_sweep(const ScenarioConfig& config, const SweepTable& table,
                       const std::string& dir) {
  const auto base = prepare_dir(dir);
  const std::string csv = config.output.stem + "_sweep.csv";
  write_file(base / csv, sweep_csv(config, table));
  write_file(base / (config.output.stem + "_sweep.gp"), sweep_gnuplot(config, table, csv));
  return (base / csv).string();
}

}  // namespace qre
