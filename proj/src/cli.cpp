#include "imspekit/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "imspekit/imspe.hpp"
#include "imspekit/optimizer.hpp"

namespace imspekit {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// RFC-4180-style quoting: quote when the field contains a comma, a quote,
// or a newline; embedded quotes are doubled.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

struct RunConfig {
  std::string command;
  Hyperparameters theta;
  Domain domain = DiskSpec{};
  LadderSpec ladder{16, 1024};
  int precision = -1;  // forced digits; -1 = automatic escalation
  std::string format = "json";
  std::string out_path;
  long seed = 0;
  double tol = 1e-5;

  std::optional<Design> points;
  std::optional<FamilyKind> family;
  std::map<std::string, double> family_params;
  std::map<std::string, std::pair<double, double>> bounds;
  std::map<std::string, double> start;

  std::string scan_param;
  std::vector<double> scan_grid;

  // test hook: a pre-computed (n_int, value) series for `converge`
  std::optional<ConvergenceSeries> series;
};

[[noreturn]] void bad_config(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

double need_number(const Json& j, const std::string& field) {
  if (!j.is_number()) bad_config(field, "expected a number");
  return j.get<double>();
}

void parse_domain(const Json& j, RunConfig& cfg) {
  if (!j.is_object() || !j.contains("kind")) {
    bad_config("domain", "expected an object with a 'kind' field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "disk") {
    DiskSpec spec;
    if (j.contains("n_int")) spec.n_int = (int)need_number(j["n_int"], "domain.n_int");
    if (j.contains("method")) spec.method = method_from_name(j["method"].get<std::string>());
    try {
      spec.validate();
    } catch (const Error& e) {
      bad_config("domain", e.what());
    }
    cfg.domain = spec;
  } else if (kind == "rectangle") {
    RectDomain r;
    if (j.contains("center2")) r.center2 = need_number(j["center2"], "domain.center2");
    if (j.contains("half_width")) r.half_width = need_number(j["half_width"], "domain.half_width");
    if (j.contains("half_height")) r.half_height = need_number(j["half_height"], "domain.half_height");
    try {
      r.validate();
    } catch (const Error& e) {
      bad_config("domain", e.what());
    }
    cfg.domain = r;
  } else {
    bad_config("domain.kind", "expected 'disk' or 'rectangle'");
  }
}

void parse_design(const Json& j, RunConfig& cfg) {
  if (!j.is_object()) bad_config("design", "expected an object");
  if (j.contains("points")) {
    Design d;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) {
        bad_config("design.points", "each point must be a [x1, x2] pair");
      }
      d.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    cfg.points = d;
  }
  if (j.contains("family")) {
    try {
      cfg.family = family_from_name(j.at("family").get<std::string>());
    } catch (const Error& e) {
      bad_config("design.family", e.what());
    }
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) {
        cfg.family_params[k] = need_number(v, "design.params." + k);
      }
    }
    if (j.contains("bounds")) {
      for (const auto& [k, v] : j.at("bounds").items()) {
        if (!v.is_array() || v.size() != 2) {
          bad_config("design.bounds." + k, "expected a [lo, hi] pair");
        }
        cfg.bounds[k] = {v[0].get<double>(), v[1].get<double>()};
      }
    }
    if (j.contains("start")) {
      for (const auto& [k, v] : j.at("start").items()) {
        cfg.start[k] = need_number(v, "design.start." + k);
      }
    }
  }
  if (!cfg.points && !cfg.family) {
    bad_config("design", "expected 'points' or 'family'");
  }
}

void parse_scan(const Json& j, RunConfig& cfg) {
  if (!j.is_object() || !j.contains("param")) {
    bad_config("scan", "expected an object with 'param' and 'grid'");
  }
  cfg.scan_param = j.at("param").get<std::string>();
  if (!j.contains("grid")) bad_config("scan.grid", "missing");
  const auto& g = j.at("grid");
  if (g.is_array()) {
    for (const auto& v : g) cfg.scan_grid.push_back(need_number(v, "scan.grid"));
  } else if (g.is_object()) {
    const double from = need_number(g.at("from"), "scan.grid.from");
    const double to = need_number(g.at("to"), "scan.grid.to");
    const int count = (int)need_number(g.at("count"), "scan.grid.count");
    if (count < 2 || !(to > from)) {
      bad_config("scan.grid", "need count >= 2 and to > from");
    }
    for (int i = 0; i < count; ++i) {
      cfg.scan_grid.push_back(from + (to - from) * i / (count - 1));
    }
  } else {
    bad_config("scan.grid", "expected an array or {from, to, count}");
  }
  if (j.contains("fixed")) {
    for (const auto& [k, v] : j.at("fixed").items()) {
      cfg.family_params[k] = need_number(v, "scan.fixed." + k);
    }
  }
}

RunConfig parse_config(const Json& j) {
  RunConfig cfg;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (j.contains("schema_version") &&
      (int)need_number(j["schema_version"], "schema_version") != kSchemaVersion) {
    bad_config("schema_version", "unsupported version");
  }
  if (j.contains("command")) cfg.command = j["command"].get<std::string>();
  if (j.contains("theta")) {
    const auto& t = j["theta"];
    if (t.contains("theta1")) cfg.theta.theta1 = need_number(t["theta1"], "theta.theta1");
    if (t.contains("theta2")) cfg.theta.theta2 = need_number(t["theta2"], "theta.theta2");
  }
  if (j.contains("domain")) parse_domain(j["domain"], cfg);
  if (j.contains("design")) parse_design(j["design"], cfg);
  if (j.contains("ladder")) {
    const auto& l = j["ladder"];
    if (l.contains("start")) cfg.ladder.start = (int)need_number(l["start"], "ladder.start");
    if (l.contains("stop")) cfg.ladder.stop = (int)need_number(l["stop"], "ladder.stop");
  }
  if (j.contains("precision")) cfg.precision = (int)need_number(j["precision"], "precision");
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
  if (j.contains("seed")) cfg.seed = (long)need_number(j["seed"], "seed");
  if (j.contains("tol")) cfg.tol = need_number(j["tol"], "tol");
  if (j.contains("scan")) parse_scan(j["scan"], cfg);
  if (j.contains("series")) {
    ConvergenceSeries s;
    for (const auto& row : j["series"]) {
      if (!row.is_array() || row.size() != 2) {
        bad_config("series", "expected [n_int, value] rows");
      }
      s.samples.emplace_back((int)row[0].get<double>(), row[1].get<double>());
    }
    cfg.series = s;
  }
  return cfg;
}

int normalize_precision(int digits) {
  if (digits < 0) return -1;
  if (digits == 16) return 0;  // plain double
  if (digits == 0 || digits == 50 || digits == 100 || digits == 160) return digits;
  throw ConfigError("precision must be one of 16, 50, 100, or 160 digits");
}

void validate(const RunConfig& cfg) {
  if (cfg.command != "eval" && cfg.command != "converge" &&
      cfg.command != "optimize" && cfg.command != "scan") {
    throw ConfigError("command must be one of eval, converge, optimize, scan");
  }
  if (cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError("format must be 'csv' or 'json'");
  }
  try {
    cfg.theta.validate();
  } catch (const Error& e) {
    bad_config("theta", e.what());
  }
  if (cfg.command == "eval" || cfg.command == "converge") {
    if (!cfg.points && !cfg.series) {
      throw ConfigError("command '" + cfg.command +
                        "' needs an explicit design (design.points)");
    }
    if (cfg.points && cfg.points->empty()) {
      bad_config("design.points", "design must contain at least one point");
    }
  } else {
    if (!cfg.family) {
      throw ConfigError("command '" + cfg.command +
                        "' needs a design family (design.family)");
    }
    if (cfg.points) {
      throw ConfigError("explicit design points are only valid with eval/converge");
    }
  }
  if (cfg.command == "optimize" && cfg.bounds.empty()) {
    throw ConfigError("optimize needs design.bounds");
  }
  if (cfg.command == "scan" && cfg.scan_grid.empty()) {
    throw ConfigError("scan needs a non-empty grid");
  }
}

Json imspe_value_json(const ImspeValue& v) {
  Json j;
  j["value"] = v.value;
  j["n_int"] = v.n_int_used;
  j["method"] = std::string(1, method_name(v.method_used));
  j["cond_estimate"] = v.cond_estimate;
  j["digits"] = v.digits_used;
  j["within_unit_interval"] = v.within_unit_interval;
  return j;
}

void emit(const RunConfig& cfg, const Json& report, const std::string& csv,
          std::ostream& out) {
  std::ostream* os = &out;
  std::ofstream file;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + cfg.out_path + "'");
    os = &file;
  }
  if (cfg.format == "json") {
    *os << report.dump(2) << "\n";
  } else {
    *os << csv;
  }
}

int run_eval(const RunConfig& cfg, std::ostream& out) {
  const ImspeValue v = imspe(*cfg.points, cfg.theta, cfg.domain, cfg.precision);
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "eval";
  report["seed"] = cfg.seed;
  report["result"] = imspe_value_json(v);

  std::string csv = "value,n_int,method,cond_estimate,digits\n";
  csv += fmt17(v.value) + "," + std::to_string(v.n_int_used) + "," +
         method_name(v.method_used) + "," + fmt17(v.cond_estimate) + "," +
         std::to_string(v.digits_used) + "\n";
  emit(cfg, report, csv, out);
  return 0;
}

int run_converge(const RunConfig& cfg, std::ostream& out) {
  ConvergenceSeries series;
  Method method = Method::C;
  double noise_floor = 0.0;
  if (cfg.series) {
    series = *cfg.series;
  } else {
    if (!std::holds_alternative<DiskSpec>(cfg.domain)) {
      throw ConfigError("converge studies the disk strip count; use a disk domain");
    }
    method = std::get<DiskSpec>(cfg.domain).method;
    series = imspe_series(*cfg.points, cfg.theta, method, cfg.ladder, cfg.precision);
    noise_floor = imspe_noise_floor(*cfg.points, cfg.theta, cfg.precision);
  }

  std::string status = "ok";
  ConvergenceEstimate est;
  try {
    est = extrapolate(series, noise_floor);
  } catch (const Error& e) {
    status = e.what();
  }

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "converge";
  report["seed"] = cfg.seed;
  report["method"] = std::string(1, method_name(method));
  report["status"] = status;
  Json rows = Json::array();
  for (const auto& [n, v] : series.samples) rows.push_back(Json{{"n_int", n}, {"value", v}});
  report["samples"] = rows;
  if (status == "ok") {
    report["limit"] = est.limit;
    report["order"] = est.order;
    report["residual"] = est.residual;
    report["below_noise_floor"] = est.below_noise_floor;
    report["local_slopes"] = est.local_slopes;
  }

  std::string csv = "n_int,value,limit,order,residual,status\n";
  for (const auto& [n, v] : series.samples) {
    csv += std::to_string(n) + "," + fmt17(v) + ",";
    if (status == "ok") {
      csv += fmt17(est.limit) + "," + fmt17(est.order) + "," + fmt17(est.residual);
    } else {
      csv += ",,";
    }
    csv += "," + csv_field(status) + "\n";
  }
  emit(cfg, report, csv, out);
  return status == "ok" ? 0 : 3;
}

int run_optimize(const RunConfig& cfg, std::ostream& out) {
  OptimizationOptions options;
  options.start = cfg.start;
  const OptimizationResult r = minimize_family(*cfg.family, cfg.bounds, cfg.theta,
                                               cfg.domain, cfg.tol, options);

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "optimize";
  report["seed"] = cfg.seed;
  report["family"] = family_name(r.kind);
  report["best_params"] = r.best_params;
  report["best_value"] = r.best_value;
  report["evaluations"] = r.evaluations;
  report["tolerance"] = r.tolerance_achieved;
  report["digits"] = r.digits_used;
  report["diagnostics"] = r.diagnostics;
  if (r.twin) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.twin->deltas.size(); ++i) {
      rows.push_back(Json{{"delta", r.twin->deltas[i]},
                          {"value", r.twin->values[i].value}});
    }
    report["twin"] = Json{{"rows", rows},
                          {"limit", r.twin->limit},
                          {"error_estimate", r.twin->error_estimate},
                          {"digits", r.twin->precision_digits_used}};
  }

  std::string csv = "family";
  for (const auto& [k, v] : r.best_params) csv += "," + csv_field(k);
  csv += ",imspe,evaluations,digits,diagnostics\n";
  csv += csv_field(family_name(r.kind));
  for (const auto& [k, v] : r.best_params) csv += "," + fmt17(v);
  std::string diag;
  for (const auto& d : r.diagnostics) diag += (diag.empty() ? "" : "; ") + d;
  csv += "," + fmt17(r.best_value) + "," + std::to_string(r.evaluations) + "," +
         std::to_string(r.digits_used) + "," + csv_field(diag) + "\n";
  if (r.twin) {
    csv += "\ndelta,imspe\n";
    for (std::size_t i = 0; i < r.twin->deltas.size(); ++i) {
      csv += fmt17(r.twin->deltas[i]) + "," + fmt17(r.twin->values[i].value) + "\n";
    }
    csv += "0," + fmt17(r.twin->limit) + "\n";
  }
  emit(cfg, report, csv, out);
  return 0;
}

int run_scan(const RunConfig& cfg, std::ostream& out) {
  ScanOptions options;
  options.ladder = cfg.ladder;
  const ScanResult r = scan_family(*cfg.family, cfg.family_params, cfg.scan_param,
                                   cfg.scan_grid, cfg.theta, cfg.domain, options);

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "scan";
  report["seed"] = cfg.seed;
  report["family"] = family_name(r.kind);
  report["fixed"] = r.fixed;
  report["scan_param"] = r.scan_param;
  report["n_int"] = r.n_int;
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.abscissa.size(); ++i) {
    Json row;
    row["x"] = r.abscissa[i];
    if (r.flags[i] == "ok") row["imspe"] = r.values[i];
    else row["imspe"] = nullptr;
    row["flag"] = r.flags[i];
    rows.push_back(row);
  }
  report["rows"] = rows;

  std::string csv = "family";
  for (const auto& [k, v] : r.fixed) csv += "," + csv_field(k);
  csv += ",x,imspe,n_int,flag\n";
  for (std::size_t i = 0; i < r.abscissa.size(); ++i) {
    csv += csv_field(family_name(r.kind));
    for (const auto& [k, v] : r.fixed) csv += "," + fmt17(v);
    csv += "," + fmt17(r.abscissa[i]) + ",";
    csv += (r.flags[i] == "ok") ? fmt17(r.values[i]) : "";
    csv += "," + std::to_string(r.n_int) + "," + csv_field(r.flags[i]) + "\n";
  }
  emit(cfg, report, csv, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"IMSPE evaluation and design optimization for Gaussian-process "
               "experiment designs on disks and rectangles"};
  std::string command, config_path, method_str, ladder_str, format, out_path;
  double theta1 = -1, theta2 = -1;
  int n_int = -1, precision = -1000;
  app.add_option("--command", command, "eval, converge, optimize, or scan");
  app.add_option("--config", config_path, "JSON config file, or '-' for stdin");
  app.add_option("--theta1", theta1, "x1 rate hyperparameter");
  app.add_option("--theta2", theta2, "x2 rate hyperparameter");
  app.add_option("--method", method_str, "disk quadrature method: A, B, or C");
  app.add_option("--n-int", n_int, "disk strip count (even, >= 2)");
  app.add_option("--ladder", ladder_str, "strip-count doubling ladder 'lo:hi'");
  app.add_option("--precision", precision,
                 "working precision in decimal digits (16, 50, 100, 160)");
  app.add_option("--out", out_path, "output file path (default: stdout)");
  app.add_option("--format", format, "csv or json");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Json doc = Json::object();
    if (!config_path.empty()) {
      std::string text;
      if (config_path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
      } else {
        std::ifstream f(config_path);
        if (!f) throw ConfigError("cannot read config file '" + config_path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
      }
      try {
        doc = Json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    RunConfig cfg = parse_config(doc);

    // precedence: flag > config > environment > automatic
    if (cfg.precision == -1) {
      if (const char* env = std::getenv("IMSPEKIT_PRECISION")) {
        try {
          cfg.precision = std::stoi(env);
        } catch (const std::exception&) {
          throw ConfigError("IMSPEKIT_PRECISION is not an integer");
        }
      }
    }
    if (precision != -1000) cfg.precision = precision;
    cfg.precision = normalize_precision(cfg.precision);

    if (!command.empty()) cfg.command = command;
    if (theta1 >= 0) cfg.theta.theta1 = theta1;
    if (theta2 >= 0) cfg.theta.theta2 = theta2;
    if (!format.empty()) cfg.format = format;
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!method_str.empty() || n_int > 0) {
      if (!std::holds_alternative<DiskSpec>(cfg.domain)) {
        throw ConfigError("--method/--n-int apply only to disk domains");
      }
      auto& spec = std::get<DiskSpec>(cfg.domain);
      if (!method_str.empty()) spec.method = method_from_name(method_str);
      if (n_int > 0) {
        spec.n_int = n_int;
        try {
          spec.validate();
        } catch (const Error& e) {
          throw ConfigError(e.what());
        }
      }
    }
    if (!ladder_str.empty()) {
      const auto colon = ladder_str.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("--ladder expects 'lo:hi'");
      }
      try {
        cfg.ladder.start = std::stoi(ladder_str.substr(0, colon));
        cfg.ladder.stop = std::stoi(ladder_str.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("--ladder expects integer bounds 'lo:hi'");
      }
    }
    try {
      cfg.ladder.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }

    validate(cfg);

    if (cfg.command == "eval") return run_eval(cfg, out);
    if (cfg.command == "converge") return run_converge(cfg, out);
    if (cfg.command == "optimize") return run_optimize(cfg, out);
    return run_scan(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace imspekit
