// Command-line front end: simulation, finite-shot sampling, fitting, model
// discrimination and identifiability reporting for dephasing two-level
// systems. Data goes to stdout or --out; diagnostics go to stderr.
//
// Exit codes: 0 success, 1 input/validation error, 2 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "blochid/batch.hpp"
#include "blochid/discriminate.hpp"
#include "blochid/experiment.hpp"
#include "blochid/serialize.hpp"
#include "blochid/traces.hpp"

namespace {

using namespace blochid;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class Format { Csv, Json };

Format resolve_format(const std::string& format_flag,
                      const std::string& out_path, Format fallback) {
  if (format_flag == "csv") return Format::Csv;
  if (format_flag == "json") return Format::Json;
  if (!format_flag.empty())
    throw ValidationError("unknown --format '" + format_flag +
                          "' (expected csv or json)");
  if (out_path.size() >= 5 &&
      out_path.compare(out_path.size() - 5, 5, ".json") == 0)
    return Format::Json;
  if (out_path.size() >= 4 &&
      out_path.compare(out_path.size() - 4, 4, ".csv") == 0)
    return Format::Csv;
  return fallback;
}

void emit(const std::string& data, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(out_path);
  if (!out)
    throw ValidationError("cannot open '" + out_path + "' for writing");
  out << data;
}

std::vector<ModelKind> parse_candidates(const std::string& list) {
  std::vector<ModelKind> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(parse_model_kind(tok));
  if (out.empty())
    throw ValidationError("--candidates: empty candidate list");
  return out;
}

constexpr double kDegToRad = 0.017453292519943295;

struct Cli {
  std::string model;
  double omega = 0.0;
  double gamma = 0.0;
  double theta_i = 0.0;
  double theta_m = 0.0;
  bool has_theta_i = false;
  bool has_theta_m = false;
  double t_max = -1.0;
  int points = 50;
  std::int64_t shots = 1000;
  std::uint64_t seed = 1;
  bool degrees = false;
  std::string in_path;
  std::string out_path;
  std::string format;
  std::string candidates;
  std::string config_path;

  double angle(double v) const { return degrees ? v * kDegToRad : v; }

  ModelParams params() const { return ModelParams(omega, gamma); }

  ExperimentGeometry geometry() const {
    return ExperimentGeometry(angle(theta_i), angle(theta_m));
  }

  std::vector<double> grid(const ModelParams& p) const {
    if (t_max < 0.0) return auto_time_grid(p, points);
    if (points < 2) throw ValidationError("--points must be >= 2");
    std::vector<double> t(points);
    for (int i = 0; i < points; ++i)
      t[i] = t_max * (double)i / (double)(points - 1);
    return t;
  }

  FitConfig fit_config() const {
    FitConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ValidationError("cannot open '" + config_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(config_path + ": " + e.what());
      }
      cfg = fit_config_from_json(j, cfg);
    }
    if (has_theta_i) cfg.fixed_theta_i = angle(theta_i);
    if (has_theta_m) cfg.fixed_theta_m = angle(theta_m);
    return cfg;
  }
};

int run_trace(const Cli& c) {
  const ModelKind kind = parse_model_kind(c.model);
  const ModelParams p = c.params();
  const ExperimentGeometry g = c.geometry();
  const std::vector<double> t = c.grid(p);
  std::vector<double> v(t.size());
  trace_grid(kind, p, g, t, v);

  const Format f = resolve_format(c.format, c.out_path, Format::Csv);
  std::ostringstream out;
  if (f == Format::Csv) {
    out << "time,p\n";
    for (std::size_t i = 0; i < t.size(); ++i)
      out << fmt(t[i]) << ',' << fmt(v[i]) << '\n';
  } else {
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < t.size(); ++i)
      points.push_back({{"t", t[i]}, {"p", v[i]}});
    out << nlohmann::json{{"points", points}}.dump(2) << '\n';
  }
  emit(out.str(), c.out_path);
  return 0;
}

int run_bloch(const Cli& c) {
  const ModelKind kind = parse_model_kind(c.model);
  const ModelParams p = c.params();
  const std::vector<double> t = c.grid(p);
  std::vector<BlochVector> v(t.size());
  bloch_grid(kind, p, c.angle(c.theta_i), t, v);

  const Format f = resolve_format(c.format, c.out_path, Format::Csv);
  std::ostringstream out;
  if (f == Format::Csv) {
    out << "time,vx,vy,vz\n";
    for (std::size_t i = 0; i < t.size(); ++i)
      out << fmt(t[i]) << ',' << fmt(v[i].vx) << ',' << fmt(v[i].vy) << ','
          << fmt(v[i].vz) << '\n';
  } else {
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < t.size(); ++i)
      points.push_back({{"t", t[i]},
                        {"vx", v[i].vx},
                        {"vy", v[i].vy},
                        {"vz", v[i].vz}});
    out << nlohmann::json{{"points", points}}.dump(2) << '\n';
  }
  emit(out.str(), c.out_path);
  return 0;
}

int run_sample(const Cli& c) {
  const ModelKind kind = parse_model_kind(c.model);
  const ModelParams p = c.params();
  const MeasurementTrace tr =
      sample_trace(kind, p, c.geometry(), c.grid(p), c.shots, c.seed);

  const Format f = resolve_format(c.format, c.out_path, Format::Csv);
  std::ostringstream out;
  if (f == Format::Csv)
    export_trace_csv(tr, out);
  else
    out << trace_to_json(tr).dump(2) << '\n';
  emit(out.str(), c.out_path);
  return 0;
}

int run_fit(const Cli& c) {
  const ModelKind kind = parse_model_kind(c.model);
  const MeasurementTrace tr = import_trace(c.in_path);
  const FitReport rep = fit_model(kind, tr, std::nullopt, c.fit_config());
  emit(report_to_json(rep).dump(2) + "\n", c.out_path);
  return 0;
}

int run_discriminate(const Cli& c) {
  const MeasurementTrace tr = import_trace(c.in_path);
  const FitConfig cfg = c.fit_config();
  std::vector<ModelKind> kinds;
  if (!c.candidates.empty()) {
    kinds = parse_candidates(c.candidates);
  } else if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    nlohmann::json j;
    in >> j;
    kinds = candidates_from_json(j);
  } else {
    throw ValidationError("discriminate: --candidates (or a config file with "
                          "a candidates array) is required");
  }
  const DiscriminationReport rep = discriminate(tr, kinds, std::nullopt, cfg);
  emit(report_to_json(rep).dump(2) + "\n", c.out_path);
  return 0;
}

int run_identifiability(const Cli& c) {
  const ModelKind kind = parse_model_kind(c.model);
  const IdentifiabilityReport rep =
      identifiability_report(kind, c.geometry());
  emit(report_to_json(rep).dump(2) + "\n", c.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "blochid: simulate, sample, fit and discriminate dephasing two-level "
      "system models.\nUnits: angles in radians (--degrees to convert), "
      "omega in rad/time, gamma in 1/time, times in the same time unit."};
  app.require_subcommand(1);

  Cli c;
  if (const char* env_seed = std::getenv("BLOCHID_SEED"))
    c.seed = std::strtoull(env_seed, nullptr, 10);

  auto add_model = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--model", c.model,
                                "model kind: m1z, m1x, m1y, m2 or m3");
    if (required) opt->required();
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--omega", c.omega, "angular frequency [rad/time]")
        ->required();
    sub->add_option("--gamma", c.gamma, "dephasing rate [1/time], >= 0")
        ->required();
  };
  auto add_geometry = [&](CLI::App* sub, bool need_i, bool need_m) {
    auto* oi = sub->add_option("--theta-i", c.theta_i,
                               "preparation angle [rad]");
    if (need_i) oi->required();
    auto* om = sub->add_option("--theta-m", c.theta_m,
                               "measurement angle [rad]");
    if (need_m) om->required();
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--t-max", c.t_max,
                    "largest delay [time]; omit for an automatic grid");
    sub->add_option("--points", c.points, "number of delays (default 50)");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", c.out_path, "output file (default stdout)");
    sub->add_option("--format", c.format,
                    "output format: csv or json (default by extension)");
    sub->add_flag("--degrees", c.degrees,
                  "interpret --theta-i/--theta-m in degrees");
  };

  CLI::App* trace_cmd = app.add_subcommand(
      "trace", "noiseless measurement trace p(t) on a delay grid");
  add_model(trace_cmd);
  add_params(trace_cmd);
  add_geometry(trace_cmd, true, true);
  add_grid(trace_cmd);
  add_output(trace_cmd);

  CLI::App* bloch_cmd = app.add_subcommand(
      "bloch", "Bloch trajectory (t, vx, vy, vz) on a delay grid");
  add_model(bloch_cmd);
  add_params(bloch_cmd);
  add_geometry(bloch_cmd, true, false);
  add_grid(bloch_cmd);
  add_output(bloch_cmd);

  CLI::App* sample_cmd = app.add_subcommand(
      "sample", "finite-shot synthetic measurement record");
  add_model(sample_cmd);
  add_params(sample_cmd);
  add_geometry(sample_cmd, true, true);
  add_grid(sample_cmd);
  sample_cmd->add_option("--shots", c.shots, "shots per delay (default 1000)");
  sample_cmd->add_option("--seed", c.seed,
                         "RNG seed (default $BLOCHID_SEED or 1)");
  add_output(sample_cmd);

  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "weighted least-squares fit of one model to a trace file");
  add_model(fit_cmd);
  fit_cmd->add_option("--in", c.in_path, "trace file (.csv or .json)")
      ->required();
  fit_cmd
      ->add_option("--theta-i", c.theta_i,
                   "pin the preparation angle [rad] instead of fitting it")
      ->each([&](const std::string&) { c.has_theta_i = true; });
  fit_cmd
      ->add_option("--theta-m", c.theta_m,
                   "pin the measurement angle [rad] instead of fitting it")
      ->each([&](const std::string&) { c.has_theta_m = true; });
  fit_cmd->add_option("--config", c.config_path, "JSON fit configuration");
  add_output(fit_cmd);

  CLI::App* disc_cmd = app.add_subcommand(
      "discriminate", "fit candidate models and select by BIC");
  disc_cmd->add_option("--in", c.in_path, "trace file (.csv or .json)")
      ->required();
  disc_cmd->add_option("--candidates", c.candidates,
                       "comma-separated model kinds, e.g. m1x,m2");
  disc_cmd
      ->add_option("--theta-i", c.theta_i,
                   "pin the preparation angle [rad] instead of fitting it")
      ->each([&](const std::string&) { c.has_theta_i = true; });
  disc_cmd
      ->add_option("--theta-m", c.theta_m,
                   "pin the measurement angle [rad] instead of fitting it")
      ->each([&](const std::string&) { c.has_theta_m = true; });
  disc_cmd->add_option("--config", c.config_path, "JSON fit configuration");
  add_output(disc_cmd);

  CLI::App* ident_cmd = app.add_subcommand(
      "identifiability",
      "closed-form identifiability of (omega, gamma) for a geometry");
  add_model(ident_cmd);
  add_geometry(ident_cmd, true, true);
  add_output(ident_cmd);

  try {
    app.parse(argc, argv);
    if (trace_cmd->parsed()) return run_trace(c);
    if (bloch_cmd->parsed()) return run_bloch(c);
    if (sample_cmd->parsed()) return run_sample(c);
    if (fit_cmd->parsed()) return run_fit(c);
    if (disc_cmd->parsed()) return run_discriminate(c);
    if (ident_cmd->parsed()) return run_identifiability(c);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or error message
    return code == 0 ? 0 : 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
