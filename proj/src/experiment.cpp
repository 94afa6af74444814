#include "blochid/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "blochid/rng.hpp"
#include "blochid/serialize.hpp"
#include "blochid/traces.hpp"

namespace blochid {

void MeasurementTrace::validate() const {
  if (times.size() != estimates.size() || times.size() != shots.size())
    throw ValidationError("trace: times/estimates/shots length mismatch");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0))
      throw ValidationError("trace: negative or non-finite time at row " +
                            std::to_string(i + 1));
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ValidationError("trace: times not strictly increasing at row " +
                            std::to_string(i + 1));
    if (!(estimates[i] >= -1.0 && estimates[i] <= 1.0))
      throw ValidationError("trace: estimate outside [-1,1] at row " +
                            std::to_string(i + 1));
    if (shots[i] < 1)
      throw ValidationError("trace: non-positive shot count at row " +
                            std::to_string(i + 1));
  }
}

std::vector<double> auto_time_grid(const ModelParams& params, int points) {
  if (points < 2) throw std::invalid_argument("auto_time_grid: points < 2");
  double horizon = 0.0;
  if (params.gamma > 0.0) horizon = std::max(horizon, 1.0 / params.gamma);
  const double rate = std::max(std::abs(params.omega), params.gamma);
  if (rate > 0.0) horizon = std::max(horizon, kTwoPi / rate);
  if (horizon == 0.0) horizon = 1.0;  // static model, any window works
  horizon *= 3.0;
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i)
    t[i] = horizon * (double)i / (double)(points - 1);
  return t;
}

namespace {

TraceMeta make_meta(ModelKind kind, const ModelParams& p,
                    const ExperimentGeometry& g,
                    std::optional<std::uint64_t> seed) {
  TraceMeta m;
  m.kind = kind;
  m.omega = p.omega;
  m.gamma = p.gamma;
  m.theta_i = g.theta_i;
  m.theta_m = g.theta_m;
  m.seed = seed;
  m.rng = kRngName;
  return m;
}

}  // namespace

MeasurementTrace exact_trace(ModelKind kind, const ModelParams& params,
                             const ExperimentGeometry& geom,
                             const std::vector<double>& times,
                             std::int64_t shots) {
  MeasurementTrace tr;
  tr.times = times;
  tr.estimates.resize(times.size());
  tr.shots.assign(times.size(), shots);
  for (std::size_t i = 0; i < times.size(); ++i)
    tr.estimates[i] = trace(kind, params, geom, times[i]);
  tr.meta = make_meta(kind, params, geom, std::nullopt);
  tr.validate();
  return tr;
}

MeasurementTrace sample_trace(ModelKind kind, const ModelParams& params,
                              const ExperimentGeometry& geom,
                              const std::vector<double>& times,
                              std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_trace: shots < 1");
  MeasurementTrace tr;
  tr.times = times;
  tr.estimates.resize(times.size());
  tr.shots.assign(times.size(), shots);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double p = trace(kind, params, geom, times[i]);
    if (std::abs(p) > 1.0 + 1e-9)
      throw NumericalError("sample_trace: model value outside [-1,1]");
    const double p_success = std::min(1.0, std::max(0.0, 0.5 * (1.0 + p)));
    SplitMix64 rng = substream(seed, i);
    std::int64_t k = 0;
    for (std::int64_t s = 0; s < shots; ++s)
      if (rng.next_unit() < p_success) ++k;
    tr.estimates[i] = 2.0 * (double)k / (double)shots - 1.0;
  }
  tr.meta = make_meta(kind, params, geom, seed);
  tr.validate();
  return tr;
}

void export_trace_csv(const MeasurementTrace& trace, std::ostream& out) {
  out << "time,p_estimate,shots\n";
  char buf[80];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%lld\n", trace.times[i],
                  trace.estimates[i], (long long)trace.shots[i]);
    out << buf;
  }
}

namespace {

double parse_field(const std::string& tok, const std::string& name,
                   std::size_t line, const char* field) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || tok.empty())
    throw ValidationError(name + ":" + std::to_string(line) + ": field '" +
                          field + "': '" + tok + "' is not a number");
  return v;
}

}  // namespace

MeasurementTrace import_trace_csv(std::istream& in, const std::string& name) {
  MeasurementTrace tr;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line))
    throw ValidationError(name + ": empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time,p_estimate,shots")
    throw ValidationError(name + ":1: expected header 'time,p_estimate,shots'");
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t_tok, p_tok, s_tok;
    if (!std::getline(row, t_tok, ',') || !std::getline(row, p_tok, ',') ||
        !std::getline(row, s_tok))
      throw ValidationError(name + ":" + std::to_string(lineno) +
                            ": expected 3 comma-separated fields");
    tr.times.push_back(parse_field(t_tok, name, lineno, "time"));
    tr.estimates.push_back(parse_field(p_tok, name, lineno, "p_estimate"));
    const double s = parse_field(s_tok, name, lineno, "shots");
    if (s < 1.0 || s != std::floor(s))
      throw ValidationError(name + ":" + std::to_string(lineno) +
                            ": field 'shots': must be a positive integer");
    tr.shots.push_back((std::int64_t)s);
  }
  tr.validate();
  return tr;
}

void export_trace(const MeasurementTrace& trace,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw ValidationError("cannot open '" + path.string() + "' for writing");
  if (path.extension() == ".json")
    out << trace_to_json(trace).dump(2) << "\n";
  else
    export_trace_csv(trace, out);
}

MeasurementTrace import_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
    MeasurementTrace tr = trace_from_json(j);
    tr.validate();
    return tr;
  }
  return import_trace_csv(in, path.filename().string());
}

}  // namespace blochid
