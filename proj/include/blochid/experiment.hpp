#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blochid/types.hpp"

// Synthetic measurement records: repeated initialization, evolution for a
// delay t, binary projective measurement, finite-shot averaging.

namespace blochid {

/// Provenance of a synthetic trace; absent for imported experimental data.
struct TraceMeta {
  std::optional<ModelKind> kind;
  std::optional<double> omega;
  std::optional<double> gamma;
  std::optional<double> theta_i;
  std::optional<double> theta_m;
  std::optional<std::uint64_t> seed;
  std::string rng;
};

/// Sampled delays, shot-averaged outcomes p_hat in [-1,1], shots per point.
struct MeasurementTrace {
  std::vector<double> times;
  std::vector<double> estimates;
  std::vector<std::int64_t> shots;
  std::optional<TraceMeta> meta;

  std::size_t size() const { return times.size(); }

  /// Throws ValidationError unless times are strictly increasing and >= 0,
  /// every estimate lies in [-1, 1], and every shot count is positive.
  void validate() const;
};

/// Default delay grid: `points` uniform samples on [0, 3 * max(1/gamma,
/// 2pi/max(omega, gamma))], covering both the decay and oscillation scales.
std::vector<double> auto_time_grid(const ModelParams& params, int points = 50);

/// Noiseless trace: estimates are the exact model values.
MeasurementTrace exact_trace(ModelKind kind, const ModelParams& params,
                             const ExperimentGeometry& geom,
                             const std::vector<double>& times,
                             std::int64_t shots = 1);

/// Finite-shot trace: at each delay, shots Bernoulli outcomes with success
/// probability (1 + p(t))/2 are drawn from a per-point substream of `seed`
/// and averaged back to p_hat = 2k/shots - 1. Deterministic per seed.
MeasurementTrace sample_trace(ModelKind kind, const ModelParams& params,
                              const ExperimentGeometry& geom,
                              const std::vector<double>& times,
                              std::int64_t shots, std::uint64_t seed);

// CSV: header `time,p_estimate,shots`, one row per delay. Metadata is not
// representable in CSV; JSON (see serialize.hpp) round-trips it.
void export_trace_csv(const MeasurementTrace& trace, std::ostream& out);
MeasurementTrace import_trace_csv(std::istream& in,
                                  const std::string& name = "<stream>");

/// Format chosen by extension: .csv or .json.
void export_trace(const MeasurementTrace& trace,
                  const std::filesystem::path& path);
MeasurementTrace import_trace(const std::filesystem::path& path);

}  // namespace blochid
