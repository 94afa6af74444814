#include "blochid/batch.hpp"

#include <cassert>
#include <cstdint>

#include "blochid/traces.hpp"

namespace blochid {

void trace_grid(ModelKind kind, const ModelParams& params,
                const ExperimentGeometry& geom, std::span<const double> times,
                std::span<double> out) {
  assert(times.size() == out.size());
  const std::int64_t n = (std::int64_t)times.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = trace(kind, params, geom, times[i]);
}

void trace_grid_serial(ModelKind kind, const ModelParams& params,
                       const ExperimentGeometry& geom,
                       std::span<const double> times, std::span<double> out) {
  assert(times.size() == out.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out[i] = trace(kind, params, geom, times[i]);
}

void bloch_grid(ModelKind kind, const ModelParams& params, double theta_i,
                std::span<const double> times, std::span<BlochVector> out) {
  assert(times.size() == out.size());
  const std::int64_t n = (std::int64_t)times.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = bloch_trajectory(kind, params, theta_i, times[i]);
}

void bloch_grid_serial(ModelKind kind, const ModelParams& params,
                       double theta_i, std::span<const double> times,
                       std::span<BlochVector> out) {
  assert(times.size() == out.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out[i] = bloch_trajectory(kind, params, theta_i, times[i]);
}

}  // namespace blochid
