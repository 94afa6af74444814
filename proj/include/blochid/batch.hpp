#pragma once

#include <span>

#include "blochid/types.hpp"

// Grid evaluation kernels. Each has an OpenMP-parallel version and a serial
// reference; both perform identical per-element arithmetic, so their outputs
// are bitwise equal and the serial one doubles as the correctness oracle for
// the parallel one.

namespace blochid {

/// out[i] = trace(kind, params, geom, times[i]). Parallel over points.
void trace_grid(ModelKind kind, const ModelParams& params,
                const ExperimentGeometry& geom, std::span<const double> times,
                std::span<double> out);
void trace_grid_serial(ModelKind kind, const ModelParams& params,
                       const ExperimentGeometry& geom,
                       std::span<const double> times, std::span<double> out);

/// out[i] = bloch_trajectory(kind, params, theta_i, times[i]).
void bloch_grid(ModelKind kind, const ModelParams& params, double theta_i,
                std::span<const double> times, std::span<BlochVector> out);
void bloch_grid_serial(ModelKind kind, const ModelParams& params,
                       double theta_i, std::span<const double> times,
                       std::span<BlochVector> out);

}  // namespace blochid
