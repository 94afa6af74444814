#pragma once

#include <cassert>
#include <cmath>

#include "blochid/kernels.hpp"
#include "blochid/types.hpp"

// Closed-form measurement traces p(t) = Tr[M rho(t)] and Bloch trajectories
// for the five model variants, for the pure initial state
//   v(0) = (sin theta_i, 0, cos theta_i)
// and the two-outcome measurement with axis (sin theta_m, 0, cos theta_m).

namespace blochid {

/// H and V both along z: damped precession about z, v_z conserved.
inline double trace_m1z(const ModelParams& p, const ExperimentGeometry& g,
                        double t) noexcept {
  assert(t >= 0.0);
  return std::exp(-p.gamma * t) * std::cos(p.omega * t) * std::sin(g.theta_i) *
             std::sin(g.theta_m) +
         std::cos(g.theta_i) * std::cos(g.theta_m);
}

/// H and V both along x: the z-basis formula with both angles replaced by
/// their complements.
inline double trace_m1x(const ModelParams& p, const ExperimentGeometry& g,
                        double t) noexcept {
  assert(t >= 0.0);
  return std::exp(-p.gamma * t) * std::cos(p.omega * t) * std::cos(g.theta_i) *
             std::cos(g.theta_m) +
         std::sin(g.theta_i) * std::sin(g.theta_m);
}

/// H and V both along y: preparation and measurement always lie in the plane
/// transverse to the damping axis, so visibility is maximal.
inline double trace_m1y(const ModelParams& p, const ExperimentGeometry& g,
                        double t) noexcept {
  assert(t >= 0.0);
  return std::exp(-p.gamma * t) *
         std::cos(p.omega * t + g.theta_i - g.theta_m);
}

/// H along x, V along z.
inline double trace_m2(const ModelParams& p, const ExperimentGeometry& g,
                       double t) noexcept {
  assert(t >= 0.0);
  return std::exp(-p.gamma * t) * std::sin(g.theta_i) * std::sin(g.theta_m) +
         phi_x3(p, t) * std::cos(g.theta_i) * std::cos(g.theta_m);
}

/// H along y, V along z. Coefficients multiplied through by the effective
/// frequency so the expression stays finite at criticality.
inline double trace_m3(const ModelParams& p, const ExperimentGeometry& g,
                       double t) noexcept {
  assert(t >= 0.0);
  const DampedBasisPair k = damped_kernels(p, t);
  const double a1 = std::cos(g.theta_i - g.theta_m);
  const double a2 = 0.5 * p.gamma * std::cos(g.theta_i + g.theta_m) +
                    p.omega * std::sin(g.theta_i - g.theta_m);
  return a1 * k.c + a2 * k.s;
}

/// Dispatch over the five variants.
inline double trace(ModelKind kind, const ModelParams& p,
                    const ExperimentGeometry& g, double t) noexcept {
  switch (kind) {
    case ModelKind::M1z: return trace_m1z(p, g, t);
    case ModelKind::M1x: return trace_m1x(p, g, t);
    case ModelKind::M1y: return trace_m1y(p, g, t);
    case ModelKind::M2:  return trace_m2(p, g, t);
    case ModelKind::M3:  return trace_m3(p, g, t);
  }
  return 0.0;
}

/// Exact state at time t in the original z-basis Bloch frame, for the pure
/// initial state set by theta_i. For M1x/M1y this is the inverse basis
/// rotation applied to the z-basis solution.
inline BlochVector bloch_trajectory(ModelKind kind, const ModelParams& p,
                                    double theta_i, double t) noexcept {
  assert(t >= 0.0);
  const double si = std::sin(theta_i);
  const double ci = std::cos(theta_i);
  switch (kind) {
    case ModelKind::M1z: {
      const double e = std::exp(-p.gamma * t);
      return {e * std::cos(p.omega * t) * si, e * std::sin(p.omega * t) * si,
              ci};
    }
    case ModelKind::M1x: {
      const double e = std::exp(-p.gamma * t);
      return {si, -e * std::sin(p.omega * t) * ci,
              e * std::cos(p.omega * t) * ci};
    }
    case ModelKind::M1y: {
      const double e = std::exp(-p.gamma * t);
      return {e * std::sin(p.omega * t + theta_i), 0.0,
              e * std::cos(p.omega * t + theta_i)};
    }
    case ModelKind::M2: {
      const DampedBasisPair k = damped_kernels(p, t);
      return {std::exp(-p.gamma * t) * si, -p.omega * k.s * ci,
              (k.c + 0.5 * p.gamma * k.s) * ci};
    }
    case ModelKind::M3: {
      const DampedBasisPair k = damped_kernels(p, t);
      return {(k.c - 0.5 * p.gamma * k.s) * si - p.omega * k.s * ci, 0.0,
              (k.c + 0.5 * p.gamma * k.s) * ci + p.omega * k.s * si};
    }
  }
  return {};
}

}  // namespace blochid
