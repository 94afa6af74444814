#pragma once

// Matrix-exponential oracle for all five model kinds. M1x/M1y are handled by
// an orthogonal change of Bloch frame that turns them into the z-dephasing
// form the generator supports; preparation and measurement axes rotate along.

#include <cmath>

#include "blochid/propagator.hpp"
#include "blochid/types.hpp"

namespace testutil {

inline blochid::BlochVector rotate_frame(blochid::ModelKind kind,
                                         const blochid::BlochVector& v) {
  using blochid::ModelKind;
  switch (kind) {
    case ModelKind::M1x: return {v.vz, -v.vy, v.vx};  // x <-> z, y -> -y
    case ModelKind::M1y: return {v.vz, v.vx, v.vy};   // cyclic x->y->z->x
    default: return v;
  }
}

inline blochid::BlochGenerator model_generator(blochid::ModelKind kind,
                                               const blochid::ModelParams& p) {
  using blochid::ModelKind;
  switch (kind) {
    case ModelKind::M2: return blochid::build_generator(p.omega, 0, 0, p.gamma);
    case ModelKind::M3: return blochid::build_generator(0, p.omega, 0, p.gamma);
    default:  // z-diagonal models, in their own frame
      return blochid::build_generator(0, 0, p.omega, p.gamma);
  }
}

inline double propagator_trace(
    blochid::ModelKind kind, const blochid::ModelParams& p,
    const blochid::ExperimentGeometry& g, double t,
    blochid::PropagationEngine engine =
        blochid::PropagationEngine::MatrixExponential) {
  const blochid::BlochVector v0{std::sin(g.theta_i), 0.0,
                                std::cos(g.theta_i)};
  const blochid::BlochVector m = blochid::measurement_axis(g.theta_m);
  const blochid::BlochVector vt =
      blochid::propagate(model_generator(kind, p), rotate_frame(kind, v0), t,
                         engine);
  return blochid::dot(rotate_frame(kind, m), vt);
}

}  // namespace testutil
