#pragma once

#include <array>

#include "blochid/types.hpp"

// Numerical propagation of the general Bloch equation
//   dv/dt = A v,   A = [ -gamma, -omega_z, -omega_y ;
//                         omega_z, -gamma, -omega_x ;
//                         omega_y,  omega_x,  0     ]
// used as an independent cross-check of every closed-form solution, and to
// evolve Hamiltonians along arbitrary axes (z-basis dephasing).

namespace blochid {

struct Mat3 {
  std::array<double, 9> m{};  // row-major

  double& operator()(int r, int c) { return m[3 * r + c]; }
  double operator()(int r, int c) const { return m[3 * r + c]; }

  static Mat3 identity();
};

Mat3 operator*(const Mat3& a, const Mat3& b);
BlochVector operator*(const Mat3& a, const BlochVector& v);

/// Generator matrix of the Bloch equation. The antisymmetric part carries the
/// Hamiltonian, the symmetric part the dephasing: A + A^T = diag(-2g, -2g, 0).
struct BlochGenerator {
  Mat3 a;
};

/// Assembles the generator; rejects negative gamma.
BlochGenerator build_generator(double omega_x, double omega_y, double omega_z,
                               double gamma);

/// Matrix exponential by scaling and squaring with a diagonal Pade
/// approximant (Moler & Van Loan method 3).
Mat3 expm(const Mat3& a);

enum class PropagationEngine { MatrixExponential, AdaptiveRK };

/// v(t) = exp(A t) v0. The adaptive engine is a Dormand-Prince 5(4) pair at
/// relative tolerance 1e-10; it throws NumericalError on step underflow.
BlochVector propagate(const BlochGenerator& gen, const BlochVector& v0,
                      double t,
                      PropagationEngine engine =
                          PropagationEngine::MatrixExponential);

/// Bloch axis of the measurement operator M(theta_m); states and measurement
/// axes live in the xz-plane by convention.
inline BlochVector measurement_axis(double theta_m) noexcept {
  return {std::sin(theta_m), 0.0, std::cos(theta_m)};
}

/// p = Tr[M rho] = sin(theta_m) v_x + cos(theta_m) v_z.
inline double trace_from_state(const BlochVector& v, double theta_m) noexcept {
  return dot(measurement_axis(theta_m), v);
}

}  // namespace blochid
