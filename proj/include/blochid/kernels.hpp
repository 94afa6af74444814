#pragma once

#include <cassert>
#include <cmath>

#include "blochid/types.hpp"

// Damped oscillation kernels shared by every model trace.
//
// All closed-form solutions are built from the pair
//   c(t) = e^{-gamma t/2} * cos(what t)
//   s(t) = e^{-gamma t/2} * sin(what t) / what
// with what^2 = omega^2 - gamma^2/4.  For what^2 < 0 the trig functions
// continue analytically into cosh/sinh, and at criticality s(t) -> t.
// Keeping s in the what-free form removes every division by what from the
// trace formulas, so one code path covers all three regimes.

namespace blochid {

enum class DampingRegime { Underdamped, Critical, Overdamped };

/// Regime classification plus |what| (zero at criticality).
struct EffectiveFrequency {
  DampingRegime regime = DampingRegime::Critical;
  double value = 0.0;
};

/// Values of the kernel pair at one instant. s(0) = 0, c(0) = 1 always.
struct DampedBasisPair {
  double c = 1.0;
  double s = 0.0;
};

namespace detail {
// Classification tolerance on omega^2 - gamma^2/4.
inline constexpr double kCriticalTol = 1e-9;
// Within this band of criticality, evaluate by Taylor series in the
// discriminant instead of trig/hyperbolic forms (cancellation there).
inline constexpr double kSeriesBand = 1e-5;
}  // namespace detail

inline EffectiveFrequency effective_frequency(const ModelParams& p) noexcept {
  const double disc = p.omega * p.omega - 0.25 * p.gamma * p.gamma;
  const double tol =
      detail::kCriticalTol * std::max(1.0, p.gamma * p.gamma);
  if (disc > tol)
    return {DampingRegime::Underdamped, std::sqrt(disc)};
  if (disc < -tol)
    return {DampingRegime::Overdamped, std::sqrt(-disc)};
  return {DampingRegime::Critical, 0.0};
}

inline DampedBasisPair damped_kernels(const ModelParams& p, double t) noexcept {
  assert(t >= 0.0);
  const double half_gamma = 0.5 * p.gamma;
  const double disc = p.omega * p.omega - half_gamma * half_gamma;

  if (std::abs(disc) <= detail::kSeriesBand) {
    // 4-term series in x = disc*t^2 around the critical point:
    //   cos(sqrt(x)) = 1 - x/2 + x^2/24 - x^3/720
    //   sin(sqrt(x))/sqrt(x) = 1 - x/6 + x^2/120 - x^3/5040
    const double x = disc * t * t;
    const double cs = 1.0 + x * (-1.0 / 2 + x * (1.0 / 24 + x * (-1.0 / 720)));
    const double ss = 1.0 + x * (-1.0 / 6 + x * (1.0 / 120 + x * (-1.0 / 5040)));
    const double e = std::exp(-half_gamma * t);
    return {e * cs, e * t * ss};
  }

  if (disc > 0.0) {
    const double w = std::sqrt(disc);
    const double e = std::exp(-half_gamma * t);
    return {e * std::cos(w * t), e * std::sin(w * t) / w};
  }

  // Overdamped. e^{-gamma t/2} cosh(w t) written as a sum of two decaying
  // exponentials so neither factor overflows:
  //   w - gamma/2 = -omega^2 / (w + gamma/2) <= 0.
  const double w = std::sqrt(-disc);
  const double ea = std::exp(-(p.omega * p.omega) * t / (w + half_gamma));
  const double eb = std::exp(-(w + half_gamma) * t);
  return {0.5 * (ea + eb), 0.5 * (ea - eb) / w};
}

/// Phi^x_2(t) = -omega * s(t): the transverse component picked up by an
/// x-axis drive acting on a z-prepared state.
inline double phi_x2(const ModelParams& p, double t) noexcept {
  return -p.omega * damped_kernels(p, t).s;
}

/// Phi^x_3(t) = c(t) + (gamma/2) s(t): population relaxation envelope under
/// an x-axis drive.
inline double phi_x3(const ModelParams& p, double t) noexcept {
  const DampedBasisPair k = damped_kernels(p, t);
  return k.c + 0.5 * p.gamma * k.s;
}

/// Phi^y_1(t) = c(t) - (gamma/2) s(t).
inline double phi_y1(const ModelParams& p, double t) noexcept {
  const DampedBasisPair k = damped_kernels(p, t);
  return k.c - 0.5 * p.gamma * k.s;
}

/// Phi^y_3 coincides with Phi^x_3.
inline double phi_y3(const ModelParams& p, double t) noexcept {
  return phi_x3(p, t);
}

}  // namespace blochid
