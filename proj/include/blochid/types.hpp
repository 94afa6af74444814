#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace blochid {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Raised for malformed external input (files, CLI values). CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical procedure cannot continue (step-size underflow,
/// non-finite intermediate). CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The five Hamiltonian/dephasing structures the toolkit can tell apart.
/// M1z: H and V both along z. M1x/M1y: H and V both along x/y.
/// M2: H along x, V along z. M3: H along y, V along z.
enum class ModelKind { M1z, M1x, M1y, M2, M3 };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// Angular frequency omega [rad/time] and dephasing rate gamma [1/time],
/// in units with hbar = 1.
struct ModelParams {
  double omega = 0.0;
  double gamma = 0.0;

  ModelParams() = default;
  ModelParams(double omega_, double gamma_) : omega(omega_), gamma(gamma_) {
    if (!(gamma_ >= 0.0))
      throw std::invalid_argument("ModelParams: gamma must be >= 0");
  }
};

/// Maps any angle to the canonical interval [0, 2*pi).
inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // fmod remainder can round up to 2*pi
  return r;
}

/// Preparation angle theta_i and measurement angle theta_m [rad].
/// Both stored reduced to [0, 2*pi); every trace is 2*pi-periodic in each.
struct ExperimentGeometry {
  double theta_i = 0.0;
  double theta_m = 0.0;

  ExperimentGeometry() = default;
  ExperimentGeometry(double theta_i_, double theta_m_)
      : theta_i(wrap_angle(theta_i_)), theta_m(wrap_angle(theta_m_)) {}
};

/// Coherence vector (v_x, v_y, v_z); physical states have norm <= 1.
struct BlochVector {
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;

  double norm() const { return std::sqrt(vx * vx + vy * vy + vz * vz); }
};

inline double dot(const BlochVector& a, const BlochVector& b) {
  return a.vx * b.vx + a.vy * b.vy + a.vz * b.vz;
}

}  // namespace blochid
