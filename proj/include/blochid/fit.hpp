#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blochid/experiment.hpp"
#include "blochid/types.hpp"

// Weighted nonlinear least squares for the model traces: multi-start
// Levenberg-Marquardt with numerical Jacobians. gamma is kept nonnegative by
// fitting its square root. Damped-cosine objectives are multimodal in omega,
// so starts combine the trace's dominant periodogram frequency with random
// draws.

namespace blochid {

enum class ParamFlag { Identified, WeaklyIdentified, Unidentified };

std::string to_string(ParamFlag flag);

struct ProfileFlags {
  ParamFlag omega = ParamFlag::Identified;
  ParamFlag gamma = ParamFlag::Identified;
};

struct FitConfig {
  int starts = 16;
  int max_evals = 2000;        // objective evaluations per start
  double rss_rel_tol = 1e-10;  // stop on relative rss change below this
  double bic_margin = 2.0;     // verdicts closer than this are inconclusive
  double tol_deg = 1e-3;       // degenerate-geometry threshold
  double tol_flat = 1e-6;      // profile flatness (relative)
  double tol_weak = 1e-3;      // weak-identifiability band (relative)
  int profile_points = 9;      // grid size for diagnostic profiles
  bool profile_diagnostics = true;
  bool parallel = true;        // OpenMP over starts
  std::uint64_t start_seed = 0xB10C1Dull;
  std::optional<double> fixed_theta_i;
  std::optional<double> fixed_theta_m;
};

struct FitReport {
  ModelKind kind = ModelKind::M1z;
  ModelParams params_hat;
  ExperimentGeometry geom_hat;  // fitted when free, echoed when fixed
  double rss = 0.0;             // weighted residual sum of squares
  int n_points = 0;
  int n_free_params = 0;
  double information_criterion = 0.0;  // BIC, see bic()
  bool converged = false;
  ProfileFlags profile_flags;
};

/// BIC = n ln(rss/n) + k ln(n), with rss floored at a scale-relative epsilon
/// so identically-fitting candidates tie instead of comparing rounding noise.
double bic(double rss, int n_points, int n_free_params, double rss_floor);

/// Weight of one sample: shots / (1 - p_hat^2 + 1/(4 shots)). The floor term
/// keeps the weight finite where the binomial variance vanishes at p = +-1.
double sample_weight(double p_hat, std::int64_t shots);

/// Fits `kind` to the trace. `fixed_geom`, when present, pins both angles
/// (overriding any per-angle pin in the config); otherwise config-pinned
/// angles stay fixed and the rest are fitted. Throws std::invalid_argument
/// if the trace has fewer than n_free_params + 1 points.
FitReport fit_model(ModelKind kind, const MeasurementTrace& trace,
                    std::optional<ExperimentGeometry> fixed_geom,
                    const FitConfig& config = {});

enum class ProfileParam { Omega, Gamma };

struct ProfilePoint {
  double value = 0.0;
  double rss = 0.0;  // minimum over the remaining free parameters
};

/// Profile of the objective along one parameter, other parameters
/// re-optimized at every grid value (warm-started along the grid).
std::vector<ProfilePoint> profile_scan(
    ModelKind kind, const MeasurementTrace& trace, ProfileParam param,
    std::span<const double> grid,
    std::optional<ExperimentGeometry> fixed_geom = std::nullopt,
    const FitConfig& config = {});

/// Flatness classification of a profile curve. The scale adds a small
/// data-dependent floor to rss_min so that noiseless profiles (rss ~ 0)
/// classify correctly.
ParamFlag classify_profile(std::span<const ProfilePoint> profile,
                           double rss_scale_floor, const FitConfig& config);

/// Floor used by classify_profile and bic: 1e-10 * (sum_i w_i p_hat_i^2 + 1).
double rss_scale_floor(const MeasurementTrace& trace);

/// Dominant angular frequency of the de-meaned trace by brute-force
/// periodogram on the Fourier grid of the observation window; 0 for
/// structureless traces.
double dominant_frequency(const MeasurementTrace& trace);

}  // namespace blochid
