#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blochid/fit.hpp"

// Model selection over candidate Hamiltonian/dephasing structures, plus the
// closed-form identifiability rules for each structure and geometry.

namespace blochid {

struct DiscriminationReport {
  std::vector<FitReport> fits;         // one per candidate, input order
  std::optional<ModelKind> verdict;    // nullopt = inconclusive
  bool degenerate_geometry = false;    // preparation/measurement blind spot
};

/// Fits every candidate and selects the minimum-BIC model. Returns an
/// inconclusive verdict when the top two candidates differ by less than
/// config.bic_margin. Requires at least two candidates.
DiscriminationReport discriminate(const MeasurementTrace& trace,
                                  const std::vector<ModelKind>& candidates,
                                  std::optional<ExperimentGeometry> fixed_geom,
                                  const FitConfig& config = {});

enum class Identifiability { Identified, Unidentified };

std::string to_string(Identifiability id);

struct IdentifiabilityReport {
  Identifiability omega = Identifiability::Identified;
  Identifiability gamma = Identifiability::Identified;
  std::string omega_reason;
  std::string gamma_reason;
};

/// Closed-form rule table: which of (omega, gamma) a noiseless trace at this
/// geometry pins down.
IdentifiabilityReport identifiability_report(ModelKind kind,
                                             const ExperimentGeometry& geom);

/// True when sin(theta_i)sin(theta_m) and cos(theta_i)cos(theta_m) both
/// vanish to tol: the geometry where the z-basis models produce no signal.
bool degenerate_geometry(const ExperimentGeometry& geom, double tol = 1e-3);

}  // namespace blochid
