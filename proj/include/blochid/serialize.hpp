#pragma once

#include "json.hpp"

#include "blochid/discriminate.hpp"
#include "blochid/experiment.hpp"
#include "blochid/fit.hpp"

// JSON encodings with stable field names. Trace schema:
//   {schema_version: 1,
//    meta: {kind?, omega?, gamma?, theta_I?, theta_M?, seed?, rng},
//    points: [{t, p, shots}, ...]}

namespace blochid {

nlohmann::json trace_to_json(const MeasurementTrace& trace);
MeasurementTrace trace_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const FitReport& report);
nlohmann::json report_to_json(const DiscriminationReport& report);
nlohmann::json report_to_json(const IdentifiabilityReport& report);

/// Applies the keys present in `j` on top of `base`: starts, max_evals,
/// rss_rel_tol, bic_margin, tol_deg, tol_flat, tol_weak, profile_points,
/// profile_diagnostics, parallel, start_seed,
/// fixed_geometry {theta_i, theta_m}.
FitConfig fit_config_from_json(const nlohmann::json& j,
                               FitConfig base = {});

/// Candidate list from a config object's "candidates" array.
std::vector<ModelKind> candidates_from_json(const nlohmann::json& j);

}  // namespace blochid
