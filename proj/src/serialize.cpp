#include "blochid/serialize.hpp"

namespace blochid {

using nlohmann::json;

json trace_to_json(const MeasurementTrace& trace) {
  json j;
  j["schema_version"] = 1;
  json meta = json::object();
  if (trace.meta) {
    const TraceMeta& m = *trace.meta;
    if (m.kind) meta["kind"] = to_string(*m.kind);
    if (m.omega) meta["omega"] = *m.omega;
    if (m.gamma) meta["gamma"] = *m.gamma;
    if (m.theta_i) meta["theta_I"] = *m.theta_i;
    if (m.theta_m) meta["theta_M"] = *m.theta_m;
    if (m.seed) meta["seed"] = *m.seed;
    if (!m.rng.empty()) meta["rng"] = m.rng;
  }
  j["meta"] = meta;
  json points = json::array();
  for (std::size_t i = 0; i < trace.size(); ++i)
    points.push_back(
        {{"t", trace.times[i]}, {"p", trace.estimates[i]},
         {"shots", trace.shots[i]}});
  j["points"] = points;
  return j;
}

MeasurementTrace trace_from_json(const json& j) {
  try {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
      throw ValidationError("trace json: missing or unsupported schema_version");
    MeasurementTrace tr;
    if (j.contains("meta") && !j.at("meta").empty()) {
      const json& m = j.at("meta");
      TraceMeta meta;
      if (m.contains("kind"))
        meta.kind = parse_model_kind(m.at("kind").get<std::string>());
      if (m.contains("omega")) meta.omega = m.at("omega").get<double>();
      if (m.contains("gamma")) meta.gamma = m.at("gamma").get<double>();
      if (m.contains("theta_I")) meta.theta_i = m.at("theta_I").get<double>();
      if (m.contains("theta_M")) meta.theta_m = m.at("theta_M").get<double>();
      if (m.contains("seed")) meta.seed = m.at("seed").get<std::uint64_t>();
      if (m.contains("rng")) meta.rng = m.at("rng").get<std::string>();
      tr.meta = meta;
    }
    for (const json& pt : j.at("points")) {
      tr.times.push_back(pt.at("t").get<double>());
      tr.estimates.push_back(pt.at("p").get<double>());
      tr.shots.push_back(pt.at("shots").get<std::int64_t>());
    }
    return tr;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("trace json: ") + e.what());
  }
}

json report_to_json(const FitReport& report) {
  json flags;
  flags["omega"] = to_string(report.profile_flags.omega);
  flags["gamma"] = to_string(report.profile_flags.gamma);
  return json{{"kind", to_string(report.kind)},
              {"omega", report.params_hat.omega},
              {"gamma", report.params_hat.gamma},
              {"theta_i", report.geom_hat.theta_i},
              {"theta_m", report.geom_hat.theta_m},
              {"rss", report.rss},
              {"n_points", report.n_points},
              {"n_free_params", report.n_free_params},
              {"bic", report.information_criterion},
              {"converged", report.converged},
              {"profile_flags", flags}};
}

json report_to_json(const DiscriminationReport& report) {
  json fits = json::array();
  for (const FitReport& fit : report.fits) fits.push_back(report_to_json(fit));
  return json{
      {"verdict", report.verdict ? to_string(*report.verdict) : "inconclusive"},
      {"degenerate_geometry", report.degenerate_geometry},
      {"fits", fits}};
}

json report_to_json(const IdentifiabilityReport& report) {
  return json{{"omega", to_string(report.omega)},
              {"gamma", to_string(report.gamma)},
              {"reasons",
               {{"omega", report.omega_reason}, {"gamma", report.gamma_reason}}}};
}

FitConfig fit_config_from_json(const json& j, FitConfig base) {
  try {
    if (j.contains("starts")) base.starts = j.at("starts").get<int>();
    if (j.contains("max_evals")) base.max_evals = j.at("max_evals").get<int>();
    if (j.contains("rss_rel_tol"))
      base.rss_rel_tol = j.at("rss_rel_tol").get<double>();
    if (j.contains("bic_margin"))
      base.bic_margin = j.at("bic_margin").get<double>();
    if (j.contains("tol_deg")) base.tol_deg = j.at("tol_deg").get<double>();
    if (j.contains("tol_flat")) base.tol_flat = j.at("tol_flat").get<double>();
    if (j.contains("tol_weak")) base.tol_weak = j.at("tol_weak").get<double>();
    if (j.contains("profile_points"))
      base.profile_points = j.at("profile_points").get<int>();
    if (j.contains("profile_diagnostics"))
      base.profile_diagnostics = j.at("profile_diagnostics").get<bool>();
    if (j.contains("parallel")) base.parallel = j.at("parallel").get<bool>();
    if (j.contains("start_seed"))
      base.start_seed = j.at("start_seed").get<std::uint64_t>();
    if (j.contains("fixed_geometry")) {
      const json& g = j.at("fixed_geometry");
      base.fixed_theta_i = g.at("theta_i").get<double>();
      base.fixed_theta_m = g.at("theta_m").get<double>();
    }
    return base;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config json: ") + e.what());
  }
}

std::vector<ModelKind> candidates_from_json(const json& j) {
  try {
    std::vector<ModelKind> out;
    for (const json& c : j.at("candidates"))
      out.push_back(parse_model_kind(c.get<std::string>()));
    return out;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config json: ") + e.what());
  }
}

}  // namespace blochid
