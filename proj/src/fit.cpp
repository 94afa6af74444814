#include "blochid/fit.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "blochid/rng.hpp"
#include "blochid/traces.hpp"

namespace blochid {

std::string to_string(ParamFlag flag) {
  switch (flag) {
    case ParamFlag::Identified: return "identified";
    case ParamFlag::WeaklyIdentified: return "weakly_identified";
    case ParamFlag::Unidentified: return "unidentified";
  }
  return "?";
}

double sample_weight(double p_hat, std::int64_t shots) {
  const double var_floor = 1.0 / (4.0 * (double)shots);
  return (double)shots / (1.0 - p_hat * p_hat + var_floor);
}

double rss_scale_floor(const MeasurementTrace& trace) {
  double energy = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i)
    energy += sample_weight(trace.estimates[i], trace.shots[i]) *
              trace.estimates[i] * trace.estimates[i];
  return 1e-10 * (energy + 1.0);
}

double bic(double rss, int n_points, int n_free_params, double rss_floor) {
  const double n = (double)n_points;
  const double eff = std::max(rss, rss_floor);
  return n * std::log(eff / n) + (double)n_free_params * std::log(n);
}

double dominant_frequency(const MeasurementTrace& trace) {
  const std::size_t n = trace.size();
  if (n < 4) return 0.0;
  const double window = trace.times.back() - trace.times.front();
  if (!(window > 0.0)) return 0.0;

  double mean = 0.0;
  for (double p : trace.estimates) mean += p;
  mean /= (double)n;

  const std::size_t harmonics = std::min<std::size_t>(512, n / 2);
  double best_power = 0.0;
  double best_w = 0.0;
  for (std::size_t j = 1; j <= harmonics; ++j) {
    const double w = kTwoPi * (double)j / window;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = trace.estimates[i] - mean;
      re += d * std::cos(w * trace.times[i]);
      im += d * std::sin(w * trace.times[i]);
    }
    const double power = re * re + im * im;
    if (power > best_power) {
      best_power = power;
      best_w = w;
    }
  }
  return best_w;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Which of (omega, sqrt_gamma, theta_i, theta_m) are optimized; the rest are
// pinned. gamma enters the pack as its square root so the fitted rate can
// never go negative.
struct FreeSet {
  bool omega = true;
  bool gamma = true;
  bool theta_i = true;
  bool theta_m = true;
  double omega_value = 0.0;
  double gamma_value = 0.0;  // stored as gamma, not its root
  double theta_i_value = 0.0;
  double theta_m_value = 0.0;

  int count() const {
    return (int)omega + (int)gamma + (int)theta_i + (int)theta_m;
  }
};

struct ParamTuple {
  double omega = 0.0;
  double gamma = 0.0;
  double theta_i = 0.0;
  double theta_m = 0.0;
};

std::vector<double> pack_for(const FreeSet& fs, const ParamTuple& t) {
  std::vector<double> x;
  x.reserve(4);
  if (fs.omega) x.push_back(t.omega);
  if (fs.gamma) x.push_back(std::sqrt(std::max(0.0, t.gamma)));
  if (fs.theta_i) x.push_back(t.theta_i);
  if (fs.theta_m) x.push_back(t.theta_m);
  return x;
}

// Frequencies beyond the grid's Nyquist rate are exact aliases of in-band
// ones on a uniform grid; they carry no extra information, and chasing them
// lets a wrong model alias-fit the data. The fit stays inside the band.
double omega_bound(const MeasurementTrace& tr) {
  if (tr.size() < 2) return std::numeric_limits<double>::infinity();
  std::vector<double> dt(tr.size() - 1);
  for (std::size_t i = 0; i + 1 < tr.size(); ++i)
    dt[i] = tr.times[i + 1] - tr.times[i];
  std::nth_element(dt.begin(), dt.begin() + dt.size() / 2, dt.end());
  return 3.14159265358979323846 / dt[dt.size() / 2];
}

class Objective {
 public:
  Objective(ModelKind kind, const MeasurementTrace& tr, const FreeSet& fs)
      : kind_(kind), tr_(tr), fs_(fs), wsqrt_(tr.size()),
        omega_cap_(omega_bound(tr)) {
    for (std::size_t i = 0; i < tr.size(); ++i)
      wsqrt_[i] = std::sqrt(sample_weight(tr.estimates[i], tr.shots[i]));
  }

  int n_residuals() const { return (int)tr_.size(); }
  int n_free() const { return fs_.count(); }
  double omega_cap() const { return omega_cap_; }

  // Projects a trial point back into the admissible box (|omega| in band).
  void clamp(double* x) const {
    if (fs_.omega) x[0] = std::clamp(x[0], -omega_cap_, omega_cap_);
  }

  ParamTuple unpack(const double* x) const {
    ParamTuple t;
    int j = 0;
    t.omega = fs_.omega ? x[j++] : fs_.omega_value;
    const double u = fs_.gamma ? x[j++] : 0.0;
    t.gamma = fs_.gamma ? u * u : fs_.gamma_value;
    t.theta_i = fs_.theta_i ? x[j++] : fs_.theta_i_value;
    t.theta_m = fs_.theta_m ? x[j++] : fs_.theta_m_value;
    return t;
  }

  // Weighted residuals r_i = sqrt(w_i) (model - p_hat); returns the rss.
  double residuals(const double* x, double* r) const {
    const ParamTuple t = unpack(x);
    ModelParams p;
    p.omega = t.omega;
    p.gamma = t.gamma;
    ExperimentGeometry g;
    g.theta_i = t.theta_i;  // traces are periodic; no need to wrap here
    g.theta_m = t.theta_m;
    double rss = 0.0;
    for (std::size_t i = 0; i < tr_.size(); ++i) {
      const double m = trace(kind_, p, g, tr_.times[i]);
      const double ri = wsqrt_[i] * (m - tr_.estimates[i]);
      r[i] = ri;
      rss += ri * ri;
    }
    return std::isfinite(rss) ? rss : kInf;
  }

 private:
  ModelKind kind_;
  const MeasurementTrace& tr_;
  FreeSet fs_;
  std::vector<double> wsqrt_;
  double omega_cap_;
};

struct LocalFit {
  std::vector<double> x;
  double rss = kInf;
  bool converged = false;
};

// Solves (A + lambda*D) dx = -g for k <= 4 by Gaussian elimination with
// partial pivoting. Returns false on a singular system.
bool solve_damped(int k, const double* a, const double* diag, double lambda,
                  const double* g, double* dx) {
  double m[4][5];
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) m[i][j] = a[i * k + j];
    m[i][i] += lambda * diag[i];
    m[i][k] = -g[i];
  }
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return false;
    if (piv != col)
      for (int j = col; j <= k; ++j) std::swap(m[col][j], m[piv][j]);
    for (int r = col + 1; r < k; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int j = col; j <= k; ++j) m[r][j] -= f * m[col][j];
    }
  }
  for (int i = k - 1; i >= 0; --i) {
    double s = m[i][k];
    for (int j = i + 1; j < k; ++j) s -= m[i][j] * dx[j];
    dx[i] = s / m[i][i];
    if (!std::isfinite(dx[i])) return false;
  }
  return true;
}

LocalFit levenberg_marquardt(const Objective& obj, std::vector<double> x,
                             int max_evals, double rel_tol) {
  const int k = obj.n_free();
  const int n = obj.n_residuals();
  std::vector<double> r(n), r_try(n), jac(n * k);
  std::vector<double> x_try(k), a(k * k), g(k), diag(k), dx(k);

  int evals = 0;
  auto eval = [&](const std::vector<double>& xx, std::vector<double>& rr) {
    ++evals;
    return obj.residuals(xx.data(), rr.data());
  };

  obj.clamp(x.data());
  double rss = eval(x, r);
  LocalFit out{x, rss, false};
  if (!std::isfinite(rss)) return out;
  if (rss == 0.0) {  // already at an exact fit
    out.converged = true;
    return out;
  }

  double lambda = 1e-3;
  const double fd_step = std::sqrt(DBL_EPSILON);

  while (evals + k + 1 <= max_evals) {
    // Forward-difference Jacobian.
    for (int j = 0; j < k; ++j) {
      const double h = fd_step * std::max(1.0, std::abs(x[j]));
      x_try = x;
      x_try[j] += h;
      const double rss_j = eval(x_try, r_try);
      if (!std::isfinite(rss_j)) {
        for (int i = 0; i < n; ++i) jac[j * n + i] = 0.0;
        continue;
      }
      for (int i = 0; i < n; ++i) jac[j * n + i] = (r_try[i] - r[i]) / h;
    }

    double max_diag = 0.0;
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += jac[i * n + m] * jac[j * n + m];
        a[i * k + j] = a[j * k + i] = s;
      }
      double gi = 0.0;
      for (int m = 0; m < n; ++m) gi += jac[i * n + m] * r[m];
      g[i] = gi;
      max_diag = std::max(max_diag, a[i * k + i]);
    }
    // Floor the damping diagonal so parameters the model ignores (zero
    // Jacobian column) stay put instead of blowing up the step.
    for (int i = 0; i < k; ++i)
      diag[i] = std::max(a[i * k + i], 1e-12 * max_diag + 1e-300);

    bool stepped = false;
    for (int attempt = 0; attempt < 32 && evals < max_evals; ++attempt) {
      if (!solve_damped(k, a.data(), diag.data(), lambda, g.data(),
                        dx.data())) {
        lambda *= 10.0;
        continue;
      }
      for (int i = 0; i < k; ++i) x_try[i] = x[i] + dx[i];
      obj.clamp(x_try.data());
      const double rss_try = eval(x_try, r_try);
      if (rss_try <= rss) {
        const double improvement = rss - rss_try;
        x = x_try;
        std::swap(r, r_try);
        rss = rss_try;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (improvement <= rel_tol * std::max(rss, DBL_MIN)) {
          out = {x, rss, true};
          return out;
        }
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e14) {
        // No direction improves at machine scale: a local minimum.
        out = {x, rss, true};
        return out;
      }
    }
    if (!stepped && lambda > 1e14) {
      out = {x, rss, true};
      return out;
    }
  }
  out = {x, rss, false};
  return out;
}

std::vector<std::vector<double>> make_starts(const MeasurementTrace& tr,
                                             const FreeSet& fs,
                                             const FitConfig& cfg) {
  const double window =
      std::max(tr.times.back() - tr.times.front(), 1e-12);
  double w_dom = dominant_frequency(tr);
  if (w_dom <= 0.0) w_dom = kTwoPi / window;
  const double w_cap = std::min(
      std::max(4.0 * w_dom, 8.0 * kTwoPi / window), omega_bound(tr));
  static constexpr double kThetaGrid[4] = {0.785398163397448309,
                                           2.356194490192344929,
                                           3.926990816987241548,
                                           5.497787143782138167};
  static constexpr double kOmegaMult[3] = {1.0, 0.5, 2.0};

  SplitMix64 rng(cfg.start_seed);
  const int n_starts = std::max(cfg.starts, 1);
  std::vector<std::vector<double>> starts;
  starts.reserve(n_starts);
  for (int s = 0; s < n_starts; ++s) {
    ParamTuple t;
    if (s < 6) {
      t.omega = kOmegaMult[s % 3] * w_dom;
      t.gamma = (s < 3 ? 1.0 : 0.1) / window;
      t.theta_i = kThetaGrid[s % 4];
      t.theta_m = kThetaGrid[(s + 2) % 4];
    } else {
      t.omega = rng.next_unit() * w_cap;
      t.gamma = std::pow(10.0, -2.0 + 3.0 * rng.next_unit()) / window;
      t.theta_i = rng.next_unit() * kTwoPi;
      t.theta_m = rng.next_unit() * kTwoPi;
    }
    starts.push_back(pack_for(fs, t));
  }
  return starts;
}

LocalFit run_multistart(const Objective& obj,
                        const std::vector<std::vector<double>>& starts,
                        const FitConfig& cfg) {
  const int m = (int)starts.size();
  std::vector<LocalFit> results(m);
  if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i)
      results[i] =
          levenberg_marquardt(obj, starts[i], cfg.max_evals, cfg.rss_rel_tol);
  } else {
    for (int i = 0; i < m; ++i)
      results[i] =
          levenberg_marquardt(obj, starts[i], cfg.max_evals, cfg.rss_rel_tol);
  }
  // Ordered reduction: lowest rss wins, ties broken by start index, so the
  // outcome does not depend on scheduling.
  int best = 0;
  for (int i = 1; i < m; ++i)
    if (results[i].rss < results[best].rss) best = i;
  return results[best];
}

FreeSet make_free_set(const std::optional<ExperimentGeometry>& fixed_geom,
                      const FitConfig& cfg) {
  FreeSet fs;
  if (fixed_geom) {
    fs.theta_i = fs.theta_m = false;
    fs.theta_i_value = fixed_geom->theta_i;
    fs.theta_m_value = fixed_geom->theta_m;
    return fs;
  }
  if (cfg.fixed_theta_i) {
    fs.theta_i = false;
    fs.theta_i_value = wrap_angle(*cfg.fixed_theta_i);
  }
  if (cfg.fixed_theta_m) {
    fs.theta_m = false;
    fs.theta_m_value = wrap_angle(*cfg.fixed_theta_m);
  }
  return fs;
}

std::vector<ProfilePoint> profile_core(ModelKind kind,
                                       const MeasurementTrace& tr,
                                       ProfileParam param,
                                       std::span<const double> grid,
                                       const FreeSet& base_fs,
                                       const FitConfig& cfg) {
  Objective base_obj(kind, tr, base_fs);
  const LocalFit base =
      run_multistart(base_obj, make_starts(tr, base_fs, cfg), cfg);
  const ParamTuple warm = base_obj.unpack(base.x.data());

  const int n_fresh = std::max(2, cfg.starts / 4);
  std::vector<ProfilePoint> out;
  out.reserve(grid.size());
  ParamTuple prev = warm;
  for (double v : grid) {
    FreeSet fs = base_fs;
    if (param == ProfileParam::Omega) {
      fs.omega = false;
      fs.omega_value = v;
    } else {
      if (v < 0.0)
        throw std::invalid_argument("profile_scan: gamma grid value < 0");
      fs.gamma = false;
      fs.gamma_value = v;
    }
    Objective obj(kind, tr, fs);
    std::vector<std::vector<double>> starts;
    starts.push_back(pack_for(fs, prev));
    starts.push_back(pack_for(fs, warm));
    FitConfig fresh_cfg = cfg;
    fresh_cfg.starts = n_fresh;
    for (auto& st : make_starts(tr, fs, fresh_cfg)) starts.push_back(std::move(st));
    const LocalFit best = run_multistart(obj, starts, cfg);
    out.push_back({v, best.rss});
    prev = obj.unpack(best.x.data());
    if (param == ProfileParam::Omega)
      prev.omega = v;
    else
      prev.gamma = v;
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(std::max(n, 2));
  const int m = (int)v.size();
  for (int i = 0; i < m; ++i)
    v[i] = lo + (hi - lo) * (double)i / (double)(m - 1);
  return v;
}

}  // namespace

ParamFlag classify_profile(std::span<const ProfilePoint> profile,
                           double rss_scale_floor, const FitConfig& config) {
  double lo = kInf, hi = -kInf;
  for (const ProfilePoint& pt : profile) {
    lo = std::min(lo, pt.rss);
    hi = std::max(hi, pt.rss);
  }
  const double scale = lo + rss_scale_floor;
  const double spread = hi - lo;
  if (spread <= config.tol_flat * scale) return ParamFlag::Unidentified;
  if (spread <= config.tol_weak * scale) return ParamFlag::WeaklyIdentified;
  return ParamFlag::Identified;
}

std::vector<ProfilePoint> profile_scan(
    ModelKind kind, const MeasurementTrace& trace, ProfileParam param,
    std::span<const double> grid,
    std::optional<ExperimentGeometry> fixed_geom, const FitConfig& config) {
  trace.validate();
  if (grid.empty())
    throw std::invalid_argument("profile_scan: grid must be nonempty");
  const FreeSet fs = make_free_set(fixed_geom, config);
  return profile_core(kind, trace, param, grid, fs, config);
}

FitReport fit_model(ModelKind kind, const MeasurementTrace& trace,
                    std::optional<ExperimentGeometry> fixed_geom,
                    const FitConfig& config) {
  trace.validate();
  const FreeSet fs = make_free_set(fixed_geom, config);
  const int k = fs.count();
  if ((int)trace.size() < k + 1)
    throw std::invalid_argument(
        "fit_model: trace must have at least n_free_params + 1 points");

  Objective obj(kind, trace, fs);
  const LocalFit best = run_multistart(obj, make_starts(trace, fs, config), config);
  const ParamTuple tup = obj.unpack(best.x.data());

  FitReport rep;
  rep.kind = kind;
  rep.params_hat.omega = tup.omega;
  rep.params_hat.gamma = tup.gamma;
  rep.geom_hat = ExperimentGeometry(tup.theta_i, tup.theta_m);
  rep.rss = best.rss;
  rep.n_points = (int)trace.size();
  rep.n_free_params = k;
  const double floor = rss_scale_floor(trace);
  rep.information_criterion = bic(best.rss, rep.n_points, k, floor);
  rep.converged = best.converged;

  if (config.profile_diagnostics) {
    const double window =
        std::max(trace.times.back() - trace.times.front(), 1e-12);
    {
      const double s = std::max(std::abs(tup.omega), kTwoPi / window);
      const std::vector<double> grid =
          linspace(tup.omega - 0.75 * s, tup.omega + 0.75 * s,
                   config.profile_points);
      const auto prof = profile_core(kind, trace, ProfileParam::Omega, grid,
                                     fs, config);
      rep.profile_flags.omega = classify_profile(prof, floor, config);
    }
    {
      const double s = std::max(tup.gamma, 1.0 / window);
      const std::vector<double> grid =
          linspace(std::max(0.0, tup.gamma - 0.75 * s), tup.gamma + 0.75 * s,
                   config.profile_points);
      const auto prof = profile_core(kind, trace, ProfileParam::Gamma, grid,
                                     fs, config);
      rep.profile_flags.gamma = classify_profile(prof, floor, config);
    }
  }
  return rep;
}

}  // namespace blochid
