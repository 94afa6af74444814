// Benchmark comparing the OpenMP kernels against their serial references:
// grid evaluation of the analytic traces / trajectories, and the multi-start
// fit. Prints one row per kernel with the best-of-3 wall time and speedup.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "blochid/batch.hpp"
#include "blochid/experiment.hpp"
#include "blochid/fit.hpp"
#include "blochid/traces.hpp"

using namespace blochid;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock_type::now();
    f();
    const auto t1 = clock_type::now();
    best = std::min(best,
                    std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %9.4f s   parallel %9.4f s   speedup %5.2fx\n",
              name, serial_s, parallel_s, serial_s / parallel_s);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; parallel paths run serially\n");
#endif

  const ModelParams params(1.3, 0.4);
  const ExperimentGeometry geom(0.7, 0.3);

  {
    const std::size_t n = 4'000'000;
    std::vector<double> t(n), out(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = 10.0 * (double)i / (double)n;
    volatile double sink = 0.0;
    const double ts = best_of(3, [&] {
      trace_grid_serial(ModelKind::M3, params, geom, t, out);
      sink = out[n / 2];
    });
    const double tp = best_of(3, [&] {
      trace_grid(ModelKind::M3, params, geom, t, out);
      sink = out[n / 2];
    });
    (void)sink;
    report("trace_grid (4M points, M3)", ts, tp);
  }

  {
    const std::size_t n = 2'000'000;
    std::vector<double> t(n);
    std::vector<BlochVector> out(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = 10.0 * (double)i / (double)n;
    volatile double sink = 0.0;
    const double ts = best_of(3, [&] {
      bloch_grid_serial(ModelKind::M2, params, 0.6, t, out);
      sink = out[n / 2].vz;
    });
    const double tp = best_of(3, [&] {
      bloch_grid(ModelKind::M2, params, 0.6, t, out);
      sink = out[n / 2].vz;
    });
    (void)sink;
    report("bloch_grid (2M points, M2)", ts, tp);
  }

  {
    const MeasurementTrace tr =
        sample_trace(ModelKind::M3, params, geom, auto_time_grid(params, 200),
                     2000, 42);
    FitConfig cfg;
    cfg.starts = 32;
    cfg.profile_diagnostics = false;
    volatile double sink = 0.0;
    cfg.parallel = false;
    const double ts = best_of(3, [&] {
      sink = fit_model(ModelKind::M3, tr, ExperimentGeometry(0.7, 0.3), cfg)
                 .rss;
    });
    cfg.parallel = true;
    const double tp = best_of(3, [&] {
      sink = fit_model(ModelKind::M3, tr, ExperimentGeometry(0.7, 0.3), cfg)
                 .rss;
    });
    (void)sink;
    report("fit_model (32 starts, M3)", ts, tp);
  }

  return 0;
}
