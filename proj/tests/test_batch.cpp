#include "blochid/batch.hpp"

#include <vector>

#include "doctest.h"

using namespace blochid;

TEST_CASE("parallel grid kernels match the serial references bitwise") {
  const ModelParams p(1.3, 0.4);
  const ExperimentGeometry g(0.7, 0.3);
  std::vector<double> t(10000);
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = 12.0 * (double)i / (double)t.size();

  const ModelKind kinds[] = {ModelKind::M1z, ModelKind::M1x, ModelKind::M1y,
                             ModelKind::M2, ModelKind::M3};
  for (ModelKind kind : kinds) {
    std::vector<double> par(t.size()), ser(t.size());
    trace_grid(kind, p, g, t, par);
    trace_grid_serial(kind, p, g, t, ser);
    CHECK(par == ser);

    std::vector<BlochVector> vp(t.size()), vs(t.size());
    bloch_grid(kind, p, 0.7, t, vp);
    bloch_grid_serial(kind, p, 0.7, t, vs);
    bool equal = true;
    for (std::size_t i = 0; i < t.size(); ++i)
      equal = equal && vp[i].vx == vs[i].vx && vp[i].vy == vs[i].vy &&
              vp[i].vz == vs[i].vz;
    CHECK(equal);
  }
}
