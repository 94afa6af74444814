#include "blochid/propagator.hpp"

#include <cmath>

#include "blochid/rng.hpp"
#include "blochid/traces.hpp"
#include "doctest.h"
#include "oracle_helpers.hpp"

using namespace blochid;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("build_generator lays the matrix out as the Bloch equation") {
  const BlochGenerator g = build_generator(1.0, 2.0, 3.0, 0.5);
  CHECK(g.a(0, 0) == -0.5);
  CHECK(g.a(0, 1) == -3.0);
  CHECK(g.a(0, 2) == -2.0);
  CHECK(g.a(1, 0) == 3.0);
  CHECK(g.a(1, 1) == -0.5);
  CHECK(g.a(1, 2) == -1.0);
  CHECK(g.a(2, 0) == 2.0);
  CHECK(g.a(2, 1) == 1.0);
  CHECK(g.a(2, 2) == 0.0);
  // A + A^T = diag(-2 gamma, -2 gamma, 0): the symmetric part is dephasing.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double sym = g.a(i, j) + g.a(j, i);
      if (i == j && i < 2)
        CHECK(sym == -1.0);
      else
        CHECK(sym == 0.0);
    }

  const BlochGenerator d = build_generator(0, 0, 0, 1.0);
  CHECK(d.a(0, 0) == -1.0);
  CHECK(d.a(1, 1) == -1.0);
  CHECK(d.a(2, 2) == 0.0);

  CHECK_THROWS_AS(build_generator(0, 0, 0, -0.5), std::invalid_argument);
}

TEST_CASE("propagate: identity at t = 0 and half-turn about z") {
  const BlochGenerator g = build_generator(0.3, -0.8, 1.7, 0.9);
  const BlochVector v0{0.2, -0.5, 0.7};
  const BlochVector r = propagate(g, v0, 0.0);
  CHECK(r.vx == v0.vx);
  CHECK(r.vy == v0.vy);
  CHECK(r.vz == v0.vz);

  const BlochGenerator h = build_generator(0, 0, kPi, 0.0);
  const BlochVector half = propagate(h, BlochVector{1, 0, 0}, 1.0);
  CHECK(half.vx == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(half.vy) < 1e-12);
  CHECK(std::abs(half.vz) < 1e-15);
}

TEST_CASE("gamma = 0 propagation is norm-preserving") {
  SplitMix64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const BlochGenerator g =
        build_generator(4.0 * rng.next_unit() - 2.0,
                        4.0 * rng.next_unit() - 2.0,
                        4.0 * rng.next_unit() - 2.0, 0.0);
    BlochVector v{rng.next_unit() - 0.5, rng.next_unit() - 0.5,
                  rng.next_unit() - 0.5};
    const double n0 = v.norm();
    v = propagate(g, v, 10.0 * rng.next_unit());
    CHECK(std::abs(v.norm() - n0) < 1e-10);
  }
}

TEST_CASE("semigroup property of the matrix exponential") {
  SplitMix64 rng(6);
  for (int i = 0; i < 30; ++i) {
    const BlochGenerator g =
        build_generator(3.0 * rng.next_unit(), 3.0 * rng.next_unit(),
                        3.0 * rng.next_unit(), 2.0 * rng.next_unit());
    const BlochVector v0{rng.next_unit() - 0.5, rng.next_unit() - 0.5,
                         rng.next_unit() - 0.5};
    const double t1 = 4.0 * rng.next_unit();
    const double t2 = 4.0 * rng.next_unit();
    const BlochVector a = propagate(g, propagate(g, v0, t1), t2);
    const BlochVector b = propagate(g, v0, t1 + t2);
    CHECK(std::abs(a.vx - b.vx) < 1e-9);
    CHECK(std::abs(a.vy - b.vy) < 1e-9);
    CHECK(std::abs(a.vz - b.vz) < 1e-9);
  }
}

TEST_CASE("matrix exponential and adaptive RK agree to 1e-9") {
  SplitMix64 rng(7);
  for (int i = 0; i < 25; ++i) {
    const BlochGenerator g =
        build_generator(4.0 * rng.next_unit(), 4.0 * rng.next_unit(),
                        4.0 * rng.next_unit(), 3.0 * rng.next_unit());
    const BlochVector v0{rng.next_unit() - 0.5, rng.next_unit() - 0.5,
                         rng.next_unit() - 0.5};
    const double t = 8.0 * rng.next_unit();
    const BlochVector a =
        propagate(g, v0, t, PropagationEngine::MatrixExponential);
    const BlochVector b = propagate(g, v0, t, PropagationEngine::AdaptiveRK);
    CHECK(std::abs(a.vx - b.vx) < 1e-9);
    CHECK(std::abs(a.vy - b.vy) < 1e-9);
    CHECK(std::abs(a.vz - b.vz) < 1e-9);
  }
}

TEST_CASE("trace_from_state examples") {
  CHECK(trace_from_state(BlochVector{0, 0, 1}, 0.0) == 1.0);
  CHECK(trace_from_state(BlochVector{1, 0, 0}, kPi / 2) ==
        doctest::Approx(1.0).epsilon(1e-15));
  // 0.3 sin(pi/3) + 0.5 cos(pi/3), frozen from a direct 2x2 computation.
  CHECK(trace_from_state(BlochVector{0.3, 0.4, 0.5}, kPi / 3) ==
        doctest::Approx(0.50980762113533159).epsilon(1e-15));
}

TEST_CASE("propagator reproduces every analytic trace") {
  const ModelKind kinds[] = {ModelKind::M1z, ModelKind::M1x, ModelKind::M1y,
                             ModelKind::M2, ModelKind::M3};
  SplitMix64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const ModelKind kind = kinds[rng.next() % 5];
    const ModelParams p(5.0 * rng.next_unit(), 5.0 * rng.next_unit());
    const ExperimentGeometry g(kTwoPi * rng.next_unit(),
                               kTwoPi * rng.next_unit());
    const double t = 10.0 * rng.next_unit();
    const double analytic = trace(kind, p, g, t);
    CHECK(std::abs(analytic - testutil::propagator_trace(kind, p, g, t)) <
          1e-8);
  }
  // The M2 ingredients specifically (x-drive on a tilted state).
  const ModelParams p(2.0, 0.5);
  const ExperimentGeometry g(kPi / 5, 0.9);
  CHECK(std::abs(trace_m2(p, g, 1.3) -
                 testutil::propagator_trace(ModelKind::M2, p, g, 1.3)) < 1e-8);
}

TEST_CASE("both engines reproduce the analytic traces") {
  SplitMix64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const ModelParams p(5.0 * rng.next_unit(), 5.0 * rng.next_unit());
    const ExperimentGeometry g(kTwoPi * rng.next_unit(),
                               kTwoPi * rng.next_unit());
    const double t = 6.0 * rng.next_unit();
    const double analytic = trace(ModelKind::M3, p, g, t);
    CHECK(std::abs(analytic -
                   testutil::propagator_trace(
                       ModelKind::M3, p, g, t,
                       PropagationEngine::AdaptiveRK)) < 1e-8);
  }
}

TEST_CASE("propagate rejects negative time") {
  const BlochGenerator g = build_generator(0, 0, 1, 0.1);
  CHECK_THROWS_AS(propagate(g, BlochVector{1, 0, 0}, -1.0),
                  std::invalid_argument);
}
