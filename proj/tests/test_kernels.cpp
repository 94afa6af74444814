#include "blochid/kernels.hpp"

#include <cmath>

#include "doctest.h"

using namespace blochid;

TEST_CASE("effective_frequency classifies the three regimes") {
  const EffectiveFrequency under = effective_frequency(ModelParams(1.0, 0.0));
  CHECK(under.regime == DampingRegime::Underdamped);
  CHECK(under.value == doctest::Approx(1.0).epsilon(1e-15));

  const EffectiveFrequency crit = effective_frequency(ModelParams(1.0, 2.0));
  CHECK(crit.regime == DampingRegime::Critical);
  CHECK(crit.value == 0.0);

  const EffectiveFrequency over = effective_frequency(ModelParams(1.0, 4.0));
  CHECK(over.regime == DampingRegime::Overdamped);
  CHECK(over.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("damped_kernels: undamped quarter period") {
  const DampedBasisPair k =
      damped_kernels(ModelParams(1.0, 0.0), 1.5707963267948966);
  CHECK(std::abs(k.c) < 1e-15);
  CHECK(k.s == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("damped_kernels: critical limit formulas") {
  // omega = 1, gamma = 2 is exactly critical: c = e^{-t}, s = t e^{-t}.
  const DampedBasisPair k = damped_kernels(ModelParams(1.0, 2.0), 1.0);
  const double e1 = std::exp(-1.0);
  CHECK(k.c == doctest::Approx(e1).epsilon(1e-14));
  CHECK(k.s == doctest::Approx(e1).epsilon(1e-14));
}

TEST_CASE("damped_kernels: overdamped against high-precision reference") {
  // omega = 1, gamma = 4, t = 0.5: c = e^{-1} cosh(sqrt(3)/2),
  // s = e^{-1} sinh(sqrt(3)/2)/sqrt(3) (frozen at 50-digit precision).
  const DampedBasisPair k = damped_kernels(ModelParams(1.0, 4.0), 0.5);
  CHECK(k.c == doctest::Approx(0.51467487145666220).epsilon(1e-14));
  CHECK(k.s == doctest::Approx(0.20780996132068923).epsilon(1e-14));
}

TEST_CASE("damped_kernels: s(0) = 0, c(0) = 1, ds/dt(0) = 1 in every regime") {
  const ModelParams cases[] = {ModelParams(1.0, 0.0), ModelParams(1.0, 2.0),
                               ModelParams(1.0, 4.0), ModelParams(0.5, 1.0001),
                               ModelParams(3.0, 0.7)};
  for (const ModelParams& p : cases) {
    const DampedBasisPair k0 = damped_kernels(p, 0.0);
    CHECK(k0.s == 0.0);
    CHECK(k0.c == 1.0);
    const double h = 1e-7;
    const DampedBasisPair kh = damped_kernels(p, h);
    CHECK((kh.s - k0.s) / h == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("phi functions: undamped limits and t = 0 values") {
  const ModelParams p(1.0, 0.0);
  for (double t : {0.0, 0.3, 1.1, 4.0}) {
    CHECK(phi_x3(p, t) == doctest::Approx(std::cos(t)).epsilon(1e-14));
    CHECK(phi_x2(p, t) == doctest::Approx(-std::sin(t)).epsilon(1e-14));
    CHECK(phi_y1(p, t) == doctest::Approx(std::cos(t)).epsilon(1e-14));
  }
  const ModelParams q(2.7, 1.3);
  CHECK(phi_x3(q, 0.0) == 1.0);
  CHECK(phi_x2(q, 0.0) == 0.0);
  CHECK(phi_y1(q, 0.0) == 1.0);
}

TEST_CASE("phi_x3 at criticality: e^{-1}(1 + 1)") {
  CHECK(phi_x3(ModelParams(1.0, 2.0), 1.0) ==
        doctest::Approx(0.73575888234288464).epsilon(1e-14));
  // Approaching criticality from both sides agrees with the limit.
  const double above = phi_x3(ModelParams(1.0 + 1e-8, 2.0), 1.0);
  const double below = phi_x3(ModelParams(1.0 - 1e-8, 2.0), 1.0);
  CHECK(std::abs(above - below) < 1e-7);
  CHECK(above == doctest::Approx(0.73575888234288464).epsilon(1e-7));
}

TEST_CASE("phi_y3 is phi_x3") {
  const ModelParams p(2.0, 1.0);
  for (double t : {0.0, 0.7, 2.0, 5.5})
    CHECK(phi_y3(p, t) == phi_x3(p, t));
}

TEST_CASE("regime continuity across the critical boundary") {
  // |phi_x3(omega = 1 +- eps) - phi_x3(omega = 1)| <= 10 eps (1 + t^2)
  // at gamma = 2 for eps <= 1e-4.
  const double gamma = 2.0;
  for (double eps : {1e-4, 1e-5, 1e-6, 1e-8}) {
    for (int i = 0; i <= 50; ++i) {
      const double t = 5.0 * i / 50.0;
      const double mid = phi_x3(ModelParams(1.0, gamma), t);
      const double up = phi_x3(ModelParams(1.0 + eps, gamma), t);
      const double dn = phi_x3(ModelParams(1.0 - eps, gamma), t);
      const double bound = 10.0 * eps * (1.0 + t * t);
      CHECK(std::abs(up - mid) <= bound);
      CHECK(std::abs(dn - mid) <= bound);
    }
  }
}

TEST_CASE("kernels stay finite deep in the overdamped regime") {
  // Large gamma*t used to underflow/overflow the naive cosh form.
  const DampedBasisPair k = damped_kernels(ModelParams(0.3, 2000.0), 5.0);
  CHECK(std::isfinite(k.c));
  CHECK(std::isfinite(k.s));
  CHECK(k.c >= 0.0);
  CHECK(k.c <= 1.0);
}

TEST_CASE("gamma must be nonnegative") {
  CHECK_THROWS_AS(ModelParams(1.0, -0.1), std::invalid_argument);
}
