#include "blochid/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blochid {

Mat3 Mat3::identity() {
  Mat3 r;
  r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
  return r;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

BlochVector operator*(const Mat3& a, const BlochVector& v) {
  return {a(0, 0) * v.vx + a(0, 1) * v.vy + a(0, 2) * v.vz,
          a(1, 0) * v.vx + a(1, 1) * v.vy + a(1, 2) * v.vz,
          a(2, 0) * v.vx + a(2, 1) * v.vy + a(2, 2) * v.vz};
}

BlochGenerator build_generator(double omega_x, double omega_y, double omega_z,
                               double gamma) {
  if (!(gamma >= 0.0))
    throw std::invalid_argument("build_generator: gamma must be >= 0");
  BlochGenerator g;
  g.a(0, 0) = -gamma;   g.a(0, 1) = -omega_z; g.a(0, 2) = -omega_y;
  g.a(1, 0) = omega_z;  g.a(1, 1) = -gamma;   g.a(1, 2) = -omega_x;
  g.a(2, 0) = omega_y;  g.a(2, 1) = omega_x;  g.a(2, 2) = 0.0;
  return g;
}

namespace {

double norm_inf(const Mat3& a) {
  double n = 0.0;
  for (int i = 0; i < 3; ++i) {
    double row = std::abs(a(i, 0)) + std::abs(a(i, 1)) + std::abs(a(i, 2));
    n = std::max(n, row);
  }
  return n;
}

// Solves D X = N in place with partial pivoting.
Mat3 solve(Mat3 d, Mat3 n) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(d(r, col)) > std::abs(d(piv, col))) piv = r;
    if (piv != col)
      for (int j = 0; j < 3; ++j) {
        std::swap(d.m[3 * col + j], d.m[3 * piv + j]);
        std::swap(n.m[3 * col + j], n.m[3 * piv + j]);
      }
    const double p = d(col, col);
    if (p == 0.0) throw NumericalError("expm: singular Pade denominator");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = d(r, col) / p;
      if (f == 0.0) continue;
      for (int j = 0; j < 3; ++j) {
        d(r, j) -= f * d(col, j);
        n(r, j) -= f * n(col, j);
      }
    }
  }
  Mat3 x;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = n(i, j) / d(i, i);
  return x;
}

}  // namespace

Mat3 expm(const Mat3& a) {
  const int q = 6;  // Pade order
  const double nrm = norm_inf(a);
  int s = 0;
  if (nrm > 0.5) s = std::max(0, (int)std::ceil(std::log2(nrm / 0.5)));

  Mat3 a2 = a;
  const double scale = std::ldexp(1.0, -s);
  for (double& x : a2.m) x *= scale;

  Mat3 x = a2;
  Mat3 num = Mat3::identity();
  Mat3 den = Mat3::identity();
  double c = 0.5;
  for (int i = 0; i < 9; ++i) {
    num.m[i] += c * x.m[i];
    den.m[i] -= c * x.m[i];
  }
  for (int k = 2; k <= q; ++k) {
    c *= (double)(q - k + 1) / (double)(k * (2 * q - k + 1));
    x = a2 * x;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < 9; ++i) {
      num.m[i] += c * x.m[i];
      den.m[i] += sign * c * x.m[i];
    }
  }

  Mat3 e = solve(den, num);
  for (int k = 0; k < s; ++k) e = e * e;
  return e;
}

namespace {

// Dormand-Prince 5(4) coefficients (node times drop out: the system is
// autonomous).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

BlochVector axpy(const BlochVector& v, double h, const BlochVector& d) {
  return {v.vx + h * d.vx, v.vy + h * d.vy, v.vz + h * d.vz};
}

BlochVector rk45(const Mat3& a, BlochVector v, double t_end) {
  constexpr double rtol = 1e-10, atol = 1e-13;
  double t = 0.0;
  double h = t_end;
  const double h_min = 1e-14 * std::max(t_end, 1.0);

  BlochVector k1 = a * v;
  while (t < t_end) {
    h = std::min(h, t_end - t);
    if (h < h_min)
      throw NumericalError("propagate: step size underflow in RK45");

    const BlochVector k2 = a * axpy(v, h * a21, k1);
    const BlochVector k3 =
        a * axpy(axpy(v, h * a31, k1), h * a32, k2);
    const BlochVector k4 =
        a * axpy(axpy(axpy(v, h * a41, k1), h * a42, k2), h * a43, k3);
    const BlochVector k5 = a * axpy(
        axpy(axpy(axpy(v, h * a51, k1), h * a52, k2), h * a53, k3), h * a54,
        k4);
    const BlochVector k6 = a * axpy(
        axpy(axpy(axpy(axpy(v, h * a61, k1), h * a62, k2), h * a63, k3),
             h * a64, k4),
        h * a65, k5);

    BlochVector vn = v;
    vn = axpy(vn, h * b1, k1);
    vn = axpy(vn, h * b3, k3);
    vn = axpy(vn, h * b4, k4);
    vn = axpy(vn, h * b5, k5);
    vn = axpy(vn, h * b6, k6);
    const BlochVector k7 = a * vn;  // FSAL stage

    const BlochVector err = {
        h * (e1 * k1.vx + e3 * k3.vx + e4 * k4.vx + e5 * k5.vx + e6 * k6.vx +
             e7 * k7.vx),
        h * (e1 * k1.vy + e3 * k3.vy + e4 * k4.vy + e5 * k5.vy + e6 * k6.vy +
             e7 * k7.vy),
        h * (e1 * k1.vz + e3 * k3.vz + e4 * k4.vz + e5 * k5.vz + e6 * k6.vz +
             e7 * k7.vz)};

    double err_norm = 0.0;
    const double sx = atol + rtol * std::max(std::abs(v.vx), std::abs(vn.vx));
    const double sy = atol + rtol * std::max(std::abs(v.vy), std::abs(vn.vy));
    const double sz = atol + rtol * std::max(std::abs(v.vz), std::abs(vn.vz));
    err_norm = std::sqrt(((err.vx / sx) * (err.vx / sx) +
                          (err.vy / sy) * (err.vy / sy) +
                          (err.vz / sz) * (err.vz / sz)) /
                         3.0);

    if (err_norm <= 1.0) {
      t += h;
      v = vn;
      k1 = k7;
    }
    const double factor =
        err_norm > 0.0
            ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0)
            : 5.0;
    h *= factor;
  }
  return v;
}

}  // namespace

BlochVector propagate(const BlochGenerator& gen, const BlochVector& v0,
                      double t, PropagationEngine engine) {
  if (!(t >= 0.0))
    throw std::invalid_argument("propagate: t must be >= 0");
  if (t == 0.0) return v0;
  if (engine == PropagationEngine::AdaptiveRK) return rk45(gen.a, v0, t);
  Mat3 at = gen.a;
  for (double& x : at.m) x *= t;
  return expm(at) * v0;
}

}  // namespace blochid
