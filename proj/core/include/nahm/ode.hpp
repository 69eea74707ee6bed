#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace nahm {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: choose from the interval
  double max_step = 0.0;      // 0: no cap
  int max_steps = 2000000;
};

/// Adaptive Dormand-Prince 5(4).  State is any Eigen-like type with +, scalar
/// multiplication and norm(); integrates from t0 to t1 (either direction) and
/// reports each accepted step.  The callback may be empty.
template <class State, class Rhs>
State integrate_dopri5(const Rhs& rhs, State y, double t0, double t1, const OdeOptions& opt,
                       const std::function<void(double, const State&, double)>& on_step = {}) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                      b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (t0 == t1) return y;
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  double h = opt.initial_step != 0.0 ? std::abs(opt.initial_step) : std::abs(t1 - t0) / 100.0;
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  double t = t0;
  State k1 = rhs(t, y);
  int steps = 0;

  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps) throw std::runtime_error("ODE step limit exceeded");
    h = std::min(h, std::abs(t1 - t));
    const double hs = dir * h;

    State k2 = rhs(t + c2 * hs, y + hs * (a21 * k1));
    State k3 = rhs(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    State k4 = rhs(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    State k5 = rhs(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    State k6 = rhs(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    State ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State k7 = rhs(t + hs, ynew);
    State errv = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale = opt.atol + opt.rtol * std::max(y.norm(), ynew.norm());
    const double err = errv.norm() / scale;
    if (err <= 1.0) {
      t += hs;
      y = ynew;
      k1 = k7;  // FSAL
      if (on_step) on_step(t, y, err * scale);
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    fac = std::clamp(fac, 0.2, 5.0);
    h *= fac;
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    if (h < 1e-14 * std::abs(t1 - t0)) throw std::runtime_error("ODE step size underflow");
  }
  return y;
}

}  // namespace nahm
