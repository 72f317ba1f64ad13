#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the standard 4th-order
// continuous extension, used to resample the solution on a fixed grid.

#include "wingsense/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace wingsense {

struct OdeOptions {
  double rtol = 1e-6;
  double atol = 1e-9;
  double initial_step = 1e-2;
  double min_step = 1e-12;
  long max_steps = 50'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

/// Integrates y' = f(t, y) from t0 and reports y at every time in `sample_times`
/// (ascending, all >= t0) through `emit(index, t, y)`. Throws NumericalError on
/// step-size underflow or a non-finite state, naming the time reached.
template <int N, class Rhs, class Emit>
OdeStats integrate_dopri5(Rhs&& f, double t0, const Eigen::Matrix<double, N, 1>& y0,
                          const std::vector<double>& sample_times, Emit&& emit, const OdeOptions& opt = {}) {
  using State = Eigen::Matrix<double, N, 1>;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  auto fail = [](double t, const char* why) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s at t = %.6g", why, t);
    throw NumericalError("integrate", buf);
  };

  OdeStats stats;
  std::size_t next_sample = 0;
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
    emit(next_sample, sample_times[next_sample], y0);
    ++next_sample;
  }
  if (next_sample == sample_times.size()) return stats;
  const double t_end = sample_times.back();

  double t = t0;
  State y = y0;
  State k1 = f(t, y);
  ++stats.rhs_evals;
  double h = std::min(opt.initial_step, t_end - t);

  State k2, k3, k4, k5, k6, k7, y1, err;
  while (next_sample < sample_times.size()) {
    if (stats.accepted + stats.rejected >= opt.max_steps) fail(t, "step budget exhausted");
    if (h < opt.min_step) fail(t, "step size underflow");
    h = std::min(h, t_end - t);

    k2 = f(t + c2 * h, y + h * (a21 * k1));
    k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    k7 = f(t + h, y1);
    stats.rhs_evals += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double acc = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      const double r = err[i] / sc;
      acc += r * r;
    }
    const double err_norm = std::sqrt(acc / static_cast<double>(y.size()));
    if (!std::isfinite(err_norm) || !y1.allFinite()) {
      if (h <= opt.min_step * 2) fail(t, "non-finite state");
      h *= 0.25;
      ++stats.rejected;
      continue;
    }

    if (err_norm <= 1.0) {
      const double t1 = t + h;
      if (next_sample < sample_times.size() && sample_times[next_sample] <= t1) {
        const State r2 = y1 - y;
        const State r3 = h * k1 - r2;
        const State r4 = r2 - h * k7 - r3;
        const State r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t1) {
          const double ts = sample_times[next_sample];
          const double th = (ts - t) / h;
          const double th1 = 1.0 - th;
          const State ys = y + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
          emit(next_sample, ts, ys);
          ++next_sample;
        }
      }
      t = t1;
      y = y1;
      k1 = k7;
      ++stats.accepted;
      const double fac = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      ++stats.rejected;
      h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
    }
  }
  return stats;
}

}  // namespace wingsense
