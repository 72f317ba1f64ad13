#include "doctest.h"

#include "wingsense/kinematics.hpp"
#include "wingsense/spectrum.hpp"

#include <cmath>
#include <vector>

using namespace wingsense;

namespace {

// Direct transcription of the flap profile, kept separate from the library.
double flap_oracle(double t_ms) {
  const double w = 2e-3 * kPi * 25.0;
  return kPi / 6.0 * (std::sin(w * t_ms) + 0.2 * std::sin(2 * w * t_ms));
}

std::vector<double> sample(const DisturbanceRealization& r, double t_end_ms, double dt_ms) {
  std::vector<double> v;
  for (double t = 0.0; t < t_end_ms; t += dt_ms) v.push_back(eval_disturbance(r, t));
  return v;
}

double sample_std(const std::vector<double>& v) {
  double m = 0, s = 0;
  for (double x : v) m += x;
  m /= v.size();
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

}  // namespace

TEST_CASE("flap angle matches direct evaluation") {
  const FlapProfile p;
  CHECK(flap_angle(p, 0.0) == doctest::Approx(0.0));
  CHECK(flap_angle(p, 10.0) == doctest::Approx(kPi / 6).epsilon(1e-12));
  CHECK(flap_angle(p, 5.0) == doctest::Approx(0.4750).epsilon(1e-4));
  for (double t : {0.3, 7.7, 123.4, 3999.0}) CHECK(flap_angle(p, t) == doctest::Approx(flap_oracle(t)).epsilon(1e-12));
}

TEST_CASE("flap velocity is the derivative of the flap angle") {
  const FlapProfile p;
  const double w = 2 * kPi * 25.0;  // rad/s
  // d/dt of A(sin wt + r sin 2wt) at t = 10 ms: A w (cos(pi/2) + 2 r cos(pi)).
  CHECK(flap_velocity(p, 10.0) == doctest::Approx(kPi / 6 * w * (0.0 - 0.4)).epsilon(1e-10));
  CHECK(flap_velocity(p, 0.0) == doctest::Approx(kPi / 6 * w * 1.4).epsilon(1e-10));
  CHECK(flap_velocity(p, 0.0) == doctest::Approx(115.1).epsilon(1e-3));
  const double h = 1e-4;  // ms
  for (double t : {1.0, 3.3, 17.0, 250.5}) {
    const double fd = (flap_angle(p, t + h) - flap_angle(p, t - h)) / (2 * h * 1e-3);
    CHECK(flap_velocity(p, t) == doctest::Approx(fd).epsilon(1e-6));
    const double fa = (flap_velocity(p, t + h) - flap_velocity(p, t - h)) / (2 * h * 1e-3);
    CHECK(flap_acceleration(p, t) == doctest::Approx(fa).epsilon(1e-6));
  }
}

TEST_CASE("ramp values, monotonicity and bounds") {
  CHECK(ramp(0.0, 25.0) == 0.0);
  CHECK(ramp(13.71, 25.0) == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(1.0 - ramp(200.0, 25.0) < 1e-3);
  double prev = -1.0;
  for (double t = 0.0; t < 400.0; t += 0.37) {
    const double r = ramp(t, 25.0);
    CHECK(r >= prev);
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
    prev = r;
  }
  const double h = 1e-4;
  for (double t : {2.0, 13.7, 40.0}) {
    const double fd = (ramp(t + h, 25.0) - ramp(t - h, 25.0)) / (2 * h * 1e-3);
    CHECK(ramp_rate(t, 25.0) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("disturbance realization is deterministic and well formed") {
  DisturbanceSpec spec{3.1, 15, 1.0, 10.0, 42};
  const auto a = realize_disturbance(spec), b = realize_disturbance(spec);
  REQUIRE(a.components.size() == 15);
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    CHECK(a.components[i].frequency == b.components[i].frequency);
    CHECK(a.components[i].phase == b.components[i].phase);
    CHECK(a.components[i].phase >= 0.0);
    CHECK(a.components[i].phase < 2 * kPi);
    CHECK(a.components[i].hertz() >= 1.0);
    CHECK(a.components[i].hertz() <= 10.0);
  }
  CHECK(a.per_component_amplitude == doctest::Approx(3.1 / std::sqrt(7.5)));
  spec.seed = 43;
  CHECK(realize_disturbance(spec).components[0].phase != a.components[0].phase);
}

TEST_CASE("zero-amplitude disturbance is identically zero") {
  const auto r = realize_disturbance(DisturbanceSpec{0.0, 15, 1.0, 10.0, 1});
  for (double t = 0; t < 1000; t += 13.1) CHECK(eval_disturbance(r, t) == 0.0);
}

TEST_CASE("single component is bounded and linear in amplitude") {
  auto r = realize_disturbance(DisturbanceSpec{1.0, 1, 1.0, 10.0, 5});
  const double amp = r.per_component_amplitude;
  for (double t = 0; t < 2000; t += 0.7) CHECK(std::abs(eval_disturbance(r, t)) <= amp + 1e-12);
  const double v = eval_disturbance(r, 123.0);
  r.per_component_amplitude *= 2.0;
  CHECK(eval_disturbance(r, 123.0) == doctest::Approx(2.0 * v));
}

TEST_CASE("disturbance std matches the target and scales linearly") {
  // sample std over 100 s, averaged over seeds
  double ratio_sum = 0.0;
  const int n_seeds = 8;
  for (int s = 0; s < n_seeds; ++s) {
    const auto r = realize_disturbance(DisturbanceSpec{3.1, 15, 1.0, 10.0, static_cast<uint64_t>(100 + s)});
    ratio_sum += sample_std(sample(r, 1e5, 1.0)) / 3.1;
  }
  CHECK(ratio_sum / n_seeds == doctest::Approx(1.0).epsilon(0.05));

  const auto r1 = realize_disturbance(DisturbanceSpec{1.0, 15, 1.0, 10.0, 9});
  const auto r10 = realize_disturbance(DisturbanceSpec{10.0, 15, 1.0, 10.0, 9});
  const double s1 = sample_std(sample(r1, 1e5, 1.0)), s10 = sample_std(sample(r10, 1e5, 1.0));
  CHECK(s10 / s1 / 10.0 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("disturbance power lies inside the configured band") {
  const auto r = realize_disturbance(DisturbanceSpec{1.0, 15, 1.0, 10.0, 77});
  const auto v = sample(r, 65536.0, 1.0);
  const PowerSpectrum ps = power_spectrum(v, 1000.0);
  double total = 0, in_band = 0;
  for (std::size_t k = 1; k < ps.power.size(); ++k) {
    total += ps.power[k];
    // 0.25 Hz margin absorbs rectangular-window leakage
    if (ps.frequency_hz[k] >= 0.75 && ps.frequency_hz[k] <= 10.25)
      in_band += ps.power[k];
  }
  CHECK(in_band / total >= 0.99);
}

TEST_CASE("disturbance rate is the time derivative") {
  const auto r = realize_disturbance(DisturbanceSpec{2.0, 15, 1.0, 10.0, 3});
  const double h = 1e-3;
  for (double t : {10.0, 555.5}) {
    const double fd = (eval_disturbance(r, t + h) - eval_disturbance(r, t - h)) / (2 * h * 1e-3);
    CHECK(eval_disturbance_rate(r, t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("total velocities: startup, asymptote and steady rotation") {
  const KinematicDrive d(FlapProfile{}, RotationSpec{10.0}, {}, {});
  const DriveSample s0 = total_velocities(d, 0.0);
  CHECK(s0.flap_rate == 0.0);
  CHECK(s0.rotation_rate == 0.0);
  CHECK(s0.flap_angle == 0.0);
  for (double t : {1500.0, 2222.2, 3999.0}) {
    const DriveSample s = total_velocities(d, t);
    CHECK(std::abs(s.flap_rate - flap_velocity(FlapProfile{}, t)) <= 1e-3 * 115.1);
    CHECK(s.rotation_rate == doctest::Approx(10.0).epsilon(1e-3));
  }
  CHECK_THROWS_AS(total_velocities(d, -1.0), std::invalid_argument);
}

TEST_CASE("flap angle is the trapezoidal integral of the ramped rate") {
  const KinematicDrive d(FlapProfile{}, RotationSpec{0.0}, {}, {}, 500.0);
  // Independent fine-step Simpson integral of the ramped rate.
  auto rate = [&](double t) { return d.flap_rate(t); };
  const double t_end = 321.37;
  const int n = 64000;
  const double h = t_end / n;
  double acc = rate(0) + rate(t_end);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * rate(k * h);
  const double simpson = acc * h / 3.0 * 1e-3;
  CHECK(d.flap_angle(t_end) == doctest::Approx(simpson).epsilon(1e-4));
  // Past the tabulated horizon the angle keeps integrating.
  CHECK(std::isfinite(d.flap_angle(900.0)));
  const double offset = d.flap_angle(500.0) - flap_angle(FlapProfile{}, 500.0);
  CHECK(std::abs(d.flap_angle(900.0) - flap_angle(FlapProfile{}, 900.0) - offset) < 1e-4);
}

TEST_CASE("Coriolis product peaks at twice the flap frequency") {
  const FlapProfile p;
  std::vector<double> x;
  for (int k = 0; k < 4000; ++k) {
    const double t = k;
    x.push_back(2.0 * std::sin(flap_angle(p, t)) * flap_velocity(p, t) * 10.0);
  }
  const PowerSpectrum ps = power_spectrum(x, 1000.0);
  CHECK(std::abs(dominant_frequency(ps, 1.0) - 50.0) <= ps.bin_width_hz);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS(FlapProfile{-1.0, 25.0, 0.2}.validate());
  CHECK_NOTHROW(FlapProfile{0.0, 25.0, 0.2}.validate());
  CHECK_THROWS(FlapProfile{0.5, 25.0, 1.0}.validate());
  CHECK_THROWS(DisturbanceSpec{-1.0, 15, 1.0, 10.0, 0}.validate());
  CHECK_THROWS(DisturbanceSpec{1.0, 0, 1.0, 10.0, 0}.validate());
  CHECK_THROWS(DisturbanceSpec{1.0, 15, 5.0, 2.0, 0}.validate());
}
