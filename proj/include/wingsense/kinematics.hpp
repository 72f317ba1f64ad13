#pragma once

// Prescribed wing kinematics: steady flapping, steady body rotation,
// band-limited velocity disturbances and the startup ramp.
//
// Time arguments are in milliseconds throughout; angular rates are returned
// in rad/s and angular accelerations in rad/s^2.

#include "wingsense/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wingsense {

struct FlapProfile {
  double amplitude = kPi / 6.0;  // rad
  double base_frequency = 25.0;  // Hz
  double harmonic_ratio = 0.2;   // weight of the 2f harmonic

  void validate() const;
};

struct RotationSpec {
  double steady_rate = 0.0;  // rad/s

  void validate() const;
};

struct DisturbanceSpec {
  double target_std = 0.0;  // rad/s
  int n_components = 15;
  double freq_low = 1.0;   // Hz
  double freq_high = 10.0;  // Hz
  std::uint64_t seed = 0;

  void validate() const;
};

struct DisturbanceComponent {
  /// Half angular frequency in rad/ms; the component is sin(2*frequency*t + phase).
  double frequency = 0.0;
  double phase = 0.0;  // [0, 2pi)

  double hertz() const { return frequency * 1e3 / kPi; }
};

struct DisturbanceRealization {
  std::vector<DisturbanceComponent> components;
  double per_component_amplitude = 0.0;  // rad/s
};

double flap_angle(const FlapProfile& profile, double t_ms);
double flap_velocity(const FlapProfile& profile, double t_ms);
double flap_acceleration(const FlapProfile& profile, double t_ms);

/// Draws frequencies uniformly in [freq_low, freq_high] Hz and phases in
/// [0, 2pi). The per-component amplitude is target_std / sqrt(n/2), which makes
/// the long-horizon standard deviation of the sum equal target_std.
DisturbanceRealization realize_disturbance(const DisturbanceSpec& spec);

double eval_disturbance(const DisturbanceRealization& real, double t_ms);
/// Time derivative of eval_disturbance, rad/s^2.
double eval_disturbance_rate(const DisturbanceRealization& real, double t_ms);

/// Cubic startup ramp u^3 / (10 + u^3) with u = 2e-3 * pi * f * t.
double ramp(double t_ms, double f_hz);
/// d(ramp)/dt in 1/s.
double ramp_rate(double t_ms, double f_hz);

struct DriveSample {
  double flap_rate = 0.0;      // phi_T dot, rad/s
  double rotation_rate = 0.0;  // theta_T dot, rad/s
  double flap_angle = 0.0;     // phi_T, rad
  double flap_accel = 0.0;     // phi_T ddot, rad/s^2
};

/// Complete prescribed drive. The flap angle is the trapezoidal integral of
/// the ramped flap rate on a fixed 0.1 ms grid, tabulated up to `horizon_ms`
/// at construction and extended on demand past it.
class KinematicDrive {
 public:
  KinematicDrive(FlapProfile flap, RotationSpec rotation, DisturbanceRealization flap_disturbance,
                 DisturbanceRealization rotation_disturbance, double horizon_ms = 4000.0);

  const FlapProfile& flap() const { return flap_; }
  const RotationSpec& rotation() const { return rotation_; }
  const DisturbanceRealization& flap_disturbance() const { return flap_dist_; }
  const DisturbanceRealization& rotation_disturbance() const { return rot_dist_; }
  double ramp_frequency() const { return flap_.base_frequency; }

  double flap_rate(double t_ms) const;
  double rotation_rate(double t_ms) const;
  double flap_accel(double t_ms) const;
  double flap_angle(double t_ms) const;

  /// Stable textual digest of every parameter that determines the drive.
  std::string hash() const;

 private:
  static constexpr double kStepMs = 0.1;

  FlapProfile flap_;
  RotationSpec rotation_;
  DisturbanceRealization flap_dist_;
  DisturbanceRealization rot_dist_;
  std::vector<double> angle_table_;  // phi_T at k * kStepMs
};

DriveSample total_velocities(const KinematicDrive& drive, double t_ms);

}  // namespace wingsense
