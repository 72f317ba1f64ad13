#include "wingsense/kinematics.hpp"

#include "wingsense/errors.hpp"
#include "wingsense/random.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wingsense {

namespace {

constexpr double kMsToS = 1e-3;

// Angular frequency of the flap fundamental in rad/ms.
double flap_omega_ms(const FlapProfile& p) { return 2e-3 * kPi * p.base_frequency; }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void append_realization(std::string& out, const DisturbanceRealization& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "A=%.17g;", r.per_component_amplitude);
  out += buf;
  for (const auto& c : r.components) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g;", c.frequency, c.phase);
    out += buf;
  }
}

}  // namespace

void FlapProfile::validate() const {
  if (!(amplitude >= 0.0)) throw ConfigError("flap amplitude must be >= 0");
  if (!(base_frequency > 0.0)) throw ConfigError("flap base_frequency must be > 0");
  if (!(harmonic_ratio >= 0.0 && harmonic_ratio < 1.0))
    throw ConfigError("flap harmonic_ratio must lie in [0, 1)");
}

void RotationSpec::validate() const {
  if (!(steady_rate >= 0.0)) throw ConfigError("rotation steady_rate must be >= 0");
}

void DisturbanceSpec::validate() const {
  if (!(target_std >= 0.0)) throw ConfigError("disturbance target_std must be >= 0");
  if (n_components < 1) throw ConfigError("disturbance n_components must be >= 1");
  if (!(freq_low > 0.0 && freq_low < freq_high))
    throw ConfigError("disturbance band must satisfy 0 < freq_low < freq_high");
}

double flap_angle(const FlapProfile& p, double t_ms) {
  const double w = flap_omega_ms(p);
  return p.amplitude * (std::sin(w * t_ms) + p.harmonic_ratio * std::sin(2.0 * w * t_ms));
}

double flap_velocity(const FlapProfile& p, double t_ms) {
  const double w = flap_omega_ms(p);
  const double per_ms = p.amplitude * w * (std::cos(w * t_ms) + 2.0 * p.harmonic_ratio * std::cos(2.0 * w * t_ms));
  return per_ms / kMsToS;
}

double flap_acceleration(const FlapProfile& p, double t_ms) {
  const double w = flap_omega_ms(p);
  const double per_ms2 =
      -p.amplitude * w * w * (std::sin(w * t_ms) + 4.0 * p.harmonic_ratio * std::sin(2.0 * w * t_ms));
  return per_ms2 / (kMsToS * kMsToS);
}

DisturbanceRealization realize_disturbance(const DisturbanceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  DisturbanceRealization out;
  out.components.reserve(static_cast<std::size_t>(spec.n_components));
  for (int i = 0; i < spec.n_components; ++i) {
    const double hz = rng.uniform(spec.freq_low, spec.freq_high);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    // 2 * rho * t_ms == 2 pi hz t_s
    out.components.push_back({kPi * hz * 1e-3, phase});
  }
  out.per_component_amplitude = spec.target_std / std::sqrt(0.5 * spec.n_components);
  return out;
}

double eval_disturbance(const DisturbanceRealization& real, double t_ms) {
  if (real.per_component_amplitude == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& c : real.components) sum += std::sin(2.0 * c.frequency * t_ms + c.phase);
  return real.per_component_amplitude * sum;
}

double eval_disturbance_rate(const DisturbanceRealization& real, double t_ms) {
  if (real.per_component_amplitude == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& c : real.components)
    sum += 2.0 * c.frequency * std::cos(2.0 * c.frequency * t_ms + c.phase);
  return real.per_component_amplitude * sum / kMsToS;
}

double ramp(double t_ms, double f_hz) {
  const double u = 2e-3 * kPi * f_hz * t_ms;
  const double u3 = u * u * u;
  return u3 / (10.0 + u3);
}

double ramp_rate(double t_ms, double f_hz) {
  const double du = 2e-3 * kPi * f_hz;
  const double u = du * t_ms;
  const double u3 = u * u * u;
  const double den = 10.0 + u3;
  return 30.0 * u * u * du / (den * den) / kMsToS;
}

KinematicDrive::KinematicDrive(FlapProfile flap, RotationSpec rotation, DisturbanceRealization flap_disturbance,
                               DisturbanceRealization rotation_disturbance, double horizon_ms)
    : flap_(flap),
      rotation_(rotation),
      flap_dist_(std::move(flap_disturbance)),
      rot_dist_(std::move(rotation_disturbance)) {
  flap_.validate();
  rotation_.validate();
  if (!(horizon_ms >= 0.0)) throw ConfigError("drive horizon must be >= 0");
  const auto n = static_cast<std::size_t>(std::ceil(horizon_ms / kStepMs)) + 1;
  angle_table_.resize(n);
  angle_table_[0] = 0.0;
  double prev = flap_rate(0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double cur = flap_rate(static_cast<double>(k) * kStepMs);
    angle_table_[k] = angle_table_[k - 1] + 0.5 * (prev + cur) * kStepMs * kMsToS;
    prev = cur;
  }
}

double KinematicDrive::flap_rate(double t_ms) const {
  const double steady = flap_velocity(flap_, t_ms) + eval_disturbance(flap_dist_, t_ms);
  return ramp(t_ms, ramp_frequency()) * steady;
}

double KinematicDrive::rotation_rate(double t_ms) const {
  const double steady = rotation_.steady_rate + eval_disturbance(rot_dist_, t_ms);
  return ramp(t_ms, ramp_frequency()) * steady;
}

double KinematicDrive::flap_accel(double t_ms) const {
  const double f = ramp_frequency();
  const double rate = flap_velocity(flap_, t_ms) + eval_disturbance(flap_dist_, t_ms);
  const double accel = flap_acceleration(flap_, t_ms) + eval_disturbance_rate(flap_dist_, t_ms);
  return ramp_rate(t_ms, f) * rate + ramp(t_ms, f) * accel;
}

double KinematicDrive::flap_angle(double t_ms) const {
  if (t_ms <= 0.0) return 0.0;
  auto k = static_cast<std::size_t>(std::floor(t_ms / kStepMs));
  double angle;
  if (k < angle_table_.size()) {
    angle = angle_table_[k];
  } else {
    // Continue the trapezoid rule past the tabulated horizon.
    k = angle_table_.size() - 1;
    angle = angle_table_.back();
    double prev = flap_rate(static_cast<double>(k) * kStepMs);
    while (static_cast<double>(k + 1) * kStepMs <= t_ms) {
      ++k;
      const double cur = flap_rate(static_cast<double>(k) * kStepMs);
      angle += 0.5 * (prev + cur) * kStepMs * kMsToS;
      prev = cur;
    }
  }
  const double tk = static_cast<double>(k) * kStepMs;
  const double dt = t_ms - tk;
  if (dt > 0.0) angle += 0.5 * (flap_rate(tk) + flap_rate(t_ms)) * dt * kMsToS;
  return angle;
}

std::string KinematicDrive::hash() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "flap=%.17g,%.17g,%.17g;rot=%.17g;", flap_.amplitude, flap_.base_frequency,
                flap_.harmonic_ratio, rotation_.steady_rate);
  std::string canon = buf;
  canon += "fd:";
  append_realization(canon, flap_dist_);
  canon += "rd:";
  append_realization(canon, rot_dist_);
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
  return buf;
}

DriveSample total_velocities(const KinematicDrive& drive, double t_ms) {
  if (!(t_ms >= 0.0)) throw std::invalid_argument("total_velocities: t must be >= 0");
  return {drive.flap_rate(t_ms), drive.rotation_rate(t_ms), drive.flap_angle(t_ms), drive.flap_accel(t_ms)};
}

}  // namespace wingsense
