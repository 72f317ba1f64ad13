#pragma once

// Neural-inspired encoding of strain: a causal temporal filter shaped like a
// spike-triggered average, a joint normalization, and a sigmoidal activation
// that yields a probability of firing per sensor and time step.

#include "wingsense/plate.hpp"
#include "wingsense/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace wingsense {

struct StaParams {
  double frequency = 2.0 * kPi / 25.0;  // rad/ms
  double delay = 5.0;                   // ms
  double width = 4.0;                   // ms
  int window = 40;                      // samples (1 ms each)

  void validate() const;
};

struct NlaParams {
  double slope = 20.0;
  double half_max = 0.2;

  void validate() const;
};

enum class StaKind { Kernel, Identity };
enum class Activation { Sigmoid, Linear };

struct EncoderSpec {
  StaKind sta_kind = StaKind::Kernel;
  StaParams sta;
  Activation activation = Activation::Sigmoid;
  NlaParams nla;

  void validate() const;
};

/// STA filter sampled at tau = -(window-1) .. 0 ms; element j holds tau = j - (window-1).
std::vector<double> sta_kernel(const StaParams& p);

/// Impulse at tau = -round(delay): the narrow-width limit of sta_kernel.
std::vector<double> identity_kernel(const StaParams& p);

std::vector<double> encoder_kernel(const EncoderSpec& spec);

/// Causal projection xi(t) = sum_tau eps(t + tau) * STA(tau) over the window.
/// Output sample k corresponds to input sample k + window - 1.
std::vector<double> project(std::span<const double> series, std::span<const double> kernel);

/// Row-wise projection of a sensors x time matrix.
RowMatrix project_rows(const RowMatrix& strain, std::span<const double> kernel, bool use_openmp = true);

/// max |xi| over every matrix; throws NumericalError when all entries are zero.
double normalization_constant(std::span<const RowMatrix* const> raw, bool use_openmp = true);

/// Divides in place by the joint constant and returns it.
double normalize(std::span<RowMatrix* const> raw, bool use_openmp = true);

double nla(double xi, const NlaParams& p);

/// Affine activation (1 + xi) / 2, clipped to [0, 1].
double linear_activation(double xi);

struct EncodedField {
  SensorGrid grid;
  RowMatrix values;  // P_fire, sensors x time
  double sample_rate_hz = 1000.0;
  double t0_ms = 0.0;
  double discard_ms = 0.0;
  std::string drive_hash;
  EncoderSpec encoder;
  double c_xi = 1.0;

  long samples() const { return values.cols(); }
};

/// Project, normalize by this field's own constant, activate.
EncodedField encode_field(const StrainField& strain, const EncoderSpec& spec, bool use_openmp = true);

struct EncodedPair {
  EncodedField flap;
  EncodedField rotation;
};

/// Encodes two conditions with one normalization constant shared by both.
EncodedPair encode_conditions(const StrainField& flap, const StrainField& rotation, const EncoderSpec& spec,
                              bool use_openmp = true);

}  // namespace wingsense
