#pragma once

#include <span>
#include <vector>

namespace wingsense {

struct PowerSpectrum {
  std::vector<double> frequency_hz;  // 0 .. Nyquist
  std::vector<double> power;
  double bin_width_hz = 0.0;
};

/// One-sided periodogram of the mean-removed series.
PowerSpectrum power_spectrum(std::span<const double> x, double sample_rate_hz);

/// Frequency of the largest bin above `min_hz`.
double dominant_frequency(const PowerSpectrum& s, double min_hz = 0.0);

/// Accumulates power spectra of several equally long series.
class SpectrumAccumulator {
 public:
  explicit SpectrumAccumulator(double sample_rate_hz) : rate_(sample_rate_hz) {}
  void add(std::span<const double> x);
  const PowerSpectrum& result() const { return sum_; }

 private:
  double rate_;
  PowerSpectrum sum_;
};

}  // namespace wingsense
