#include "wingsense/spectrum.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <stdexcept>

namespace wingsense {

PowerSpectrum power_spectrum(std::span<const double> x, double sample_rate_hz) {
  if (x.size() < 2) throw std::invalid_argument("power_spectrum: need at least two samples");
  if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("power_spectrum: sample rate must be positive");
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = x[i] - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, centred);

  PowerSpectrum out;
  out.bin_width_hz = sample_rate_hz / static_cast<double>(n);
  const std::size_t half = n / 2 + 1;
  out.frequency_hz.resize(half);
  out.power.resize(half);
  for (std::size_t k = 0; k < half; ++k) {
    out.frequency_hz[k] = static_cast<double>(k) * out.bin_width_hz;
    out.power[k] = std::norm(spec[k]) / static_cast<double>(n);
  }
  return out;
}

double dominant_frequency(const PowerSpectrum& s, double min_hz) {
  std::size_t best = s.power.size();
  for (std::size_t k = 0; k < s.power.size(); ++k) {
    if (s.frequency_hz[k] < min_hz) continue;
    if (best == s.power.size() || s.power[k] > s.power[best]) best = k;
  }
  if (best == s.power.size()) throw std::invalid_argument("dominant_frequency: no bins above the cutoff");
  return s.frequency_hz[best];
}

void SpectrumAccumulator::add(std::span<const double> x) {
  const PowerSpectrum p = power_spectrum(x, rate_);
  if (sum_.power.empty()) {
    sum_ = p;
    return;
  }
  if (p.power.size() != sum_.power.size()) throw std::invalid_argument("SpectrumAccumulator: length mismatch");
  for (std::size_t k = 0; k < p.power.size(); ++k) sum_.power[k] += p.power[k];
}

}  // namespace wingsense
