#include "wingsense/encode.hpp"

#include "wingsense/errors.hpp"
#include "wingsense/kernels.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace wingsense {

void StaParams::validate() const {
  if (!(width > 0.0)) throw ConfigError("STA width must be > 0");
  if (window < 1) throw ConfigError("STA window must be >= 1");
  if (!std::isfinite(frequency) || !std::isfinite(delay)) throw ConfigError("STA parameters must be finite");
}

void NlaParams::validate() const {
  if (!std::isfinite(slope) || !std::isfinite(half_max)) throw ConfigError("NLA parameters must be finite");
}

void EncoderSpec::validate() const {
  sta.validate();
  nla.validate();
  if (sta_kind == StaKind::Identity) {
    const long lag = std::lround(sta.delay);
    if (lag < 0 || lag >= sta.window) throw ConfigError("identity STA delay must fall inside the window");
  }
}

std::vector<double> sta_kernel(const StaParams& p) {
  p.validate();
  std::vector<double> k(static_cast<std::size_t>(p.window));
  for (int j = 0; j < p.window; ++j) {
    const double s = static_cast<double>(j - (p.window - 1)) + p.delay;
    k[static_cast<std::size_t>(j)] = std::cos(p.frequency * s) * std::exp(-(s * s) / (p.width * p.width));
  }
  return k;
}

std::vector<double> identity_kernel(const StaParams& p) {
  p.validate();
  const long lag = std::lround(p.delay);
  if (lag < 0 || lag >= p.window) throw std::invalid_argument("identity_kernel: delay outside the window");
  std::vector<double> k(static_cast<std::size_t>(p.window), 0.0);
  k[static_cast<std::size_t>(p.window - 1 - lag)] = 1.0;
  return k;
}

std::vector<double> encoder_kernel(const EncoderSpec& spec) {
  return spec.sta_kind == StaKind::Identity ? identity_kernel(spec.sta) : sta_kernel(spec.sta);
}

std::vector<double> project(std::span<const double> series, std::span<const double> kernel) {
  if (kernel.empty() || series.size() <= kernel.size())
    throw std::invalid_argument("project: series must be longer than the window");
  RowMatrix in = Eigen::Map<const RowMatrix>(series.data(), 1, static_cast<Eigen::Index>(series.size()));
  RowMatrix out;
  kernels::serial::correlate_rows(in, kernel, out);
  return {out.data(), out.data() + out.size()};
}

RowMatrix project_rows(const RowMatrix& strain, std::span<const double> kernel, bool use_openmp) {
  if (kernel.empty() || strain.cols() <= static_cast<Eigen::Index>(kernel.size()))
    throw std::invalid_argument("project: series must be longer than the window");
  RowMatrix out;
  if (use_openmp)
    kernels::parallel::correlate_rows(strain, kernel, out);
  else
    kernels::serial::correlate_rows(strain, kernel, out);
  return out;
}

double normalization_constant(std::span<const RowMatrix* const> raw, bool use_openmp) {
  double c = 0.0;
  for (const RowMatrix* m : raw) c = std::max(c, use_openmp ? kernels::parallel::abs_max(*m) : kernels::serial::abs_max(*m));
  if (!(c > 0.0)) throw NumericalError("normalize", "all projections are zero (degenerate input)");
  if (!std::isfinite(c)) throw NumericalError("normalize", "non-finite projection");
  return c;
}

double normalize(std::span<RowMatrix* const> raw, bool use_openmp) {
  std::vector<const RowMatrix*> view(raw.begin(), raw.end());
  const double c = normalization_constant(view, use_openmp);
  for (RowMatrix* m : raw) *m /= c;
  return c;
}

double nla(double xi, const NlaParams& p) { return 1.0 / (1.0 + std::exp(-p.slope * (xi - p.half_max))); }

double linear_activation(double xi) { return std::clamp(0.5 * (1.0 + xi), 0.0, 1.0); }

namespace {

EncodedField make_encoded(const StrainField& src, RowMatrix values, const EncoderSpec& spec, double c_xi) {
  EncodedField e;
  e.grid = src.grid;
  e.values = std::move(values);
  e.sample_rate_hz = src.sample_rate_hz;
  e.t0_ms = src.t0_ms + (spec.sta.window - 1) * 1000.0 / src.sample_rate_hz;
  e.discard_ms = src.discard_ms;
  e.drive_hash = src.drive_hash;
  e.encoder = spec;
  e.c_xi = c_xi;
  return e;
}

void activate(RowMatrix& xi, const EncoderSpec& spec, double c_xi, bool use_openmp) {
  if (spec.activation == Activation::Linear) {
    use_openmp ? kernels::parallel::affine_clip_inplace(xi, c_xi) : kernels::serial::affine_clip_inplace(xi, c_xi);
  } else {
    use_openmp ? kernels::parallel::sigmoid_inplace(xi, c_xi, spec.nla.slope, spec.nla.half_max)
               : kernels::serial::sigmoid_inplace(xi, c_xi, spec.nla.slope, spec.nla.half_max);
  }
}

// An all-zero projection keeps c_xi = 1 so that the encoding reduces to the
// activation evaluated at zero.
double joint_constant(std::span<const RowMatrix* const> raw, bool use_openmp) {
  double c = 0.0;
  for (const RowMatrix* m : raw) c = std::max(c, use_openmp ? kernels::parallel::abs_max(*m) : kernels::serial::abs_max(*m));
  if (!std::isfinite(c)) throw NumericalError("encode", "non-finite projection");
  return c > 0.0 ? c : 1.0;
}

}  // namespace

EncodedField encode_field(const StrainField& strain, const EncoderSpec& spec, bool use_openmp) {
  spec.validate();
  const auto kernel = encoder_kernel(spec);
  RowMatrix xi = project_rows(strain.values, kernel, use_openmp);
  const std::array<const RowMatrix*, 1> view{&xi};
  const double c = joint_constant(view, use_openmp);
  activate(xi, spec, c, use_openmp);
  return make_encoded(strain, std::move(xi), spec, c);
}

EncodedPair encode_conditions(const StrainField& flap, const StrainField& rotation, const EncoderSpec& spec,
                              bool use_openmp) {
  spec.validate();
  if (!(flap.grid == rotation.grid)) throw std::invalid_argument("encode_conditions: grid mismatch");
  const auto kernel = encoder_kernel(spec);
  RowMatrix xi_f = project_rows(flap.values, kernel, use_openmp);
  RowMatrix xi_r = project_rows(rotation.values, kernel, use_openmp);
  const std::array<const RowMatrix*, 2> view{&xi_f, &xi_r};
  const double c = joint_constant(view, use_openmp);
  activate(xi_f, spec, c, use_openmp);
  activate(xi_r, spec, c, use_openmp);
  return {make_encoded(flap, std::move(xi_f), spec, c), make_encoded(rotation, std::move(xi_r), spec, c)};
}

}  // namespace wingsense
