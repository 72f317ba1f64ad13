#include "wingsense/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wingsense::kernels {

namespace {

void check_shapes(const RowMatrix& in, std::span<const double> kernel, RowMatrix& out) {
  const auto window = static_cast<Eigen::Index>(kernel.size());
  if (window < 1 || in.cols() < window) throw std::invalid_argument("correlate_rows: series shorter than window");
  out.resize(in.rows(), in.cols() - window + 1);
}

inline void correlate_row(const double* src, Eigen::Index n_out, std::span<const double> kernel, double* dst) {
  const std::size_t w = kernel.size();
  for (Eigen::Index t = 0; t < n_out; ++t) {
    const double* s = src + t;
    double acc = 0.0;
    for (std::size_t j = 0; j < w; ++j) acc += s[j] * kernel[j];
    dst[t] = acc;
  }
}

inline double logistic(double v, double c_xi, double slope, double half_max) {
  return 1.0 / (1.0 + std::exp(-slope * (v / c_xi - half_max)));
}

inline double affine_clip(double v, double c_xi) { return std::clamp(0.5 * (1.0 + v / c_xi), 0.0, 1.0); }

}  // namespace

namespace serial {

void correlate_rows(const RowMatrix& in, std::span<const double> kernel, RowMatrix& out) {
  check_shapes(in, kernel, out);
  for (Eigen::Index i = 0; i < in.rows(); ++i) correlate_row(in.row(i).data(), out.cols(), kernel, out.row(i).data());
}

double abs_max(const RowMatrix& m) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < m.size(); ++k) best = std::max(best, std::abs(m.data()[k]));
  return best;
}

void sigmoid_inplace(RowMatrix& m, double c_xi, double slope, double half_max) {
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = logistic(m.data()[k], c_xi, slope, half_max);
}

void affine_clip_inplace(RowMatrix& m, double c_xi) {
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = affine_clip(m.data()[k], c_xi);
}

}  // namespace serial

namespace parallel {

void correlate_rows(const RowMatrix& in, std::span<const double> kernel, RowMatrix& out) {
  check_shapes(in, kernel, out);
  const Eigen::Index rows = in.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < rows; ++i) correlate_row(in.row(i).data(), out.cols(), kernel, out.row(i).data());
}

double abs_max(const RowMatrix& m) {
  double best = 0.0;
  const Eigen::Index n = m.size();
  const double* d = m.data();
#pragma omp parallel for reduction(max : best) schedule(static)
  for (Eigen::Index k = 0; k < n; ++k) best = std::max(best, std::abs(d[k]));
  return best;
}

void sigmoid_inplace(RowMatrix& m, double c_xi, double slope, double half_max) {
  const Eigen::Index n = m.size();
  double* d = m.data();
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < n; ++k) d[k] = logistic(d[k], c_xi, slope, half_max);
}

void affine_clip_inplace(RowMatrix& m, double c_xi) {
  const Eigen::Index n = m.size();
  double* d = m.data();
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < n; ++k) d[k] = affine_clip(d[k], c_xi);
}

}  // namespace parallel

}  // namespace wingsense::kernels
