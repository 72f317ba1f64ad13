#pragma once

// Data-parallel inner loops of the encoder. Each kernel has a serial
// reference implementation and an OpenMP one; the two must agree exactly
// (rows are independent, so no reduction order changes) and the tests hold
// them to that. The benchmark in bench/ compares their throughput.

#include "wingsense/types.hpp"

#include <span>

namespace wingsense::kernels {

/// The activation kernels take raw projections and the normalization constant
/// c_xi, and compute f(v / c_xi) elementwise.
///
/// out(i, t) = sum_j in(i, t + j) * kernel[j], t = 0 .. cols - window.
/// `kernel` is ordered oldest lag first, so column t of the output is aligned
/// with input column t + window - 1.
namespace serial {
void correlate_rows(const RowMatrix& in, std::span<const double> kernel, RowMatrix& out);
double abs_max(const RowMatrix& m);
void sigmoid_inplace(RowMatrix& m, double c_xi, double slope, double half_max);
void affine_clip_inplace(RowMatrix& m, double c_xi);
}  // namespace serial

namespace parallel {
void correlate_rows(const RowMatrix& in, std::span<const double> kernel, RowMatrix& out);
double abs_max(const RowMatrix& m);
void sigmoid_inplace(RowMatrix& m, double c_xi, double slope, double half_max);
void affine_clip_inplace(RowMatrix& m, double c_xi);
}  // namespace parallel

}  // namespace wingsense::kernels
