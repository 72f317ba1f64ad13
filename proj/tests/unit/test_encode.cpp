#include "doctest.h"

#include "wingsense/encode.hpp"
#include "wingsense/errors.hpp"
#include "wingsense/kernels.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace wingsense;

namespace {

StrainField field_from(const RowMatrix& m) {
  StrainField f;
  f.grid = SensorGrid{1, static_cast<int>(m.rows()), 1e-3};
  f.values = m;
  f.t0_ms = 961.0;
  f.discard_ms = 960.0;
  return f;
}

RowMatrix random_matrix(int rows, int cols, unsigned seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  RowMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n(g);
  return m;
}

}  // namespace

TEST_CASE("sta kernel peaks at tau = -a") {
  const StaParams p;
  const auto k = sta_kernel(p);
  REQUIRE(k.size() == 40);
  CHECK(k[39 - 5] == doctest::Approx(1.0));
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double tau = static_cast<double>(j) - 39.0, s = tau + 5.0;
    CHECK(k[j] == doctest::Approx(std::cos(2 * kPi / 25 * s) * std::exp(-s * s / 16.0)).scale(1.0));
  }
}

TEST_CASE("wide envelope leaves a pure cosine") {
  StaParams p;
  p.width = 1e4;
  const auto k = sta_kernel(p);
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double s = static_cast<double>(j) - 39.0 + p.delay;
    CHECK(std::abs(k[j] - std::cos(p.frequency * s)) < 1e-3);
  }
}

TEST_CASE("narrow envelope tends to the identity kernel") {
  StaParams p;
  p.width = 0.05;
  const auto k = sta_kernel(p), id = identity_kernel(p);
  for (std::size_t j = 0; j < k.size(); ++j) CHECK(std::abs(k[j] - id[j]) < 1e-12);
}

TEST_CASE("default kernel has an oscillatory lobe") {
  const auto k = sta_kernel(StaParams{});
  int changes = 0;
  for (std::size_t j = 1; j < k.size(); ++j)
    if ((k[j] > 0) != (k[j - 1] > 0)) ++changes;
  CHECK(changes >= 2);
}

TEST_CASE("projection of a constant is the kernel sum") {
  const auto k = sta_kernel(StaParams{});
  double sum = 0;
  for (double v : k) sum += v;
  const std::vector<double> eps(100, 0.3);
  const auto xi = project(eps, k);
  REQUIRE(xi.size() == 100 - 39);
  for (double v : xi) CHECK(v == doctest::Approx(0.3 * sum));
}

TEST_CASE("identity kernel delays the series") {
  StaParams p;
  p.delay = 5;
  const auto k = identity_kernel(p);
  std::vector<double> eps(120);
  for (std::size_t t = 0; t < eps.size(); ++t) eps[t] = std::sin(0.37 * t) + 0.01 * t;
  const auto xi = project(eps, k);
  // output k aligns with input k + 39; its value is eps at 5 samples earlier
  for (std::size_t j = 0; j < xi.size(); ++j) CHECK(xi[j] == eps[j + 39 - 5]);
}

TEST_CASE("sinusoid gain equals the kernel frequency response") {
  const auto k = sta_kernel(StaParams{});
  const double w = 2 * kPi * 25.0 / 1000.0;  // rad per sample
  std::complex<double> h{0, 0};
  for (std::size_t j = 0; j < k.size(); ++j) h += k[j] * std::exp(std::complex<double>(0, w * static_cast<double>(j)));
  std::vector<double> eps(400);
  for (std::size_t t = 0; t < eps.size(); ++t) eps[t] = std::sin(w * t);
  const auto xi = project(eps, k);
  double peak = 0;
  for (double v : xi) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(std::abs(h)).epsilon(1e-3));
}

TEST_CASE("projection rejects short series") {
  const auto k = sta_kernel(StaParams{});
  CHECK_THROWS(project(std::vector<double>(40, 1.0), k));
}

TEST_CASE("nla half max, saturation and slope") {
  const NlaParams p;
  CHECK(nla(p.half_max, p) == 0.5);
  CHECK(nla(1e6, p) == 1.0);
  CHECK(nla(-1e6, p) == 0.0);
  const double h = 1e-6;
  CHECK((nla(p.half_max + h, p) - nla(p.half_max - h, p)) / (2 * h) == doctest::Approx(p.slope / 4).epsilon(1e-6));
  double prev = -1;
  for (double x = -1; x <= 1; x += 0.01) {
    const double v = nla(x, p);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("normalization: unit max, scale invariance, joint constant") {
  RowMatrix a = random_matrix(5, 100, 1), b = 3.0 * random_matrix(5, 100, 2);
  const double ca = normalization_constant(std::vector<const RowMatrix*>{&a});
  const double cb = normalization_constant(std::vector<const RowMatrix*>{&b});
  const double cj = normalization_constant(std::vector<const RowMatrix*>{&a, &b});
  CHECK(cj == std::max(ca, cb));
  RowMatrix a2 = a;
  normalize(std::vector<RowMatrix*>{&a2});
  CHECK(a2.cwiseAbs().maxCoeff() == 1.0);
  RowMatrix z = RowMatrix::Zero(3, 50);
  CHECK_THROWS_AS(normalization_constant(std::vector<const RowMatrix*>{&z}), NumericalError);
}

TEST_CASE("encoding is invariant to rescaling the strain") {
  const StrainField f = field_from(1e-5 * random_matrix(6, 200, 3));
  StrainField g = f;
  g.values *= 8.0;  // power of two keeps the arithmetic exact
  const EncodedField ef = encode_field(f, EncoderSpec{}), eg = encode_field(g, EncoderSpec{});
  CHECK((ef.values - eg.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(eg.c_xi == 8.0 * ef.c_xi);
}

TEST_CASE("encoded field values, timebase and metadata") {
  const StrainField f = field_from(random_matrix(4, 300, 4));
  const EncodedField e = encode_field(f, EncoderSpec{});
  CHECK(e.samples() == 300 - 39);
  CHECK(e.t0_ms == 961.0 + 39.0);
  CHECK(e.c_xi > 0.0);
  CHECK(e.values.minCoeff() >= 0.0);
  CHECK(e.values.maxCoeff() <= 1.0);
}

TEST_CASE("zero strain encodes to the activation at zero") {
  EncoderSpec spec;
  spec.nla.half_max = 0.5;
  const EncodedField e = encode_field(field_from(RowMatrix::Zero(3, 100)), spec);
  const double expect = 1.0 / (1.0 + std::exp(0.5 * spec.nla.slope));
  CHECK((e.values.array() - expect).abs().maxCoeff() < 1e-15);
}

TEST_CASE("identity kernel with linear activation is affine in delayed strain") {
  EncoderSpec spec;
  spec.sta_kind = StaKind::Identity;
  spec.activation = Activation::Linear;
  const RowMatrix m = random_matrix(3, 150, 5);
  const EncodedField e = encode_field(field_from(m), spec);
  const double c = e.c_xi;
  for (int i = 0; i < 3; ++i)
    for (int t = 0; t < e.samples(); ++t)
      CHECK(e.values(i, t) == doctest::Approx(0.5 * (1.0 + m(i, t + 39 - 5) / c)));
}

TEST_CASE("two conditions share one normalization constant") {
  const StrainField f = field_from(random_matrix(4, 200, 6));
  const StrainField r = field_from(5.0 * random_matrix(4, 200, 7));
  const EncodedPair p = encode_conditions(f, r, EncoderSpec{});
  CHECK(p.flap.c_xi == p.rotation.c_xi);
  const double cf = encode_field(f, EncoderSpec{}).c_xi, cr = encode_field(r, EncoderSpec{}).c_xi;
  CHECK(p.flap.c_xi == std::max(cf, cr));
}

TEST_CASE("serial and OpenMP kernels agree exactly") {
  const RowMatrix m = random_matrix(57, 500, 8);
  const auto k = sta_kernel(StaParams{});
  RowMatrix a, b;
  kernels::serial::correlate_rows(m, k, a);
  kernels::parallel::correlate_rows(m, k, b);
  CHECK(a == b);
  CHECK(kernels::serial::abs_max(m) == kernels::parallel::abs_max(m));
  RowMatrix s1 = a, s2 = a;
  kernels::serial::sigmoid_inplace(s1, 2.5, 20.0, 0.2);
  kernels::parallel::sigmoid_inplace(s2, 2.5, 20.0, 0.2);
  CHECK(s1 == s2);
  RowMatrix l1 = a, l2 = a;
  kernels::serial::affine_clip_inplace(l1, 2.5);
  kernels::parallel::affine_clip_inplace(l2, 2.5);
  CHECK(l1 == l2);
  const StrainField f = field_from(m);
  CHECK(encode_field(f, EncoderSpec{}, true).values == encode_field(f, EncoderSpec{}, false).values);
}

TEST_CASE("invalid encoder parameters are rejected") {
  EncoderSpec s;
  s.sta.width = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = EncoderSpec{};
  s.sta_kind = StaKind::Identity;
  s.sta.delay = 45;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}
