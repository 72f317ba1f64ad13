#include "doctest.h"

#include "wingsense/ode.hpp"
#include "wingsense/plate.hpp"
#include "wingsense/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

using namespace wingsense;

namespace {

double energy(const SystemMatrices& s, const Vec6& q, const Vec6& qd) {
  return 0.5 * qd.dot(s.mass * qd) + 0.5 * q.dot(s.stiffness * q);
}

KinematicDrive still_drive() { return KinematicDrive(FlapProfile{0.0, 25.0, 0.2}, RotationSpec{0.0}, {}, {}); }

std::vector<double> row(const StrainField& f, int sensor) {
  return std::vector<double>(f.values.row(sensor).data(), f.values.row(sensor).data() + f.samples());
}

}  // namespace

TEST_CASE("dopri5 reproduces a harmonic oscillator") {
  std::vector<double> times;
  for (int k = 0; k <= 100; ++k) times.push_back(0.1 * k);
  std::vector<double> got(times.size());
  auto f = [](double, const Eigen::Vector2d& y) { return Eigen::Vector2d(y[1], -4.0 * y[0]); };
  OdeOptions o;
  o.rtol = 1e-10;
  o.atol = 1e-12;
  integrate_dopri5<2>(f, 0.0, Eigen::Vector2d(1.0, 0.0), times, [&](std::size_t k, double, const Eigen::Vector2d& y) { got[k] = y[0]; }, o);
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(got[k] == doctest::Approx(std::cos(2.0 * times[k])).epsilon(1e-7).scale(1.0));
}

TEST_CASE("dopri5 reports a diverging state") {
  std::vector<double> times{0.0, 1.0, 1000.0};
  auto f = [](double, const Eigen::Matrix<double, 1, 1>& y) { return Eigen::Matrix<double, 1, 1>(y[0] * y[0]); };
  CHECK_THROWS_AS(integrate_dopri5<1>(f, 0.0, Eigen::Matrix<double, 1, 1>(1.0), times, [](std::size_t, double, const Eigen::Matrix<double, 1, 1>&) {}),
                  NumericalError);
}

TEST_CASE("shape basis vanishes at the root and interpolates corner dofs") {
  const ShapeBasis b(0.05, 0.025);
  for (double x : {0.0, 0.01, 0.025}) {
    CHECK(b.value(x, 0.0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(b.d_dy(x, 0.0).cwiseAbs().maxCoeff() < 1e-12);
  }
  Eigen::Matrix<double, 3, 6> c3 = b.corner_dofs(0.0, 0.05), c4 = b.corner_dofs(0.025, 0.05);
  Eigen::Matrix<double, 3, 6> e3 = Eigen::Matrix<double, 3, 6>::Zero(), e4 = e3;
  e3.leftCols<3>().setIdentity();
  e4.rightCols<3>().setIdentity();
  CHECK((c3 - e3).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((c4 - e4).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shape basis derivatives agree with finite differences") {
  const ShapeBasis b(0.05, 0.025);
  const double h = 1e-5;
  for (auto [x, y] : {std::pair{0.007, 0.013}, std::pair{0.02, 0.041}, std::pair{0.0125, 0.03}}) {
    const Vec6 fdx = (b.value(x + h, y) - b.value(x - h, y)) / (2 * h);
    const Vec6 fdy = (b.value(x, y + h) - b.value(x, y - h)) / (2 * h);
    const Vec6 fdyy = (b.value(x, y + h) - 2 * b.value(x, y) + b.value(x, y - h)) / (h * h);
    const Vec6 fdxx = (b.value(x + h, y) - 2 * b.value(x, y) + b.value(x - h, y)) / (h * h);
    const Vec6 fdxy = (b.d_dy(x + h, y) - b.d_dy(x - h, y)) / (2 * h);
    CHECK((fdx - b.d_dx(x, y)).norm() <= 1e-6 * (1 + b.d_dx(x, y).norm()));
    CHECK((fdy - b.d_dy(x, y)).norm() <= 1e-6 * (1 + b.d_dy(x, y).norm()));
    CHECK((fdyy - b.d2_dy2(x, y)).norm() <= 1e-4 * (1 + b.d2_dy2(x, y).norm()));
    CHECK((fdxx - b.d2_dx2(x, y)).norm() <= 1e-4 * (1 + b.d2_dx2(x, y).norm()));
    CHECK((fdxy - b.d2_dxdy(x, y)).norm() <= 1e-6 * (1 + b.d2_dxdy(x, y).norm()));
  }
}

TEST_CASE("mass and stiffness are symmetric positive definite") {
  const PlateParams p;
  const auto s = assemble_matrices(build_shape_basis(p), p);
  CHECK((s.mass - s.mass.transpose()).norm() <= 1e-14 * s.mass.norm());
  CHECK((s.stiffness - s.stiffness.transpose()).norm() <= 1e-14 * s.stiffness.norm());
  CHECK(Eigen::SelfAdjointEigenSolver<Mat6>(s.mass).eigenvalues().minCoeff() > 0.0);
  CHECK(Eigen::SelfAdjointEigenSolver<Mat6>(s.stiffness).eigenvalues().minCoeff() > 0.0);
  for (int k = 1; k < 6; ++k) CHECK(s.natural_frequencies_hz[k] >= s.natural_frequencies_hz[k - 1]);
}

TEST_CASE("mass is linear in areal density") {
  PlateParams p;
  const auto s1 = assemble_matrices(build_shape_basis(p), p);
  p.areal_density *= 2;
  const auto s2 = assemble_matrices(build_shape_basis(p), p);
  CHECK((s2.mass - 2.0 * s1.mass).norm() <= 1e-14 * s2.mass.norm());
  CHECK((s2.stiffness - s1.stiffness).norm() == 0.0);
  CHECK((s2.base_coupling - 2.0 * s1.base_coupling).norm() <= 1e-14 * s2.base_coupling.norm());
}

TEST_CASE("first natural frequency matches a Rayleigh quotient estimate") {
  const PlateParams p;
  const auto s = assemble_matrices(build_shape_basis(p), p);
  // Cylindrical bending with the static uniform-load cantilever shape
  // w(y) = y^2 (6L^2 - 4Ly + y^2), integrated by composite Simpson.
  const double L = p.span;
  const int n = 2000;
  double num = 0, den = 0;
  for (int k = 0; k <= n; ++k) {
    const double y = L * k / n;
    const double wt = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const double w = y * y * (6 * L * L - 4 * L * y + y * y);
    const double wyy = 12 * L * L - 24 * L * y + 12 * y * y;
    num += wt * wyy * wyy;
    den += wt * w * w;
  }
  const double omega2 = p.bending_rigidity() * num / (p.areal_density * den);
  const double f_rayleigh = std::sqrt(omega2) / (2 * kPi);
  CHECK(s.natural_frequencies_hz[0] == doctest::Approx(f_rayleigh).epsilon(0.2));
  // Euler-Bernoulli cantilever, first root of 1 + cos(bL) cosh(bL) = 0.
  const double f_beam = 1.875104 * 1.875104 / (2 * kPi * L * L) * std::sqrt(p.bending_rigidity() / p.areal_density);
  CHECK(s.natural_frequencies_hz[0] == doctest::Approx(f_beam).epsilon(0.2));
}

TEST_CASE("zero drive at rest gives a zero derivative") {
  const PlateParams p;
  const auto s = assemble_matrices(build_shape_basis(p), p);
  const auto d = eom_rhs(s, still_drive(), 100.0, DofState{});
  CHECK(d.q_dot.norm() == 0.0);
  CHECK(d.q_ddot.norm() == 0.0);
}

TEST_CASE("free vibration from rest follows -M^-1 K q") {
  const PlateParams p;
  const auto s = assemble_matrices(build_shape_basis(p), p);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> ges(s.stiffness, s.mass);
  DofState st;
  st.q = 1e-4 * ges.eigenvectors().col(0).normalized();
  const auto d = eom_rhs(s, still_drive(), 100.0, st);
  const Vec6 expect = -s.mass.ldlt().solve(s.stiffness * st.q);
  CHECK((d.q_ddot - expect).norm() <= 1e-9 * expect.norm());
  // Along a mode the acceleration is -omega^2 q.
  const double w2 = ges.eigenvalues()[0];
  CHECK((d.q_ddot + w2 * st.q).norm() <= 1e-9 * d.q_ddot.norm());
}

TEST_CASE("rotation adds the Coriolis and centrifugal terms") {
  const PlateParams p;
  const auto s = assemble_matrices(build_shape_basis(p), p);
  const KinematicDrive d0(FlapProfile{}, RotationSpec{0.0}, {}, {});
  const KinematicDrive d1(FlapProfile{}, RotationSpec{10.0}, {}, {});
  DofState st;
  st.q << 1e-5, 2e-4, -1e-4, 3e-5, 1e-4, 2e-4;
  const double t = 1500.3;
  const Vec6 diff = eom_rhs(s, d1, t, st).q_ddot - eom_rhs(s, d0, t, st).q_ddot;
  const double phi = d1.flap_angle(t), phid = d1.flap_rate(t), thd = d1.rotation_rate(t);
  const Vec6 ic = s.mass.ldlt().solve(s.coriolis_coupling);
  const Vec6 expect = ic * (2.0 * std::sin(phi) * phid * thd) + thd * thd * st.q;
  CHECK((diff - expect).norm() <= 1e-9 * expect.norm());
  CHECK(std::abs(coriolis_forcing(total_velocities(d1, t)) - 2.0 * std::sin(phi) * phid * thd) < 1e-9);
}

TEST_CASE("undamped free vibration conserves energy") {
  PlateParams p;
  p.damping_coefficient = 0.0;
  const auto s = assemble_matrices(build_shape_basis(p), p);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> ges(s.stiffness, s.mass);
  DofState init;
  init.q = 1e-4 * (ges.eigenvectors().col(0) + 0.3 * ges.eigenvectors().col(1));
  SimulationOptions o;
  o.t_start_ms = 0.0;
  o.t_end_ms = 100.0;
  const Trajectory tr = integrate(s, still_drive(), o, init);
  const double e0 = energy(s, init.q, init.q_dot);
  double worst = 0.0;
  for (long k = 0; k < tr.samples(); ++k) worst = std::max(worst, std::abs(energy(s, tr.q.col(k), tr.q_dot.col(k)) / e0 - 1.0));
  CHECK(worst < 1e-3);
}

TEST_CASE("free vibration oscillates at the first natural frequency") {
  PlateParams p;
  p.damping_coefficient = 0.0;
  const auto s = assemble_matrices(build_shape_basis(p), p);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> ges(s.stiffness, s.mass);
  DofState init;
  init.q = 1e-4 * ges.eigenvectors().col(0);
  SimulationOptions o;
  o.t_start_ms = 0.0;
  o.t_end_ms = 1023.0;
  const Trajectory tr = integrate(s, still_drive(), o, init);
  std::vector<double> v(static_cast<std::size_t>(tr.samples()));
  for (long k = 0; k < tr.samples(); ++k) v[static_cast<std::size_t>(k)] = tr.q(0, k);
  const auto ps = power_spectrum(v, 1000.0);
  CHECK(std::abs(dominant_frequency(ps, 1.0) - s.natural_frequencies_hz[0]) <= ps.bin_width_hz);
}

TEST_CASE("steady flapping strain peaks at the flap frequency on a non-resonant plate") {
  PlateParams p;
  p.areal_density = 1.5e-6;  // first mode near 137 Hz
  const auto b = build_shape_basis(p);
  const auto s = assemble_matrices(b, p);
  REQUIRE(s.natural_frequencies_hz[0] > 100.0);
  const KinematicDrive d(FlapProfile{}, RotationSpec{0.0}, {}, {});
  const StrainField f = strain_field(integrate(s, d), b, p);
  for (int sensor : {f.grid.index(0, 0), f.grid.index(13, 25), f.grid.index(25, 40)}) {
    const auto ps = power_spectrum(row(f, sensor), 1000.0);
    CHECK(std::abs(dominant_frequency(ps, 1.0) - 25.0) <= ps.bin_width_hz);
  }
}

TEST_CASE("steady flapping strain at defaults lives on flap harmonics") {
  const PlateParams p;
  const auto b = build_shape_basis(p);
  const auto s = assemble_matrices(b, p);
  const KinematicDrive d(FlapProfile{}, RotationSpec{0.0}, {}, {});
  const StrainField f = strain_field(integrate(s, d), b, p);
  REQUIRE(f.samples() == 3040);
  const auto ps = power_spectrum(row(f, f.grid.index(13, 0)), 1000.0);
  double total = 0, harmonic = 0;
  for (std::size_t k = 1; k < ps.power.size(); ++k) {
    total += ps.power[k];
    const double h = ps.frequency_hz[k] / 25.0;
    if (std::abs(h - std::round(h)) * 25.0 <= 2 * ps.bin_width_hz && std::round(h) >= 1) harmonic += ps.power[k];
  }
  CHECK(harmonic / total > 0.99);
  const double peak = dominant_frequency(ps, 1.0);
  CHECK((std::abs(peak - 25.0) <= ps.bin_width_hz || std::abs(peak - 50.0) <= ps.bin_width_hz));
}

TEST_CASE("strain operator: curvature oracle, grid size and thickness scaling") {
  PlateParams p;
  const auto b = build_shape_basis(p);
  const SensorGrid g = SensorGrid::for_plate(p);
  CHECK(g.size() == 1326);
  CHECK(g.n_chord == 26);
  CHECK(g.n_span == 51);
  CHECK(g.index(3, 7) == 3 * 51 + 7);
  CHECK(g.x(g.index(3, 7)) == doctest::Approx(0.003));
  CHECK(g.y(g.index(3, 7)) == doctest::Approx(0.007));

  // w = (y/L)^2 uniform across the chord: delta = 1, phi = 2/L, theta = 0 at both corners.
  const double L = p.span;
  Vec6 q;
  q << 1.0, 2.0 / L, 0.0, 1.0, 2.0 / L, 0.0;
  const auto op = strain_operator(b, p, g);
  const Eigen::VectorXd eps = op * q;
  for (int i = 0; i < g.size(); ++i) CHECK(eps[i] == doctest::Approx(-p.thickness / (L * L)).epsilon(1e-10));

  PlateParams p2 = p;
  p2.thickness *= 2;
  CHECK((strain_operator(b, p2, g) - 2.0 * op).norm() <= 1e-14 * op.norm());
}

TEST_CASE("strain field drops the startup window") {
  const PlateParams p;
  const auto b = build_shape_basis(p);
  const auto s = assemble_matrices(b, p);
  const KinematicDrive d(FlapProfile{}, RotationSpec{0.0}, {}, {});
  SimulationOptions o;
  o.t_end_ms = 1200.0;
  const Trajectory tr = integrate(s, d, o);
  CHECK(tr.samples() == 1200);
  const StrainField f = strain_field(tr, b, p, 960.0);
  CHECK(f.samples() == 240);
  CHECK(f.t0_ms == 961.0);
  CHECK(f.values.allFinite());
  CHECK_THROWS(strain_field(tr, b, p, 5000.0));
}

TEST_CASE("invalid plate parameters are rejected") {
  PlateParams p;
  p.thickness = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = PlateParams{};
  p.poisson_ratio = 0.6;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
