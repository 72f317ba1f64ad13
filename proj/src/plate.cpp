#include "wingsense/plate.hpp"

#include "wingsense/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <stdexcept>

namespace wingsense {

namespace {

// 5-point Gauss-Legendre on [0, 1]; exact for polynomial degree <= 9.
constexpr std::array<double, 5> kGaussX = {0.04691007703066800, 0.23076534494715845, 0.5,
                                           0.76923465505284155, 0.95308992296933200};
constexpr std::array<double, 5> kGaussW = {0.11846344252809454, 0.23931433524968324,
                                           0.28444444444444444, 0.23931433524968324,
                                           0.11846344252809454};

}  // namespace

void PlateParams::validate() const {
  if (!(span > 0 && chord > 0 && thickness > 0 && elastic_modulus > 0 && areal_density > 0))
    throw ConfigError("plate: span, chord, thickness, elastic_modulus and areal_density must be positive");
  if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5)) throw ConfigError("plate: poisson_ratio must lie in (0, 0.5)");
  if (damping_coefficient && !(*damping_coefficient >= 0.0))
    throw ConfigError("plate: damping_coefficient must be >= 0");
  if (!damping_coefficient && !(quality_factor > 0.0)) throw ConfigError("plate: quality_factor must be > 0");
  if (!std::isfinite(twist_coupling)) throw ConfigError("plate: twist_coupling must be finite");
}

double PlateParams::bending_rigidity() const {
  return elastic_modulus * thickness * thickness * thickness / (12.0 * (1.0 - poisson_ratio * poisson_ratio));
}

SensorGrid SensorGrid::for_plate(const PlateParams& p, double spacing) {
  SensorGrid g;
  g.spacing = spacing;
  g.n_chord = static_cast<int>(std::lround(p.chord / spacing)) + 1;
  g.n_span = static_cast<int>(std::lround(p.span / spacing)) + 1;
  return g;
}

ShapeBasis::ShapeBasis(double span, double chord) : span_(span), chord_(chord) {
  if (!(span > 0 && chord > 0)) throw std::invalid_argument("ShapeBasis: dimensions must be positive");
}

ShapeBasis::Axis ShapeBasis::along_x(double x) const {
  const double c = chord_;
  const double s = x / c;
  const double s2 = s * s, s3 = s2 * s;
  Axis a{};
  // P0, T0, P1, T1: cubic Hermite on [0, c]
  a.v[0] = 1 - 3 * s2 + 2 * s3;
  a.v[1] = c * (s - 2 * s2 + s3);
  a.v[2] = 3 * s2 - 2 * s3;
  a.v[3] = c * (s3 - s2);
  a.d1[0] = (-6 * s + 6 * s2) / c;
  a.d1[1] = 1 - 4 * s + 3 * s2;
  a.d1[2] = (6 * s - 6 * s2) / c;
  a.d1[3] = 3 * s2 - 2 * s;
  a.d2[0] = (-6 + 12 * s) / (c * c);
  a.d2[1] = (-4 + 6 * s) / c;
  a.d2[2] = (6 - 12 * s) / (c * c);
  a.d2[3] = (6 * s - 2) / c;
  return a;
}

ShapeBasis::Axis ShapeBasis::along_y(double y) const {
  const double L = span_;
  const double e = y / L;
  const double e2 = e * e, e3 = e2 * e;
  Axis a{};
  // Clamped at the root: displacement-type and slope-type cantilever cubics.
  a.v[0] = 3 * e2 - 2 * e3;
  a.v[1] = L * (e3 - e2);
  a.d1[0] = (6 * e - 6 * e2) / L;
  a.d1[1] = 3 * e2 - 2 * e;
  a.d2[0] = (6 - 12 * e) / (L * L);
  a.d2[1] = (6 * e - 2) / L;
  return a;
}

template <int Dx, int Dy>
Vec6 ShapeBasis::eval(double x, double y) const {
  const Axis ax = along_x(x);
  const Axis ay = along_y(y);
  auto pick = [](const Axis& a, int order, int k) {
    return order == 0 ? a.v[k] : order == 1 ? a.d1[k] : a.d2[k];
  };
  const double yd = pick(ay, Dy, 0), yr = pick(ay, Dy, 1);
  const double p0 = pick(ax, Dx, 0), t0 = pick(ax, Dx, 1), p1 = pick(ax, Dx, 2), t1 = pick(ax, Dx, 3);
  Vec6 n;
  n << yd * p0, yr * p0, -yd * t0, yd * p1, yr * p1, -yd * t1;
  return n;
}

Vec6 ShapeBasis::value(double x, double y) const { return eval<0, 0>(x, y); }
Vec6 ShapeBasis::d_dx(double x, double y) const { return eval<1, 0>(x, y); }
Vec6 ShapeBasis::d_dy(double x, double y) const { return eval<0, 1>(x, y); }
Vec6 ShapeBasis::d2_dx2(double x, double y) const { return eval<2, 0>(x, y); }
Vec6 ShapeBasis::d2_dy2(double x, double y) const { return eval<0, 2>(x, y); }
Vec6 ShapeBasis::d2_dxdy(double x, double y) const { return eval<1, 1>(x, y); }

Eigen::Matrix<double, 3, 6> ShapeBasis::corner_dofs(double x, double y) const {
  Eigen::Matrix<double, 3, 6> m;
  m.row(0) = value(x, y).transpose();
  m.row(1) = d_dy(x, y).transpose();
  m.row(2) = -d_dx(x, y).transpose();
  return m;
}

ShapeBasis build_shape_basis(const PlateParams& params) {
  params.validate();
  return ShapeBasis(params.span, params.chord);
}

SystemMatrices assemble_matrices(const ShapeBasis& basis, const PlateParams& params) {
  params.validate();
  const double L = params.span, c = params.chord;
  const double rho = params.areal_density;
  const double D = params.bending_rigidity();
  const double nu = params.poisson_ratio;

  SystemMatrices sys;
  sys.mass.setZero();
  sys.stiffness.setZero();
  sys.base_coupling.setZero();
  sys.coriolis_coupling.setZero();

  for (std::size_t i = 0; i < kGaussX.size(); ++i) {
    for (std::size_t j = 0; j < kGaussX.size(); ++j) {
      const double x = kGaussX[i] * c;
      const double y = kGaussX[j] * L;
      const double wt = kGaussW[i] * kGaussW[j] * L * c;
      const Vec6 n = basis.value(x, y);
      const Vec6 nxx = basis.d2_dx2(x, y);
      const Vec6 nyy = basis.d2_dy2(x, y);
      const Vec6 nxy = basis.d2_dxdy(x, y);
      sys.mass.noalias() += wt * rho * n * n.transpose();
      sys.stiffness.noalias() += wt * D *
                                 (nxx * nxx.transpose() + nyy * nyy.transpose() +
                                  nu * (nxx * nyy.transpose() + nyy * nxx.transpose()) +
                                  2.0 * (1.0 - nu) * nxy * nxy.transpose());
      sys.base_coupling += wt * rho * y * n;
      sys.coriolis_coupling += wt * rho * y * (2.0 * x / c - 1.0) * n;
    }
  }
  sys.mass = 0.5 * (sys.mass + sys.mass.transpose()).eval();
  sys.stiffness = 0.5 * (sys.stiffness + sys.stiffness.transpose()).eval();
  sys.coriolis_coupling *= params.twist_coupling;

  Eigen::LLT<Mat6> llt(sys.mass);
  if (llt.info() != Eigen::Success || !sys.mass.allFinite())
    throw ConfigError("assemble_matrices: mass matrix is singular (check basis and areal_density)");

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> ges(sys.stiffness, sys.mass);
  if (ges.info() != Eigen::Success) throw NumericalError("assemble_matrices", "modal analysis failed");
  for (int k = 0; k < 6; ++k)
    sys.natural_frequencies_hz[k] = std::sqrt(std::max(0.0, ges.eigenvalues()[k])) / (2.0 * kPi);

  sys.damping_coefficient = params.damping_coefficient
                                ? *params.damping_coefficient
                                : 2.0 * kPi * sys.natural_frequencies_hz[0] / params.quality_factor;
  sys.damping = sys.damping_coefficient * sys.mass;
  sys.centrifugal = params.centrifugal;

  sys.minv_stiffness = llt.solve(sys.stiffness);
  sys.minv_damping = llt.solve(sys.damping);
  sys.minv_base = llt.solve(sys.base_coupling);
  sys.minv_coriolis = llt.solve(sys.coriolis_coupling);
  return sys;
}

double coriolis_forcing(const DriveSample& d) {
  return 2.0 * std::sin(d.flap_angle) * d.flap_rate * d.rotation_rate;
}

DofDerivative eom_rhs(const SystemMatrices& sys, const KinematicDrive& drive, double t_ms, const DofState& s) {
  const DriveSample d = total_velocities(drive, t_ms);
  if (!std::isfinite(d.flap_rate) || !std::isfinite(d.rotation_rate) || !std::isfinite(d.flap_angle) ||
      !std::isfinite(d.flap_accel))
    throw NumericalError("eom", "non-finite drive value");
  DofDerivative out;
  out.q_dot = s.q_dot;
  out.q_ddot = -sys.minv_base * d.flap_accel - sys.minv_stiffness * s.q + sys.minv_coriolis * coriolis_forcing(d) -
               sys.minv_damping * s.q_dot;
  if (sys.centrifugal) out.q_ddot += d.rotation_rate * d.rotation_rate * s.q;
  return out;
}

Trajectory integrate(const SystemMatrices& sys, const KinematicDrive& drive, const SimulationOptions& opt,
                     const DofState& initial) {
  if (!(opt.t_end_ms > opt.t_start_ms) || !(opt.t_start_ms >= 0.0))
    throw std::invalid_argument("integrate: t_span must be increasing and start at t >= 0");

  Trajectory traj;
  const long n = static_cast<long>(std::floor(opt.t_end_ms - opt.t_start_ms)) + 1;
  traj.t_ms.resize(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) traj.t_ms[static_cast<std::size_t>(k)] = opt.t_start_ms + static_cast<double>(k);
  traj.q.resize(6, n);
  traj.q_dot.resize(6, n);

  // Time variable in ms; the physical rates are per second.
  auto rhs = [&](double t, const Vec12& y) {
    DofState s;
    s.q = y.head<6>();
    s.q_dot = y.tail<6>();
    const DofDerivative d = eom_rhs(sys, drive, t, s);
    Vec12 out;
    out.head<6>() = 1e-3 * d.q_dot;
    out.tail<6>() = 1e-3 * d.q_ddot;
    return out;
  };
  auto emit = [&](std::size_t k, double, const Vec12& y) {
    traj.q.col(static_cast<long>(k)) = y.head<6>();
    traj.q_dot.col(static_cast<long>(k)) = y.tail<6>();
  };

  OdeOptions o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  Vec12 y0;
  y0 << initial.q, initial.q_dot;
  traj.stats = integrate_dopri5<12>(rhs, opt.t_start_ms, y0, traj.t_ms, emit, o);
  if (!traj.q.allFinite()) throw NumericalError("integrate", "non-finite trajectory");
  return traj;
}

Eigen::Matrix<double, Eigen::Dynamic, 6> strain_operator(const ShapeBasis& basis, const PlateParams& params,
                                                         const SensorGrid& grid) {
  Eigen::Matrix<double, Eigen::Dynamic, 6> op(grid.size(), 6);
  for (int i = 0; i < grid.size(); ++i)
    op.row(i) = -0.5 * params.thickness * basis.d2_dy2(grid.x(i), grid.y(i)).transpose();
  return op;
}

StrainField strain_field(const Trajectory& traj, const ShapeBasis& basis, const PlateParams& params,
                         double discard_ms) {
  long first = 0;
  while (first < traj.samples() && traj.t_ms[static_cast<std::size_t>(first)] <= discard_ms) ++first;
  if (first >= traj.samples()) throw std::invalid_argument("strain_field: discard covers the whole trajectory");

  StrainField f;
  f.grid = SensorGrid::for_plate(params);
  f.discard_ms = discard_ms;
  f.t0_ms = traj.t_ms[static_cast<std::size_t>(first)];
  const long n = traj.samples() - first;
  f.values = strain_operator(basis, params, f.grid) * traj.q.middleCols(first, n);
  return f;
}

}  // namespace wingsense
