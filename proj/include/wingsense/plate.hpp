#pragma once

// Euler-Lagrange model of a flapping, rotating, clamped-root rectangular plate
// with six corner degrees of freedom, and the spanwise strain it produces on a
// regular sensor grid.
//
// Coordinates: x runs chordwise over [0, chord], y spanwise over [0, span]
// with the clamped root at y = 0. Free corner 3 sits at (0, span) and corner 4
// at (chord, span). SI units (m, kg, s, Pa) except where a name says ms.

#include "wingsense/kinematics.hpp"
#include "wingsense/ode.hpp"
#include "wingsense/types.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace wingsense {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec12 = Eigen::Matrix<double, 12, 1>;

struct PlateParams {
  double span = 0.050;
  double chord = 0.025;
  double thickness = 0.0127e-3;
  double elastic_modulus = 3e9;
  double poisson_ratio = 0.3;
  double areal_density = 8e-6;  // kg/m^2
  /// Mass-proportional damping rate (1/s). When unset it is derived from
  /// quality_factor at the first natural frequency.
  std::optional<double> damping_coefficient;
  double quality_factor = 10.0;
  /// Dimensionless weight of the chordwise Coriolis acceleration projected
  /// onto the antisymmetric (twisting) load distribution.
  double twist_coupling = 4.0;
  /// Enables the theta_T^2 q centrifugal term.
  bool centrifugal = true;

  void validate() const;
  double bending_rigidity() const;
};

/// Sensor grid. Sensor index = ix * n_span + iy (chordwise-major).
struct SensorGrid {
  int n_chord = 26;
  int n_span = 51;
  double spacing = 1e-3;  // m

  static SensorGrid for_plate(const PlateParams& p, double spacing = 1e-3);

  int size() const { return n_chord * n_span; }
  int index(int ix, int iy) const { return ix * n_span + iy; }
  int chord_index(int sensor) const { return sensor / n_span; }
  int span_index(int sensor) const { return sensor % n_span; }
  double x(int sensor) const { return chord_index(sensor) * spacing; }
  double y(int sensor) const { return span_index(sensor) * spacing; }

  bool operator==(const SensorGrid&) const = default;
};

/// Cubic clamped-free polynomials in y crossed with cubic Hermite polynomials
/// in x. DOF order: (delta3, phi3, theta3, delta4, phi4, theta4), where delta is
/// the corner displacement, phi = dw/dy and theta = -dw/dx (right-handed
/// rotations about x and y).
class ShapeBasis {
 public:
  ShapeBasis(double span, double chord);

  double span() const { return span_; }
  double chord() const { return chord_; }

  Vec6 value(double x, double y) const;
  Vec6 d_dx(double x, double y) const;
  Vec6 d_dy(double x, double y) const;
  Vec6 d2_dx2(double x, double y) const;
  Vec6 d2_dy2(double x, double y) const;
  Vec6 d2_dxdy(double x, double y) const;

  /// Rows (w, dw/dy, -dw/dx) of the six functions at a point. At corner 3
  /// this is [I 0], at corner 4 [0 I].
  Eigen::Matrix<double, 3, 6> corner_dofs(double x, double y) const;

 private:
  struct Axis {
    double v[4];   // function values
    double d1[4];  // first derivatives (physical units)
    double d2[4];  // second derivatives
  };
  Axis along_x(double x) const;
  Axis along_y(double y) const;
  template <int Dx, int Dy>
  Vec6 eval(double x, double y) const;

  double span_;
  double chord_;
};

ShapeBasis build_shape_basis(const PlateParams& params);

struct SystemMatrices {
  Mat6 mass;
  Mat6 stiffness;
  Mat6 damping;            // damping_coefficient * mass
  Vec6 base_coupling;      // M_a: integral of rho_A N y
  Vec6 coriolis_coupling;  // I_c: twist_coupling * integral of rho_A N y (2x/c - 1)
  double damping_coefficient = 0.0;
  bool centrifugal = true;

  Mat6 minv_stiffness;
  Mat6 minv_damping;
  Vec6 minv_base;
  Vec6 minv_coriolis;
  Vec6 natural_frequencies_hz;  // ascending, undamped
};

SystemMatrices assemble_matrices(const ShapeBasis& basis, const PlateParams& params);

struct DofState {
  Vec6 q = Vec6::Zero();
  Vec6 q_dot = Vec6::Zero();  // per second
};

struct DofDerivative {
  Vec6 q_dot;
  Vec6 q_ddot;
};

/// Scalar Coriolis forcing 2 sin(phi_T) phi_T' theta_T' (rad/s^2).
double coriolis_forcing(const DriveSample& d);

DofDerivative eom_rhs(const SystemMatrices& sys, const KinematicDrive& drive, double t_ms, const DofState& state);

struct SimulationOptions {
  double t_start_ms = 1.0;
  double t_end_ms = 4000.0;
  double rtol = 1e-6;
  double atol = 1e-9;
};

struct Trajectory {
  std::vector<double> t_ms;  // 1 kHz samples
  Eigen::Matrix<double, 6, Eigen::Dynamic> q;
  Eigen::Matrix<double, 6, Eigen::Dynamic> q_dot;
  OdeStats stats;

  long samples() const { return static_cast<long>(t_ms.size()); }
};

Trajectory integrate(const SystemMatrices& sys, const KinematicDrive& drive, const SimulationOptions& opt = {},
                     const DofState& initial = {});

struct StrainField {
  SensorGrid grid;
  RowMatrix values;  // sensors x time
  double sample_rate_hz = 1000.0;
  double t0_ms = 0.0;  // time of column 0
  double discard_ms = 0.0;
  std::string drive_hash;

  long samples() const { return values.cols(); }
};

/// Curvature-to-strain map: row i is -(h/2) d2N/dy2 at sensor i.
Eigen::Matrix<double, Eigen::Dynamic, 6> strain_operator(const ShapeBasis& basis, const PlateParams& params,
                                                         const SensorGrid& grid);

StrainField strain_field(const Trajectory& traj, const ShapeBasis& basis, const PlateParams& params,
                         double discard_ms = 960.0);

}  // namespace wingsense
