#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wingsense {

using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Simulation condition, doubling as the class label for classification.
enum class Condition : std::uint8_t { Flap = 0, FlapRotation = 1 };

inline std::string_view to_string(Condition c) {
  return c == Condition::Flap ? "flap" : "flap+rotation";
}

using Labels = std::vector<Condition>;

}  // namespace wingsense
