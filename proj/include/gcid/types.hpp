#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gcid {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat4 = Eigen::Matrix4d;

/// Per-joint motion direction of a static sample.
enum class Direction : int { Negative = -1, Positive = +1 };

using DirectionVec = Eigen::VectorXi;  // entries are -1 / +1

inline Direction direction_from_delta(double dq) {
  // u(0) = 0: the zero-motion case falls on the negative branch.
  return dq > 0.0 ? Direction::Positive : Direction::Negative;
}

/// Invalid model description, configuration, or argument.
struct ModelError : std::runtime_error {
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Regressor rank-deficiency: the data cannot distinguish some parameters.
struct IdentifiabilityError : std::runtime_error {
  explicit IdentifiabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// File parsing / writing failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gcid
