#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace fnsc {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace fnsc
