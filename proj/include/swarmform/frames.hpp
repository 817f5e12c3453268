#pragma once

// Planar frame algebra between the ground-fixed global frame and the frame
// carried by the ground leader. The formation lives in the horizontal plane,
// so the vertical axis is shared and only the heading rotates.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "swarmform/errors.hpp"

namespace swarmform {

template <class Scalar> using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <class Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <class Scalar> using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <class Scalar> using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <class Scalar> using Mat4 = Eigen::Matrix<Scalar, 4, 4>;

// Wrap an angle to (-pi, pi].
template <class Scalar>
Scalar wrap_angle(Scalar angle) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar a = std::fmod(angle + pi, Scalar(2) * pi);
  if (a <= Scalar(0)) a += Scalar(2) * pi;
  return a - pi;
}

// Counter-clockwise planar rotation matrix.
template <class Scalar>
Mat2<Scalar> rotation2(Scalar angle) {
  const Scalar c = std::cos(angle);
  const Scalar s = std::sin(angle);
  Mat2<Scalar> r;
  r << c, -s, s, c;
  return r;
}

// Pose of the ground leader: planar position d, heading, and the elevation
// z_d at which the formation plane flies.
template <class Scalar>
struct LeaderState {
  Vec2<Scalar> position = Vec2<Scalar>::Zero();
  Scalar heading = Scalar(0);    // radians, wrapped to (-pi, pi]
  Scalar elevation = Scalar(0);  // metres above ground

  LeaderState() = default;
  LeaderState(const Vec2<Scalar>& position_, Scalar heading_, Scalar elevation_)
      : position(position_), heading(wrap_angle(heading_)), elevation(elevation_) {
    if (!(elevation >= Scalar(0)))
      throw ConfigError("leader elevation must be non-negative");
  }
};

// Express a formation-plane point in the ground frame:
//   p = d + elevation * e3 + R(heading) * local.
template <class Scalar>
Vec3<Scalar> local_to_global(const Vec2<Scalar>& local, const LeaderState<Scalar>& leader) {
  const Vec2<Scalar> planar = leader.position + rotation2(leader.heading) * local;
  return Vec3<Scalar>(planar.x(), planar.y(), leader.elevation);
}

// Planar inverse of local_to_global; the z component is dropped because the
// formation plane sits at the leader's elevation.
template <class Scalar>
Vec2<Scalar> global_to_local(const Vec3<Scalar>& global, const LeaderState<Scalar>& leader) {
  return rotation2(-leader.heading) * (global.template head<2>() - leader.position);
}

}  // namespace swarmform
