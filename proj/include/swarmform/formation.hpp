#pragma once

// Reference configuration of the team and its image under a planar affine
// deformation. Agent 1 is the primary leader of the formation and keeps its
// reference position for all time; every other agent is carried by the
// Jacobian of the deformation.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "swarmform/errors.hpp"
#include "swarmform/frames.hpp"

namespace swarmform {

inline constexpr double kJacobianDetEpsilon = 1e-9;
inline constexpr double kHullAreaEpsilon = 1e-9;  // m^2

// Reference placement: agent 1 on the +c1 axis at leader_radius, boundary
// agents 2 and 3 on a circle of boundary_radius at angle2 < angle3. Any
// further entries are interior agents with free reference positions.
template <class Scalar>
struct ReferenceFormation {
  Scalar leader_radius = Scalar(0);
  Scalar boundary_radius = Scalar(0);
  Scalar angle2 = Scalar(0);
  Scalar angle3 = Scalar(0);
  std::vector<Vec2<Scalar>> positions;  // agent i lives at positions[i-1]

  int agent_count() const { return static_cast<int>(positions.size()); }
  const Vec2<Scalar>& position(int agent) const { return positions.at(static_cast<size_t>(agent - 1)); }

  friend bool operator==(const ReferenceFormation& a, const ReferenceFormation& b) {
    if (a.leader_radius != b.leader_radius || a.boundary_radius != b.boundary_radius ||
        a.angle2 != b.angle2 || a.angle3 != b.angle3 || a.positions.size() != b.positions.size())
      return false;
    for (size_t i = 0; i < a.positions.size(); ++i)
      if (!(a.positions[i].array() == b.positions[i].array()).all()) return false;
    return true;
  }
};

// Validates the geometry assumptions and derives the reference positions.
// Interior agents (ids 4..N), if any, are appended as given.
template <class Scalar>
ReferenceFormation<Scalar> build_reference(Scalar leader_radius, Scalar boundary_radius,
                                           Scalar angle2, Scalar angle3,
                                           std::vector<Vec2<Scalar>> interior = {}) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  if (!(std::isfinite(double(leader_radius)) && std::isfinite(double(boundary_radius)) &&
        std::isfinite(double(angle2)) && std::isfinite(double(angle3))))
    throw AssumptionViolation("reference parameters must be finite");
  if (!(angle2 > Scalar(0) && angle3 > angle2 && angle3 < two_pi)) {
    std::ostringstream msg;
    msg << "reference angle ordering violated: need 0 < angle2 < angle3 < 2*pi, got angle2 = "
        << angle2 << ", angle3 = " << angle3;
    throw AssumptionViolation(msg.str());
  }
  if (!(boundary_radius > Scalar(0)))
    throw AssumptionViolation("boundary radius must be positive");
  if (!(leader_radius >= boundary_radius))
    throw AssumptionViolation("leader radius must be at least the boundary radius");

  ReferenceFormation<Scalar> ref{leader_radius, boundary_radius, angle2, angle3, {}};
  ref.positions.reserve(3 + interior.size());
  ref.positions.emplace_back(leader_radius, Scalar(0));
  ref.positions.emplace_back(boundary_radius * std::cos(angle2), boundary_radius * std::sin(angle2));
  ref.positions.emplace_back(boundary_radius * std::cos(angle3), boundary_radius * std::sin(angle3));
  for (const auto& p : interior) ref.positions.push_back(p);
  return ref;
}

// Team configuration at one instant, in the leader-local frame.
template <class Scalar>
struct FormationSnapshot {
  Scalar time = Scalar(0);
  std::vector<Vec2<Scalar>> local_positions;  // agent i lives at [i-1]

  const Vec2<Scalar>& position(int agent) const { return local_positions.at(static_cast<size_t>(agent - 1)); }
};

// Image of the reference under Jacobian Q: agent 1 pinned, others at Q * s_i0.
template <class Scalar>
FormationSnapshot<Scalar> apply_transform(const ReferenceFormation<Scalar>& ref,
                                          const Mat2<Scalar>& jacobian,
                                          Scalar time = Scalar(0)) {
  const Scalar det = jacobian.determinant();
  if (!(det > Scalar(kJacobianDetEpsilon))) {
    std::ostringstream msg;
    msg << "jacobian is singular: det = " << det << " <= " << kJacobianDetEpsilon;
    throw SingularJacobian(msg.str());
  }
  FormationSnapshot<Scalar> snap;
  snap.time = time;
  snap.local_positions.reserve(ref.positions.size());
  snap.local_positions.push_back(ref.positions.front());  // primary leader, pinned
  for (size_t i = 1; i < ref.positions.size(); ++i)
    snap.local_positions.push_back(jacobian * ref.positions[i]);
  return snap;
}

// True when the local-frame origin (the ground leader) lies strictly inside
// the triangle of the three boundary agents. Touching an edge counts as not
// contained; each signed sub-area must clear kHullAreaEpsilon.
template <class Scalar>
bool contains_leader(const FormationSnapshot<Scalar>& snap) {
  if (snap.local_positions.size() < 3)
    throw DegenerateHull("snapshot must hold the three boundary agents");
  const Vec2<Scalar>& a = snap.local_positions[0];
  const Vec2<Scalar>& b = snap.local_positions[1];
  const Vec2<Scalar>& c = snap.local_positions[2];
  auto cross = [](const Vec2<Scalar>& u, const Vec2<Scalar>& v) {
    return u.x() * v.y() - u.y() * v.x();
  };
  const Scalar area = cross(b - a, c - a) / Scalar(2);
  if (std::abs(area) < Scalar(kHullAreaEpsilon)) {
    std::ostringstream msg;
    msg << "boundary triangle is degenerate: |area| = " << std::abs(area);
    throw DegenerateHull(msg.str());
  }
  const Scalar orient = area > Scalar(0) ? Scalar(1) : Scalar(-1);
  const Scalar sub_ab = orient * cross(b - a, Vec2<Scalar>(-a)) / Scalar(2);
  const Scalar sub_bc = orient * cross(c - b, Vec2<Scalar>(-b)) / Scalar(2);
  const Scalar sub_ca = orient * cross(a - c, Vec2<Scalar>(-c)) / Scalar(2);
  return sub_ab > Scalar(kHullAreaEpsilon) && sub_bc > Scalar(kHullAreaEpsilon) &&
         sub_ca > Scalar(kHullAreaEpsilon);
}

}  // namespace swarmform
