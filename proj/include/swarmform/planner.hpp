#pragma once

// Deformation planning: the constant 4x4 matrix that turns boundary-agent
// polar commands into Jacobian entries, quintic blending of those commands
// across mission phases, and the piecewise mission evaluator.

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "swarmform/errors.hpp"
#include "swarmform/formation.hpp"
#include "swarmform/frames.hpp"

namespace swarmform {

inline constexpr double kDefaultMinRadius = 0.3;   // metres; sized to vehicle footprint
inline constexpr double kAngleSineEpsilon = 1e-9;
inline constexpr double kPhaseJoinTolerance = 1e-9;

// Commanded polar coordinates of boundary agents 2 and 3.
template <class Scalar>
struct BoundaryPolar {
  Scalar radius2 = Scalar(0);
  Scalar radius3 = Scalar(0);
  Scalar angle2 = Scalar(0);
  Scalar angle3 = Scalar(0);

  friend bool operator==(const BoundaryPolar&, const BoundaryPolar&) = default;
};

// One blend segment: the boundary commands travel from `start` at start_time
// to `end` at end_time along the quintic blend.
template <class Scalar>
struct PhaseSpec {
  Scalar start_time = Scalar(0);
  Scalar end_time = Scalar(0);
  BoundaryPolar<Scalar> start;
  BoundaryPolar<Scalar> end;

  friend bool operator==(const PhaseSpec&, const PhaseSpec&) = default;
};

// Constant matrix mapping stacked boundary coordinates
// (r2 cos a2, r3 cos a3, r2 sin a2, r3 sin a3) to stacked Jacobian entries
// (Q11, Q12, Q21, Q22), plus the bounds commands must respect.
template <class Scalar>
struct PlanMatrixJ {
  Mat4<Scalar> matrix = Mat4<Scalar>::Zero();
  Scalar boundary_radius = Scalar(0);  // upper bound on commanded radii
  Scalar min_radius = Scalar(kDefaultMinRadius);
  Scalar ref_angle2 = Scalar(0);
  Scalar ref_angle3 = Scalar(0);

  friend bool operator==(const PlanMatrixJ& a, const PlanMatrixJ& b) {
    return (a.matrix.array() == b.matrix.array()).all() &&
           a.boundary_radius == b.boundary_radius && a.min_radius == b.min_radius &&
           a.ref_angle2 == b.ref_angle2 && a.ref_angle3 == b.ref_angle3;
  }
};

// Build the planning matrix from a validated reference formation. It is the
// exact inverse of the map from Jacobian entries to boundary coordinates, so
// commanding the reference coordinates always recovers the identity Jacobian.
template <class Scalar>
PlanMatrixJ<Scalar> build_J(const ReferenceFormation<Scalar>& ref,
                            Scalar min_radius = Scalar(kDefaultMinRadius)) {
  const Scalar gap_sine = std::sin(ref.angle3 - ref.angle2);
  if (std::abs(gap_sine) < Scalar(kAngleSineEpsilon)) {
    std::ostringstream msg;
    msg << "reference boundary directions are collinear: |sin(angle3 - angle2)| = "
        << std::abs(gap_sine) << " < " << kAngleSineEpsilon;
    throw AssumptionViolation(msg.str());
  }
  if (!(min_radius > Scalar(0) && min_radius <= ref.boundary_radius)) {
    std::ostringstream msg;
    msg << "min_radius = " << min_radius << " must lie in (0, " << ref.boundary_radius << "]";
    throw ConstraintViolation(msg.str());
  }
  Mat2<Scalar> block;
  block << std::sin(ref.angle3), -std::sin(ref.angle2),
          -std::cos(ref.angle3),  std::cos(ref.angle2);
  block /= ref.boundary_radius * gap_sine;

  PlanMatrixJ<Scalar> plan;
  plan.matrix.template topLeftCorner<2, 2>() = block;      // I2 (x) block
  plan.matrix.template bottomRightCorner<2, 2>() = block;
  plan.boundary_radius = ref.boundary_radius;
  plan.min_radius = min_radius;
  plan.ref_angle2 = ref.angle2;
  plan.ref_angle3 = ref.angle3;
  return plan;
}

// Reject commands outside the admissible box (radial bounds, angle order).
template <class Scalar>
void check_boundary_constraints(const PlanMatrixJ<Scalar>& plan, const BoundaryPolar<Scalar>& bp) {
  auto check_radius = [&](const char* name, Scalar r) {
    if (!(r >= plan.min_radius && r <= plan.boundary_radius)) {
      std::ostringstream msg;
      msg << name << " = " << r << " outside the admissible radial bounds ["
          << plan.min_radius << ", " << plan.boundary_radius << "]";
      throw ConstraintViolation(msg.str());
    }
  };
  check_radius("radius2", bp.radius2);
  check_radius("radius3", bp.radius3);
  if (!(bp.angle2 < bp.angle3)) {
    std::ostringstream msg;
    msg << "boundary angles must satisfy angle2 < angle3, got angle2 = " << bp.angle2
        << ", angle3 = " << bp.angle3;
    throw ConstraintViolation(msg.str());
  }
}

// Jacobian realizing the commanded boundary positions.
template <class Scalar>
Mat2<Scalar> jacobian_from_boundary(const PlanMatrixJ<Scalar>& plan, const BoundaryPolar<Scalar>& bp) {
  check_boundary_constraints(plan, bp);
  const Vec4<Scalar> stacked(bp.radius2 * std::cos(bp.angle2), bp.radius3 * std::cos(bp.angle3),
                             bp.radius2 * std::sin(bp.angle2), bp.radius3 * std::sin(bp.angle3));
  const Vec4<Scalar> q = plan.matrix * stacked;
  Mat2<Scalar> jac;
  jac << q(0), q(1), q(2), q(3);
  return jac;
}

// Quintic smoothstep 6 tau^5 - 15 tau^4 + 10 tau^3. Strictly increasing on
// (0, 1) with zero first and second derivative at both ends. Defined for all
// tau; interval policing is the caller's job.
template <class Scalar>
Scalar quintic_blend(Scalar tau) {
  return ((Scalar(6) * tau - Scalar(15)) * tau + Scalar(10)) * tau * tau * tau;
}

// Blend fraction over [t0, tf]; 0 at t0 and 1 at tf exactly.
template <class Scalar>
Scalar beta(Scalar t, Scalar t0, Scalar tf) {
  if (!(tf > t0)) {
    std::ostringstream msg;
    msg << "blend interval is empty: [" << t0 << ", " << tf << "]";
    throw OutOfInterval(msg.str());
  }
  if (!(t >= t0 && t <= tf)) {
    std::ostringstream msg;
    msg << "t = " << t << " outside blend interval [" << t0 << ", " << tf << "]";
    throw OutOfInterval(msg.str());
  }
  return quintic_blend((t - t0) / (tf - t0));
}

// Boundary commands at time t inside a phase: each component blends
// independently between its endpoint values.
template <class Scalar>
BoundaryPolar<Scalar> schedule_at(const PhaseSpec<Scalar>& phase, Scalar t) {
  const Scalar b = beta(t, phase.start_time, phase.end_time);
  auto mix = [b](Scalar from, Scalar to) { return from * (Scalar(1) - b) + to * b; };
  return {mix(phase.start.radius2, phase.end.radius2), mix(phase.start.radius3, phase.end.radius3),
          mix(phase.start.angle2, phase.end.angle2), mix(phase.start.angle3, phase.end.angle3)};
}

// Piecewise mission over contiguous phases. Holds the first phase's start
// values before the mission and the last phase's end values after it; inside,
// evaluation blends within the covering phase. Immutable and pure, so it can
// be evaluated from any number of threads.
template <class Scalar>
class MissionPlan {
 public:
  MissionPlan(ReferenceFormation<Scalar> reference, PlanMatrixJ<Scalar> plan,
              std::vector<PhaseSpec<Scalar>> phases)
      : reference_(std::move(reference)), plan_(std::move(plan)), phases_(std::move(phases)) {
    if (phases_.empty()) throw ConstraintViolation("mission needs at least one phase");
    for (size_t k = 0; k < phases_.size(); ++k) {
      const auto& ph = phases_[k];
      if (!(ph.end_time > ph.start_time)) {
        std::ostringstream msg;
        msg << "phase " << k + 1 << " has empty time interval [" << ph.start_time << ", "
            << ph.end_time << "]";
        throw ConstraintViolation(msg.str());
      }
      check_boundary_constraints(plan_, ph.start);
      check_boundary_constraints(plan_, ph.end);
    }
    for (size_t k = 0; k + 1 < phases_.size(); ++k) {
      const auto& cur = phases_[k];
      const auto& next = phases_[k + 1];
      if (std::abs(next.start_time - cur.end_time) > Scalar(kPhaseJoinTolerance)) {
        std::ostringstream msg;
        msg << "phase " << k + 1 << " ends at t = " << cur.end_time << " but phase " << k + 2
            << " starts at t = " << next.start_time;
        throw DiscontinuousMission(msg.str());
      }
      const Scalar jump =
          std::max({std::abs(next.start.radius2 - cur.end.radius2),
                    std::abs(next.start.radius3 - cur.end.radius3),
                    std::abs(next.start.angle2 - cur.end.angle2),
                    std::abs(next.start.angle3 - cur.end.angle3)});
      if (jump > Scalar(kPhaseJoinTolerance)) {
        std::ostringstream msg;
        msg << "boundary values jump by " << jump << " across the join of phases " << k + 1
            << " and " << k + 2;
        throw DiscontinuousMission(msg.str());
      }
    }
  }

  const ReferenceFormation<Scalar>& reference() const { return reference_; }
  const PlanMatrixJ<Scalar>& plan_matrix() const { return plan_; }
  const std::vector<PhaseSpec<Scalar>>& phases() const { return phases_; }
  Scalar start_time() const { return phases_.front().start_time; }
  Scalar end_time() const { return phases_.back().end_time; }

  // Hold semantics outside the mission span.
  BoundaryPolar<Scalar> boundary_at(Scalar t) const {
    if (t <= phases_.front().start_time) return phases_.front().start;
    if (t >= phases_.back().end_time) return phases_.back().end;
    for (const auto& ph : phases_)
      if (t <= ph.end_time) return schedule_at(ph, t);
    return phases_.back().end;  // unreachable
  }

  Mat2<Scalar> jacobian_at(Scalar t) const { return jacobian_from_boundary(plan_, boundary_at(t)); }
  Mat2<Scalar> operator()(Scalar t) const { return jacobian_at(t); }

  friend bool operator==(const MissionPlan& a, const MissionPlan& b) {
    return a.reference_ == b.reference_ && a.plan_ == b.plan_ && a.phases_ == b.phases_;
  }

 private:
  ReferenceFormation<Scalar> reference_;
  PlanMatrixJ<Scalar> plan_;
  std::vector<PhaseSpec<Scalar>> phases_;
};

// Validated mission over a reference formation.
template <class Scalar>
MissionPlan<Scalar> plan_mission(const ReferenceFormation<Scalar>& reference,
                                 std::vector<PhaseSpec<Scalar>> phases,
                                 Scalar min_radius = Scalar(kDefaultMinRadius)) {
  return MissionPlan<Scalar>(reference, build_J(reference, min_radius), std::move(phases));
}

}  // namespace swarmform
