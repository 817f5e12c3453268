#pragma once

// Collision-safety certification of a deformation: polar-decompose the
// Jacobian into rotation times symmetric positive definite strain, gate the
// principal stretches, and check realized separations and corridor clearance.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "swarmform/errors.hpp"
#include "swarmform/formation.hpp"
#include "swarmform/frames.hpp"

namespace swarmform {

// Q = R(rotation_angle) * U where U is the symmetric positive definite
// strain with principal stretches lambda1 >= lambda2 > 0 along the axis at
// shear_angle in [0, pi).
template <class Scalar>
struct StrainDecomposition {
  Scalar rotation_angle = Scalar(0);  // psi_r
  Scalar lambda1 = Scalar(1);
  Scalar lambda2 = Scalar(1);
  Scalar shear_angle = Scalar(0);     // psi_d
};

// Strain matrix from its stretch/axis parametrization; symmetric by
// construction.
template <class Scalar>
Mat2<Scalar> strain_matrix(const StrainDecomposition<Scalar>& d) {
  const Scalar c = std::cos(d.shear_angle);
  const Scalar s = std::sin(d.shear_angle);
  Mat2<Scalar> u;
  u << d.lambda1 * c * c + d.lambda2 * s * s, (d.lambda1 - d.lambda2) * c * s,
       (d.lambda1 - d.lambda2) * c * s,       d.lambda1 * s * s + d.lambda2 * c * c;
  return u;
}

// Rebuild R * U; reconstruction check for a decomposition.
template <class Scalar>
Mat2<Scalar> compose(const StrainDecomposition<Scalar>& d) {
  return rotation2(d.rotation_angle) * strain_matrix(d);
}

// Closed-form 2x2 polar decomposition. U = sqrt(Q^T Q) via the symmetric
// eigendecomposition in closed form; the rotation angle comes from the
// identity Q = R U  =>  atan2(q21 - q12, q11 + q22) = psi_r (the trace of U
// is positive). Orientation-reversing input is rejected rather than folded
// into a reflection: it would mean agents crossing.
template <class Scalar>
StrainDecomposition<Scalar> polar_decompose(const Mat2<Scalar>& q) {
  const Scalar det = q.determinant();
  if (det < -Scalar(kJacobianDetEpsilon)) {
    std::ostringstream msg;
    msg << "jacobian is orientation-reversing: det = " << det;
    throw ImproperJacobian(msg.str());
  }
  if (!(det > Scalar(kJacobianDetEpsilon))) {
    std::ostringstream msg;
    msg << "jacobian is singular: det = " << det << " <= " << kJacobianDetEpsilon;
    throw SingularJacobian(msg.str());
  }

  const Mat2<Scalar> qtq = q.transpose() * q;
  const Scalar a = qtq(0, 0);
  const Scalar b = qtq(0, 1);
  const Scalar c = qtq(1, 1);
  const Scalar half_gap = (a - c) / Scalar(2);
  const Scalar spread = std::hypot(half_gap, b);

  StrainDecomposition<Scalar> dec;
  dec.lambda1 = std::sqrt((a + c) / Scalar(2) + spread);
  dec.lambda2 = det / dec.lambda1;  // lambda1 * lambda2 = det exactly
  // Principal axis of Q^T Q, reduced to [0, pi); isotropic strain keeps 0.
  if (spread == Scalar(0)) {
    dec.shear_angle = Scalar(0);
  } else {
    Scalar axis = Scalar(0.5) * std::atan2(Scalar(2) * b, a - c);
    if (axis < Scalar(0)) axis += std::numbers::pi_v<Scalar>;
    dec.shear_angle = axis;
  }
  dec.rotation_angle = std::atan2(q(1, 0) - q(0, 1), q(0, 0) + q(1, 1));
  return dec;
}

// Axis-aligned corridor slab in the ground frame: agents whose x lies in
// [x_min, x_max] must satisfy |y - center_y| <= half_width.
template <class Scalar>
struct Corridor {
  Scalar center_y = Scalar(0);
  Scalar half_width = Scalar(0);
  Scalar x_min = Scalar(0);
  Scalar x_max = Scalar(0);

  friend bool operator==(const Corridor&, const Corridor&) = default;
};

template <class Scalar>
struct SafetyConfig {
  Scalar lambda_min = Scalar(0.35);
  Scalar min_separation = Scalar(0.5);  // metres
  std::optional<Corridor<Scalar>> corridor;

  friend bool operator==(const SafetyConfig&, const SafetyConfig&) = default;
};

// Per-instant outcome of every configured check. corridor_ok is empty when
// no corridor is configured.
template <class Scalar>
struct SafetyReport {
  Scalar time = Scalar(0);
  bool eig_ok = false;
  Scalar lambda1 = Scalar(0);
  Scalar lambda2 = Scalar(0);
  bool containment_ok = false;
  Scalar min_pairwise_dist = Scalar(0);
  std::optional<bool> corridor_ok;
};

// Gate on the smaller principal stretch.
template <class Scalar>
bool check_eigenvalues(const StrainDecomposition<Scalar>& dec, const SafetyConfig<Scalar>& cfg) {
  return dec.lambda2 >= cfg.lambda_min;
}

// Minimum distance over all unordered agent pairs, in local coordinates.
template <class Scalar>
Scalar min_pairwise_distance(const FormationSnapshot<Scalar>& snap) {
  const auto& pts = snap.local_positions;
  if (pts.size() < 2) throw Error("min_pairwise_distance needs at least two agents");
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, (pts[i] - pts[j]).norm());
  return best;
}

// True when every agent inside the corridor's x-range clears its walls.
template <class Scalar>
bool corridor_clearance(const std::vector<Vec3<Scalar>>& global_positions,
                        const SafetyConfig<Scalar>& cfg) {
  if (!cfg.corridor) throw CorridorUnset("no corridor configured");
  const auto& cor = *cfg.corridor;
  for (const auto& p : global_positions) {
    if (p.x() < cor.x_min || p.x() > cor.x_max) continue;
    if (std::abs(p.y() - cor.center_y) > cor.half_width) return false;
  }
  return true;
}

// Aggregate every configured check on one snapshot. A degenerate boundary
// triangle reports as not contained instead of throwing mid-run.
template <class Scalar>
SafetyReport<Scalar> evaluate_safety(Scalar time, const StrainDecomposition<Scalar>& dec,
                                     const FormationSnapshot<Scalar>& snap,
                                     const std::vector<Vec3<Scalar>>& global_positions,
                                     const SafetyConfig<Scalar>& cfg) {
  SafetyReport<Scalar> report;
  report.time = time;
  report.lambda1 = dec.lambda1;
  report.lambda2 = dec.lambda2;
  report.eig_ok = check_eigenvalues(dec, cfg);
  try {
    report.containment_ok = contains_leader(snap);
  } catch (const DegenerateHull&) {
    report.containment_ok = false;
  }
  report.min_pairwise_dist = min_pairwise_distance(snap);
  if (cfg.corridor) report.corridor_ok = corridor_clearance(global_positions, cfg);
  return report;
}

}  // namespace swarmform
