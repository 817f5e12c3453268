#pragma once

// Test-only reference computations, kept independent of the library's
// closed-form paths: iterative eigensolvers and matrix square roots instead
// of analytic formulas, barycentric containment instead of signed areas, and
// an explicitly assembled boundary map instead of the Kronecker-structured
// inverse.

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace oracles {

// Cyclic Jacobi rotations on a symmetric 2x2 matrix; returns eigenvalues in
// descending order and the eigenvector of the larger one.
inline void jacobi_eig2(const Eigen::Matrix2d& m, double& hi, double& lo, Eigen::Vector2d& v_hi) {
  Eigen::Matrix2d a = m;
  Eigen::Matrix2d v = Eigen::Matrix2d::Identity();
  for (int iter = 0; iter < 64 && std::abs(a(0, 1)) > 1e-300; ++iter) {
    const double theta = 0.5 * std::atan2(2.0 * a(0, 1), a(0, 0) - a(1, 1));
    Eigen::Matrix2d g;
    g << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    a = (g.transpose() * a * g).eval();
    a(0, 1) = a(1, 0) = (a(0, 1) + a(1, 0)) / 2.0;
    v = (v * g).eval();
  }
  if (a(0, 0) >= a(1, 1)) {
    hi = a(0, 0);
    lo = a(1, 1);
    v_hi = v.col(0);
  } else {
    hi = a(1, 1);
    lo = a(0, 0);
    v_hi = v.col(1);
  }
}

// Denman-Beavers iteration for the principal square root of an SPD matrix.
inline Eigen::Matrix2d sqrt_spd(const Eigen::Matrix2d& m) {
  Eigen::Matrix2d y = m;
  Eigen::Matrix2d z = Eigen::Matrix2d::Identity();
  for (int iter = 0; iter < 80; ++iter) {
    const Eigen::Matrix2d yn = 0.5 * (y + z.inverse());
    const Eigen::Matrix2d zn = 0.5 * (z + y.inverse());
    y = yn;
    z = zn;
  }
  return y;
}

// Strain oracle: U = sqrt(Q^T Q), rotation oracle: R = Q U^-1.
inline Eigen::Matrix2d strain_oracle(const Eigen::Matrix2d& q) {
  return sqrt_spd((q.transpose() * q).eval());
}
inline Eigen::Matrix2d rotation_oracle(const Eigen::Matrix2d& q) {
  return q * strain_oracle(q).inverse();
}

// Boundary map assembled entry by entry: stacked boundary coordinates
// (r2 c2, r3 c3, r2 s2, r3 s3) = H * (Q11, Q12, Q21, Q22).
inline Eigen::Matrix4d boundary_map(double boundary_radius, double angle2, double angle3) {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 0) = std::cos(angle2);
  h(0, 1) = std::sin(angle2);
  h(1, 0) = std::cos(angle3);
  h(1, 1) = std::sin(angle3);
  h(2, 2) = std::cos(angle2);
  h(2, 3) = std::sin(angle2);
  h(3, 2) = std::cos(angle3);
  h(3, 3) = std::sin(angle3);
  return boundary_radius * h;
}

// Barycentric containment: solve [b-a, c-a] w = p-a and test the weights.
inline bool in_triangle(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                        const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  Eigen::Matrix2d m;
  m.col(0) = b - a;
  m.col(1) = c - a;
  const Eigen::Vector2d w = m.inverse() * (p - a);
  return w.x() > 0 && w.y() > 0 && (w.x() + w.y()) < 1;
}

// Central finite differences.
inline double fd1(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}
inline double fd2(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

// Random 2x2 with entries in [-2, 2] and determinant above the floor.
inline Eigen::Matrix2d random_proper_matrix(std::mt19937& rng, double det_floor = 0.01) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    Eigen::Matrix2d q;
    q << u(rng), u(rng), u(rng), u(rng);
    if (q.determinant() > det_floor) return q;
  }
}

}  // namespace oracles
