#include "itamp/collision.hpp"

#include <algorithm>
#include <cmath>

namespace itamp {

namespace {

// Keeps the parametric solve defined for (near-)parallel and degenerate
// segments; Gauss-Newton needs finite gradients everywhere.
constexpr double kDenomReg = 1e-9;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

SegmentPairDistance segment_pair_distance_sq(const Eigen::Vector3d& a0,
                                             const Eigen::Vector3d& a1, double ra,
                                             const Eigen::Vector3d& b0,
                                             const Eigen::Vector3d& b1, double rb) {
  const Eigen::Vector3d d1 = a1 - a0;
  const Eigen::Vector3d d2 = b1 - b0;
  const Eigen::Vector3d r = a0 - b0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);

  double s = 0.0, t = 0.0;
  if (a <= kDenomReg && e <= kDenomReg) {
    // point vs point
  } else if (a <= kDenomReg) {
    t = clamp01(f / e);
  } else if (e <= kDenomReg) {
    s = clamp01(-d1.dot(r) / a);
  } else {
    const double c = d1.dot(r);
    const double b = d1.dot(d2);
    const double denom = a * e - b * b;
    s = clamp01((b * f - c * e) / (denom + kDenomReg));
    t = (b * s + f) / e;
    if (t < 0.0) {
      t = 0.0;
      s = clamp01(-c / a);
    } else if (t > 1.0) {
      t = 1.0;
      s = clamp01((b - c) / a);
    }
  }

  SegmentPairDistance out;
  out.s = s;
  out.t = t;
  out.point_a = a0 + s * d1;
  out.point_b = b0 + t * d2;
  const Eigen::Vector3d diff = out.point_a - out.point_b;
  const double sum_r = ra + rb;
  out.value = diff.squaredNorm() - sum_r * sum_r;

  // Envelope theorem: the clamped minimizer (s, t) is held fixed.
  out.grad_a0 = 2.0 * (1.0 - s) * diff;
  out.grad_a1 = 2.0 * s * diff;
  out.grad_b0 = -2.0 * (1.0 - t) * diff;
  out.grad_b1 = -2.0 * t * diff;
  return out;
}

PrimitiveDistance primitive_distance_sq(const CollisionPrimitive& a, const Pose& pose_a,
                                        const CollisionPrimitive& b, const Pose& pose_b) {
  const Eigen::Matrix3d Ra = pose_a.rotation();
  const Eigen::Matrix3d Rb = pose_b.rotation();
  const Eigen::Vector3d a0 = pose_a.position + Ra * a.a;
  const Eigen::Vector3d a1 = pose_a.position + Ra * a.b;
  const Eigen::Vector3d b0 = pose_b.position + Rb * b.a;
  const Eigen::Vector3d b1 = pose_b.position + Rb * b.b;

  PrimitiveDistance out;
  out.detail = segment_pair_distance_sq(a0, a1, a.radius, b0, b1, b.radius);
  out.value = out.detail.value;

  const auto dRa = rotation_partials(pose_a.euler);
  const auto dRb = rotation_partials(pose_b.euler);

  out.grad_pose_a.head<3>() = out.detail.grad_a0 + out.detail.grad_a1;
  out.grad_pose_b.head<3>() = out.detail.grad_b0 + out.detail.grad_b1;
  for (int k = 0; k < 3; ++k) {
    out.grad_pose_a[3 + k] = out.detail.grad_a0.dot(dRa[k] * a.a) +
                             out.detail.grad_a1.dot(dRa[k] * a.b);
    out.grad_pose_b[3 + k] = out.detail.grad_b0.dot(dRb[k] * b.a) +
                             out.detail.grad_b1.dot(dRb[k] * b.b);
  }
  return out;
}

}  // namespace itamp
