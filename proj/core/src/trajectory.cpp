#include "itamp/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace itamp {

namespace {

void check_time(double t, double duration) {
  if (!(t >= 0.0 && t <= duration)) {
    throw std::invalid_argument("time " + std::to_string(t) + " outside [0, " +
                                std::to_string(duration) + "]");
  }
}

}  // namespace

HermiteBasis hermite_basis(int node_count, double duration, double t) {
  if (node_count < 2) throw std::invalid_argument("spline needs at least 2 nodes");
  if (duration <= 0.0) throw std::invalid_argument("spline duration must be positive");
  check_time(t, duration);

  const double h = duration / (node_count - 1);
  int s;
  double u;
  // Node times are hit exactly (u snapped to 0 or 1) so that evaluation at
  // t_s returns the node value bit-for-bit.
  const int nearest = static_cast<int>(std::lround(t / h));
  if (nearest >= 0 && nearest < node_count && std::abs(t - nearest * h) < 1e-12 * std::max(1.0, t)) {
    if (nearest == node_count - 1) {
      s = node_count - 2;
      u = 1.0;
    } else {
      s = nearest;
      u = 0.0;
    }
  } else {
    s = std::min(static_cast<int>(t / h), node_count - 2);
    u = (t - s * h) / h;
  }
  const double u2 = u * u, u3 = u2 * u;

  HermiteBasis b;
  b.segment = s;
  b.value << 2 * u3 - 3 * u2 + 1, -2 * u3 + 3 * u2, h * (u3 - 2 * u2 + u), h * (u3 - u2);
  b.velocity << (6 * u2 - 6 * u) / h, (-6 * u2 + 6 * u) / h, 3 * u2 - 4 * u + 1,
      3 * u2 - 2 * u;
  b.acceleration << (12 * u - 6) / (h * h), (-12 * u + 6) / (h * h), (6 * u - 4) / h,
      (6 * u - 2) / h;
  return b;
}

TrajectorySpline::TrajectorySpline(int dim, double duration, int node_count)
    : duration_(duration),
      values_(Eigen::MatrixXd::Zero(dim, node_count)),
      tangents_(Eigen::MatrixXd::Zero(dim, node_count)) {
  if (node_count < 2) throw std::invalid_argument("spline needs at least 2 nodes");
  if (duration <= 0.0) throw std::invalid_argument("spline duration must be positive");
}

double TrajectorySpline::node_time(int s) const {
  return s * duration_ / (node_count() - 1);
}

Eigen::VectorXd TrajectorySpline::eval(double t) const {
  const HermiteBasis b = hermite_basis(node_count(), duration_, t);
  const int s = b.segment;
  return b.value[0] * values_.col(s) + b.value[1] * values_.col(s + 1) +
         b.value[2] * tangents_.col(s) + b.value[3] * tangents_.col(s + 1);
}

Eigen::VectorXd TrajectorySpline::velocity(double t) const {
  const HermiteBasis b = hermite_basis(node_count(), duration_, t);
  const int s = b.segment;
  return b.velocity[0] * values_.col(s) + b.velocity[1] * values_.col(s + 1) +
         b.velocity[2] * tangents_.col(s) + b.velocity[3] * tangents_.col(s + 1);
}

Eigen::VectorXd TrajectorySpline::acceleration(double t) const {
  const HermiteBasis b = hermite_basis(node_count(), duration_, t);
  const int s = b.segment;
  return b.acceleration[0] * values_.col(s) + b.acceleration[1] * values_.col(s + 1) +
         b.acceleration[2] * tangents_.col(s) + b.acceleration[3] * tangents_.col(s + 1);
}

SegmentSchedule::SegmentSchedule(const Eigen::VectorXd& values, double duration)
    : values_(values), duration_(duration) {
  if (values_.size() < 1) throw std::invalid_argument("schedule needs at least 1 segment");
  if (duration <= 0.0) throw std::invalid_argument("schedule duration must be positive");
}

int SegmentSchedule::segment_index(double t) const {
  check_time(t, duration_);
  const double h = duration_ / segment_count();
  return std::min(static_cast<int>(t / h), segment_count() - 1);
}

double SegmentSchedule::eval(double t) const { return values_[segment_index(t)]; }

double SegmentSchedule::rate(int s) const {
  if (s < 0 || s + 1 >= segment_count()) {
    throw std::invalid_argument("schedule rate index out of range");
  }
  const double h = duration_ / segment_count();
  return (values_[s + 1] - values_[s]) / h;
}

}  // namespace itamp
