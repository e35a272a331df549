#pragma once

#include <Eigen/Dense>

namespace itamp {

/// Hermite basis row for one sample time: coefficients of (value, velocity,
/// acceleration) over the four nodal quantities (v_s, v_{s+1}, g_s, g_{s+1})
/// of the containing segment. Tangents g carry per-second units.
struct HermiteBasis {
  int segment = 0;
  Eigen::Vector4d value;
  Eigen::Vector4d velocity;
  Eigen::Vector4d acceleration;
};

/// Basis at time t for a spline with `node_count` uniformly spaced nodes on
/// [0, duration]. Throws on t outside [0, duration].
HermiteBasis hermite_basis(int node_count, double duration, double t);

/// Cubic Hermite spline over N nodes, each node holding a value and a
/// tangent per coordinate. C1 on [0, duration], exact at node times.
class TrajectorySpline {
 public:
  TrajectorySpline() = default;
  TrajectorySpline(int dim, double duration, int node_count);

  int dim() const { return static_cast<int>(values_.rows()); }
  int node_count() const { return static_cast<int>(values_.cols()); }
  double duration() const { return duration_; }
  double node_time(int s) const;

  Eigen::MatrixXd& values() { return values_; }
  Eigen::MatrixXd& tangents() { return tangents_; }
  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::MatrixXd& tangents() const { return tangents_; }

  Eigen::VectorXd eval(double t) const;
  Eigen::VectorXd velocity(double t) const;
  Eigen::VectorXd acceleration(double t) const;

 private:
  double duration_ = 1.0;
  Eigen::MatrixXd values_;    // dim x N
  Eigen::MatrixXd tangents_;  // dim x N, per second
};

/// Piecewise-constant function on N-1 uniform segments with values in [0,1]
/// (enforced softly by the solver). Right-continuous; t = duration maps to
/// the last segment.
class SegmentSchedule {
 public:
  SegmentSchedule() = default;
  SegmentSchedule(const Eigen::VectorXd& values, double duration);

  int segment_count() const { return static_cast<int>(values_.size()); }
  double duration() const { return duration_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  int segment_index(double t) const;
  double eval(double t) const;

  /// Rate of change across the boundary between segments s and s+1:
  /// (values[s+1] - values[s]) / (duration / segment_count).
  double rate(int s) const;

 private:
  Eigen::VectorXd values_;
  double duration_ = 1.0;
};

}  // namespace itamp
