#pragma once

#include "itamp/trajectory.hpp"

namespace itamp {

/// Constraint-violation distance of a 1-D manipulator/object trajectory pair
/// under a constant association weight w: the integral of
/// (w * (m - p))^2 + (pdot - w * mdot)^2 over [t0, t1], evaluated with
/// composite Simpson quadrature on 1000 subintervals. Diagnostic for the
/// shape of the constraint manifold.
double manifold_distance_1d(const TrajectorySpline& m, const TrajectorySpline& p,
                            double w, double t0, double t1);

/// Minimizes manifold_distance_1d over the manipulator trajectory (nodes and
/// tangents free, m(0) pinned to p(0)) on [0, p.duration()] and returns the
/// minimal distance. The integrand is quadratic in the nodal variables, so
/// this is one dense least-squares solve.
double minimize_manifold_distance_1d(const TrajectorySpline& p, double w,
                                     int manipulator_nodes);

}  // namespace itamp
