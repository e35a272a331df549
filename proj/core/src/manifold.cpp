#include "itamp/manifold.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace itamp {

namespace {
constexpr int kSimpsonIntervals = 1000;  // even
}

double manifold_distance_1d(const TrajectorySpline& m, const TrajectorySpline& p,
                            double w, double t0, double t1) {
  if (m.dim() != 1 || p.dim() != 1) {
    throw std::invalid_argument("manifold_distance_1d expects 1-D trajectories");
  }
  if (!(t1 > t0)) throw std::invalid_argument("empty integration interval");

  const double h = (t1 - t0) / kSimpsonIntervals;
  auto integrand = [&](double t) {
    const double pos = w * (m.eval(t)[0] - p.eval(t)[0]);
    const double vel = p.velocity(t)[0] - w * m.velocity(t)[0];
    return pos * pos + vel * vel;
  };

  double sum = integrand(t0) + integrand(t1);
  for (int k = 1; k < kSimpsonIntervals; ++k) {
    sum += integrand(t0 + k * h) * (k % 2 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double minimize_manifold_distance_1d(const TrajectorySpline& p, double w,
                                     int manipulator_nodes) {
  const int N = manipulator_nodes;
  if (N < 2) throw std::invalid_argument("need at least 2 manipulator nodes");
  const double T = p.duration();

  // Free variables: node values 1..N-1 and all N tangents; node value 0 is
  // pinned to p(0). The residuals of the distance integral are linear in
  // them, so the minimum is one dense least-squares solve.
  const int vars = (N - 1) + N;
  const int samples = 801;
  const double p0 = p.eval(0.0)[0];

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * samples, vars);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * samples);

  const auto var_index = [N](int node, bool tangent) {
    return tangent ? (N - 1) + node : node - 1;  // node >= 1 for values
  };

  for (int k = 0; k < samples; ++k) {
    const double t = T * k / (samples - 1);
    const HermiteBasis b = hermite_basis(N, T, t);
    const double pv = p.eval(t)[0];
    const double pd = p.velocity(t)[0];

    // Rows: position residual w * (m - p), velocity residual pdot - w * mdot.
    double const_pos = -w * pv;
    double const_vel = pd;
    for (int mh = 0; mh < 4; ++mh) {
      const int node = b.segment + (mh % 2);
      const bool tangent = mh >= 2;
      if (!tangent && node == 0) {
        const_pos += w * b.value[mh] * p0;
        const_vel += -w * b.velocity[mh] * p0;
        continue;
      }
      const int col = var_index(node, tangent);
      A(2 * k, col) += w * b.value[mh];
      A(2 * k + 1, col) += -w * b.velocity[mh];
    }
    rhs[2 * k] = -const_pos;
    rhs[2 * k + 1] = -const_vel;
  }

  const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);

  TrajectorySpline m(1, T, N);
  m.values()(0, 0) = p0;
  for (int s = 1; s < N; ++s) m.values()(0, s) = sol[var_index(s, false)];
  for (int s = 0; s < N; ++s) m.tangents()(0, s) = sol[var_index(s, true)];

  return manifold_distance_1d(m, p, w, 0.0, T);
}

}  // namespace itamp
