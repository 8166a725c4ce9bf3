#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "baryloc/error.hpp"
#include "baryloc/network.hpp"
#include "baryloc/preconditioner.hpp"
#include "baryloc/types.hpp"

namespace baryloc {

inline constexpr double kDivergeGuard = 1e12;  // times scene scale
inline constexpr double kPivotTol = 1e-12;     // relative zero-pivot threshold

/// Sensor position estimates at one round, in system order.
struct EstimateVector {
  PointList z;     // sensor_count x 2
  long round = 0;
};

enum class Termination { converged, max_iter };

inline const char* to_string(Termination t) {
  return t == Termination::converged ? "converged" : "max_iter";
}

/// Round-by-round record of one iterative run. residuals[t] is
/// ||z(t) - p_s|| / ||z(0) - p_s|| with p_s the direct solution (identically
/// 0 when the start already is the solution).
struct IterationTrace {
  std::vector<EstimateVector> snapshots;
  std::vector<double> residuals;
  Termination reason = Termination::converged;
  long rounds = 0;
  EstimateVector last;
};

/// Exact solution of (I - C) p_s = B p_a by elimination with partial
/// pivoting, per coordinate component.
inline PointList direct_solve(const LocalizationSystem& sys) {
  const NodeId n = sys.sensor_count();
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - sys.C;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (n > 0 && pivots.minCoeff() <= kPivotTol * pivots.maxCoeff())
    throw SingularSystem("I - C is singular: configuration is not localizable");

  return lu.solve(sys.B * sys.anchors);
}

/// All sensors start at the anchor centroid (deterministic, scene-scaled).
inline EstimateVector centroid_guess(const LocalizationSystem& sys) {
  EstimateVector z0;
  z0.z = sys.anchors.colwise().mean().replicate(sys.sensor_count(), 1);
  return z0;
}

/// One synchronous round of the preconditioned iteration,
///   z(t+1) = (I - K(I - C)) z(t) + K B p_a,
/// equivalently per node z_i' = z_i - k_i (z_i - sum_j a_ij z_j), applied
/// component-wise to x and y. All updates read round-t values.
inline EstimateVector step(const EstimateVector& z, const GlobalPreconditioner& K,
                           const LocalizationSystem& sys) {
  EstimateVector next;
  next.z = z.z - K.k.asDiagonal() * (z.z - sys.C * z.z - sys.B * sys.anchors);
  next.round = z.round + 1;
  return next;
}

/// Runs the iteration until the update falls below tol in max-norm or
/// max_iter rounds elapse. snapshot_stride 0 keeps every round for systems of
/// up to 50 sensors and every 10th round beyond that; round 0 and the final
/// round are always kept.
inline IterationTrace run(const LocalizationSystem& sys, const GlobalPreconditioner& K,
                          const EstimateVector& z0, double tol, long max_iter,
                          long snapshot_stride = 0) {
  if (snapshot_stride <= 0) snapshot_stride = sys.sensor_count() <= 50 ? 1 : 10;

  const PointList solution = direct_solve(sys);
  const double denom = (z0.z - solution).norm();
  const double scale = std::max(1.0, sys.anchors.cwiseAbs().maxCoeff());

  IterationTrace trace;
  auto residual_of = [&](const PointList& z) {
    return denom > 0.0 ? (z - solution).norm() / denom : 0.0;
  };

  EstimateVector z = z0;
  z.round = 0;
  trace.snapshots.push_back(z);
  trace.residuals.push_back(residual_of(z.z));
  trace.reason = Termination::max_iter;

  for (long t = 0; t < max_iter; ++t) {
    EstimateVector next = step(z, K, sys);
    const double update = (next.z - z.z).cwiseAbs().maxCoeff();
    z = next;
    trace.rounds = z.round;
    trace.residuals.push_back(residual_of(z.z));

    if (!z.z.allFinite() || z.z.cwiseAbs().maxCoeff() > kDivergeGuard * scale)
      throw Diverged("estimate escaped the overflow guard; preconditioner broken");

    if (z.round % snapshot_stride == 0) trace.snapshots.push_back(z);

    if (update < tol) {
      trace.reason = Termination::converged;
      break;
    }
  }

  if (trace.snapshots.back().round != z.round) trace.snapshots.push_back(z);
  trace.last = z;
  return trace;
}

}  // namespace baryloc
