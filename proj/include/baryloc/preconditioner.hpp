#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "baryloc/error.hpp"
#include "baryloc/network.hpp"
#include "baryloc/spectra.hpp"

namespace baryloc {

inline constexpr int kGainSearchSteps = 40;     // candidate magnitudes 2^0 .. 2^-40
inline constexpr int kShrinkSearchSteps = 512;  // epsilon candidates 0.9 * 2^-t
inline constexpr double kShrinkSafety = 0.9;

// Acceptance margin used inside the gain search. A candidate whose spectrum
// clears a predicate by less than the eigensolver's own noise floor cannot
// support the continuation argument: the next stage then starts from an
// eigenvalue whose true sign is unknown. Candidates must clear the
// half-plane and disk boundaries by this much (scaled by the matrix norm);
// the public predicates stay strict.
inline constexpr double kDesignMargin = 1e-9;

namespace detail {

inline bool rhp_with_margin(const Spectrum& sp, double margin) {
  for (const auto& lambda : sp)
    if (!(lambda.real() > margin)) return false;
  return true;
}

inline bool disk_with_margin(const Spectrum& sp, double margin) {
  for (const auto& lambda : sp)
    if (!(std::abs(lambda - std::complex<double>(1.0, 0.0)) < 1.0 - margin)) return false;
  return true;
}

}  // namespace detail

/// Diagonal gains designed for one cluster block L_s; diag(gains) * L_s has
/// its eigenvalues inside the unit circle centered at (1, 0), so
/// I - diag(gains) * L_s is Schur.
struct ClusterGains {
  int cluster_index = 0;
  Eigen::VectorXd gains;
};

/// Per-sensor diagonal entries of K in system order.
struct GlobalPreconditioner {
  Eigen::VectorXd k;
};

/// Stagewise gain design for a cluster block. For each leading principal
/// submatrix order j, candidate gains +-2^-t are tried until the eigenvalues
/// of diag(k'_1..k'_j) L^j all lie in the open right-half-plane; the
/// continuity of eigenvalues guarantees small enough magnitudes work. A
/// shrink factor eps = 0.9 * 2^-t is then taken as the first candidate that
/// pulls the eigenvalues of eps diag(k') L inside the unit disk at (1, 0).
/// Budget exhaustion signals a pathological (e.g. singular-minor) cluster.
inline ClusterGains design_cluster_gains(const Eigen::MatrixXd& L, int cluster_index = 0) {
  if (L.rows() != L.cols() || L.rows() < 1)
    throw Error("design_cluster_gains: block must be square and nonempty");
  const int n = static_cast<int>(L.rows());

  Eigen::VectorXd scaled(n);
  for (int j = 0; j < n; ++j) {
    bool found = false;
    for (int t = 0; t <= kGainSearchSteps && !found; ++t) {
      for (double sign : {1.0, -1.0}) {
        scaled(j) = sign * std::ldexp(1.0, -t);
        const Eigen::MatrixXd product =
            scaled.head(j + 1).asDiagonal() * L.topLeftCorner(j + 1, j + 1);
        if (detail::rhp_with_margin(eigenvalues(product),
                                    kDesignMargin * std::max(1.0, product.norm()))) {
          found = true;
          break;
        }
      }
    }
    if (!found)
      throw DesignFailure("cluster " + std::to_string(cluster_index) +
                          ": no gain places stage " + std::to_string(j + 1) +
                          " eigenvalues in the open right-half-plane");
  }

  for (int t = 0; t <= kShrinkSearchSteps; ++t) {
    const double eps = kShrinkSafety * std::ldexp(1.0, -t);
    const Eigen::MatrixXd candidate = (eps * scaled).asDiagonal() * L;
    if (detail::disk_with_margin(eigenvalues(candidate), kDesignMargin)) {
      ClusterGains out;
      out.cluster_index = cluster_index;
      out.gains = eps * scaled;
      return out;
    }
  }
  throw DesignFailure("cluster " + std::to_string(cluster_index) +
                      ": no shrink factor reaches the unit disk at (1, 0)");
}

/// Concatenates per-cluster gains into the system-wide diagonal K and
/// verifies the iteration matrix I - K(I - C) is Schur. With a valid
/// sequential partition the spectrum of K(I - C) is the union of the cluster
/// blocks' spectra, so the check cannot fail unless the inputs are
/// inconsistent.
inline GlobalPreconditioner assemble_global(const std::vector<ClusterGains>& gains,
                                            const ClusterPartition& part,
                                            const LocalizationSystem& sys) {
  const int m = static_cast<int>(part.clusters.size()) - 1;
  if (static_cast<int>(gains.size()) != m)
    throw Error("assemble_global: expected one ClusterGains per cluster 1..m");

  GlobalPreconditioner K;
  K.k = Eigen::VectorXd::Zero(sys.sensor_count());
  for (const ClusterGains& g : gains) {
    if (g.cluster_index < 1 || g.cluster_index > m)
      throw Error("assemble_global: bad cluster index " + std::to_string(g.cluster_index));
    std::vector<int> rows;
    for (NodeId id : part.clusters[g.cluster_index]) rows.push_back(sys.row_of.at(id));
    std::sort(rows.begin(), rows.end());
    if (static_cast<int>(rows.size()) != g.gains.size())
      throw Error("assemble_global: gain count does not match cluster size");
    for (std::size_t r = 0; r < rows.size(); ++r) K.k(rows[r]) = g.gains(static_cast<int>(r));
  }

  const Eigen::MatrixXd n_s_identity = Eigen::MatrixXd::Identity(sys.sensor_count(), sys.sensor_count());
  const Eigen::MatrixXd iteration = n_s_identity - K.k.asDiagonal() * (n_s_identity - sys.C);
  if (!(spectral_radius(iteration) < 1.0))
    throw NotSchur("assembled preconditioner does not make the iteration matrix Schur");
  return K;
}

}  // namespace baryloc
