#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <vector>

#include "baryloc/error.hpp"

namespace baryloc {

/// Complex eigenvalues of a real matrix; length equals the matrix order and
/// the set is closed under conjugation.
using Spectrum = std::vector<std::complex<double>>;

namespace detail {

/// Parlett-Reinsch balancing: a diagonal similarity with power-of-two scales
/// that evens out row and column norms. The scales are exact in floating
/// point, so the eigenvalues are untouched while their conditioning improves
/// by orders of magnitude on strongly non-normal input (the cluster-coupled
/// iteration matrices here are exactly that).
inline void balance_in_place(Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double col = 0.0, row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        col += std::abs(m(j, i));
        row += std::abs(m(i, j));
      }
      if (col == 0.0 || row == 0.0) continue;

      double factor = 1.0;
      const double before = col + row;
      while (col < row / 2.0) {
        col *= 2.0;
        row /= 2.0;
        factor *= 2.0;
      }
      while (col >= row * 2.0) {
        col /= 2.0;
        row *= 2.0;
        factor /= 2.0;
      }
      if (factor != 1.0 && col + row < 0.95 * before) {
        m.col(i) *= factor;
        m.row(i) /= factor;
        converged = false;
      }
    }
  }
}

}  // namespace detail

/// All eigenvalues of a small dense real matrix (balancing followed by real
/// Schur reduction).
template <typename Derived>
Spectrum eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw Error("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw Error("eigenvalues: matrix entries must be finite");
  if (m.rows() == 0) return {};

  Eigen::MatrixXd dense = m.template cast<double>();
  detail::balance_in_place(dense);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("eigenvalue iteration did not converge");

  const auto& ev = solver.eigenvalues();
  Spectrum out(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index r = 0; r < ev.size(); ++r) out[static_cast<std::size_t>(r)] = ev(r);
  return out;
}

template <typename Derived>
double spectral_radius(const Eigen::MatrixBase<Derived>& m) {
  double rho = 0.0;
  for (const auto& lambda : eigenvalues(m)) rho = std::max(rho, std::abs(lambda));
  return rho;
}

/// Every eigenvalue has strictly positive real part.
inline bool all_in_open_rhp(const Spectrum& sp) {
  for (const auto& lambda : sp)
    if (!(lambda.real() > 0.0)) return false;
  return true;
}

/// Every eigenvalue lies strictly inside the unit circle centered at (1, 0).
inline bool all_in_unit_disk_at_one(const Spectrum& sp) {
  for (const auto& lambda : sp)
    if (!(std::abs(lambda - std::complex<double>(1.0, 0.0)) < 1.0)) return false;
  return true;
}

}  // namespace baryloc
