#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "baryloc/error.hpp"
#include "baryloc/types.hpp"

namespace baryloc {

// Tolerances. Area tolerances are relative: squared areas are compared
// against the fourth power of the largest involved distance, so the tests
// are immune to scene scale.
inline constexpr double kRealizableTol = 1e-9;   // negative squared-area slack
inline constexpr double kCollinearTol = 1e-12;   // squared-area floor for A0
inline constexpr double kCoeffSumTol = 1e-9;     // areal coefficients must sum to 1

namespace detail {

template <typename Scalar>
constexpr bool finite_nonneg(Scalar v) {
  return std::isfinite(v) && v >= Scalar(0);
}

}  // namespace detail

/// Pairwise distances of a triangle (a, b, c). Construction rejects distance
/// triples that are not realizable in the plane.
template <typename Scalar>
struct TriangleDistances {
  Scalar d_ab, d_ac, d_bc;

  TriangleDistances(Scalar ab, Scalar ac, Scalar bc) : d_ab(ab), d_ac(ac), d_bc(bc) {
    if (!detail::finite_nonneg(ab) || !detail::finite_nonneg(ac) || !detail::finite_nonneg(bc))
      throw DegenerateInput("triangle distances must be finite and nonnegative");
    const Scalar m = max_distance();
    const Scalar slack = Scalar(kRealizableTol) * m;
    if (ab > ac + bc + slack || ac > ab + bc + slack || bc > ab + ac + slack)
      throw DegenerateInput("triangle inequality violated");
  }

  Scalar max_distance() const { return std::max({d_ab, d_ac, d_bc}); }
};

using TriangleDistancesd = TriangleDistances<double>;

/// The six pairwise distances among a node l and its neighbors i, j, k.
template <typename Scalar>
struct QuadDistances {
  Scalar d_li, d_lj, d_lk;
  Scalar d_ij, d_ik, d_jk;

  QuadDistances(Scalar li, Scalar lj, Scalar lk, Scalar ij, Scalar ik, Scalar jk)
      : d_li(li), d_lj(lj), d_lk(lk), d_ij(ij), d_ik(ik), d_jk(jk) {
    for (Scalar v : {li, lj, lk, ij, ik, jk})
      if (!detail::finite_nonneg(v))
        throw DegenerateInput("pairwise distances must be finite and nonnegative");
  }

  /// Distance from l to neighbor u (0 = i, 1 = j, 2 = k).
  Scalar to_node(int u) const { return u == 0 ? d_li : (u == 1 ? d_lj : d_lk); }

  /// Distance between neighbors u and v.
  Scalar between(int u, int v) const {
    const int lo = std::min(u, v), hi = std::max(u, v);
    if (lo == 0) return hi == 1 ? d_ij : d_ik;
    return d_jk;
  }

  Scalar max_distance() const { return std::max({d_li, d_lj, d_lk, d_ij, d_ik, d_jk}); }
};

using QuadDistancesd = QuadDistances<double>;

/// |a_li|, |a_lj|, |a_lk| — barycentric coordinate magnitudes of a node with
/// respect to its three neighbors.
template <typename Scalar>
struct BarycentricMagnitudes {
  Scalar m_i, m_j, m_k;

  Scalar operator[](int u) const { return u == 0 ? m_i : (u == 1 ? m_j : m_k); }
  Scalar& operator[](int u) { return u == 0 ? m_i : (u == 1 ? m_j : m_k); }
  Scalar sum() const { return m_i + m_j + m_k; }
};

using BarycentricMagnitudesd = BarycentricMagnitudes<double>;

/// Signed areal coordinate {a_i, a_j, a_k} of a node over neighbors (i, j, k).
/// Coefficients sum to 1; signs encode on which side of each triangle edge
/// the node lies. Neighbor ids are -1 until a caller binds the coefficients
/// to a topology.
template <typename Scalar>
struct SignedBarycentric {
  std::array<NodeId, 3> neighbors{{-1, -1, -1}};
  Scalar a_i{0}, a_j{0}, a_k{0};

  Scalar operator[](int u) const { return u == 0 ? a_i : (u == 1 ? a_j : a_k); }
  Scalar& operator[](int u) { return u == 0 ? a_i : (u == 1 ? a_j : a_k); }
  Scalar sum() const { return a_i + a_j + a_k; }

  Eigen::Matrix<Scalar, 3, 1> coeffs() const {
    return Eigen::Matrix<Scalar, 3, 1>(a_i, a_j, a_k);
  }
};

using SignedBarycentricd = SignedBarycentric<double>;

/// Squared triangle area from its three pairwise distances, via the 4x4
/// bordered determinant of squared distances:
///
///   S^2 = -1/16 * det [ 0  1     1     1
///                       1  0     d_ab^2 d_ac^2
///                       1  d_ab^2 0     d_bc^2
///                       1  d_ac^2 d_bc^2 0 ]
///
/// Values within -kRealizableTol (relative to max distance^4) of zero clamp
/// to 0; anything more negative is a hard error, since the distances then
/// cannot come from three points in the plane.
template <typename Scalar>
Scalar squared_area_cm(const TriangleDistances<Scalar>& t) {
  const Scalar ab2 = t.d_ab * t.d_ab;
  const Scalar ac2 = t.d_ac * t.d_ac;
  const Scalar bc2 = t.d_bc * t.d_bc;

  Eigen::Matrix<Scalar, 4, 4> cm;
  cm << Scalar(0), Scalar(1), Scalar(1), Scalar(1),
        Scalar(1), Scalar(0), ab2,       ac2,
        Scalar(1), ab2,       Scalar(0), bc2,
        Scalar(1), ac2,       bc2,       Scalar(0);

  const Scalar s2 = -cm.determinant() / Scalar(16);
  const Scalar m = t.max_distance();
  const Scalar scale4 = m * m * m * m;
  if (s2 < -Scalar(kRealizableTol) * scale4)
    throw DegenerateInput("distances not realizable in the plane");
  return s2 < Scalar(0) ? Scalar(0) : s2;
}

/// Signed area of triangle (a, b, c): positive iff a lies on the left-hand
/// side when moving from b to c (equivalently, iff (a, b, c) is listed
/// counterclockwise). Antisymmetric under swapping any two arguments.
template <typename DA, typename DB, typename DC>
typename DA::Scalar signed_area(const Eigen::MatrixBase<DA>& a,
                                const Eigen::MatrixBase<DB>& b,
                                const Eigen::MatrixBase<DC>& c) {
  using Scalar = typename DA::Scalar;
  const Scalar bx = b(0) - a(0), by = b(1) - a(1);
  const Scalar cx = c(0) - a(0), cy = c(1) - a(1);
  return (bx * cy - by * cx) / Scalar(2);
}

namespace detail {

template <typename Scalar>
Scalar neighbor_scale4(const QuadDistances<Scalar>& q) {
  const Scalar m = std::max({q.d_ij, q.d_ik, q.d_jk});
  return m * m * m * m;
}

}  // namespace detail

/// Barycentric coordinate magnitudes from the six pairwise distances alone:
/// m_u = sqrt(S^2_{l..} / S^2_{ijk}) with all squared areas taken from the
/// distance-only determinant above. Requires the neighbor triangle (i, j, k)
/// to be nondegenerate (assumption A0).
template <typename Scalar>
BarycentricMagnitudes<Scalar> barycentric_magnitudes(const QuadDistances<Scalar>& q) {
  const Scalar s2_ijk = squared_area_cm(TriangleDistances<Scalar>(q.d_ij, q.d_ik, q.d_jk));
  if (s2_ijk <= Scalar(kCollinearTol) * detail::neighbor_scale4(q))
    throw CollinearNeighbors("neighbor triangle is degenerate");

  const Scalar s2_ljk = squared_area_cm(TriangleDistances<Scalar>(q.d_lj, q.d_lk, q.d_jk));
  const Scalar s2_lki = squared_area_cm(TriangleDistances<Scalar>(q.d_lk, q.d_li, q.d_ik));
  const Scalar s2_lij = squared_area_cm(TriangleDistances<Scalar>(q.d_li, q.d_lj, q.d_ij));

  return BarycentricMagnitudes<Scalar>{std::sqrt(s2_ljk / s2_ijk),
                                       std::sqrt(s2_lki / s2_ijk),
                                       std::sqrt(s2_lij / s2_ijk)};
}

/// Signed areal coordinate of l over (i, j, k) from known positions:
///   a_i = S(l,j,k)/S(i,j,k),  a_j = S(l,k,i)/S(i,j,k),  a_k = S(l,i,j)/S(i,j,k).
/// This is the coordinate-based route; it serves as the oracle for the
/// distance-only sign resolution and as the scenario generator's ground truth.
template <typename DL, typename DI, typename DJ, typename DK>
SignedBarycentric<typename DL::Scalar> areal_from_coordinates(const Eigen::MatrixBase<DL>& l,
                                                              const Eigen::MatrixBase<DI>& i,
                                                              const Eigen::MatrixBase<DJ>& j,
                                                              const Eigen::MatrixBase<DK>& k) {
  using Scalar = typename DL::Scalar;
  const Scalar s_ijk = signed_area(i, j, k);

  const Scalar d_ij = (i - j).norm(), d_ik = (i - k).norm(), d_jk = (j - k).norm();
  const Scalar m = std::max({d_ij, d_ik, d_jk});
  if (s_ijk * s_ijk <= Scalar(kCollinearTol) * (m * m * m * m))
    throw CollinearNeighbors("neighbor triangle is degenerate");

  SignedBarycentric<Scalar> out;
  out.a_i = signed_area(l, j, k) / s_ijk;
  out.a_j = signed_area(l, k, i) / s_ijk;
  out.a_k = signed_area(l, i, j) / s_ijk;
  return out;
}

/// Six pairwise distances of a (l, i, j, k) configuration, for tests and
/// generators that start from coordinates.
template <typename DL, typename DI, typename DJ, typename DK>
QuadDistances<typename DL::Scalar> quad_from_points(const Eigen::MatrixBase<DL>& l,
                                                    const Eigen::MatrixBase<DI>& i,
                                                    const Eigen::MatrixBase<DJ>& j,
                                                    const Eigen::MatrixBase<DK>& k) {
  using Scalar = typename DL::Scalar;
  return QuadDistances<Scalar>((l - i).norm(), (l - j).norm(), (l - k).norm(),
                               (i - j).norm(), (i - k).norm(), (j - k).norm());
}

}  // namespace baryloc
