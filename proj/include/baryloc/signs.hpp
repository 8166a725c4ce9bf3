#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "baryloc/error.hpp"
#include "baryloc/geometry.hpp"

namespace baryloc {

inline constexpr double kSignSumTol = 1e-6;   // feasibility band around sum = 1
inline constexpr double kZeroMagTol = 1e-9;   // magnitude treated as a zero coefficient
inline constexpr double kAmbiguityTol = 1e-6; // |m - 1| and |m_b - m_c| band
inline constexpr double kLemmaTol = 1e-6;     // relative, distance-based tests

/// Sign triple of a barycentric coordinate. The all-negative pattern cannot
/// satisfy the coefficient-sum constraint and never occurs.
struct SignPattern {
  std::int8_t s_i{1}, s_j{1}, s_k{1};

  std::int8_t operator[](int u) const { return u == 0 ? s_i : (u == 1 ? s_j : s_k); }
  std::int8_t& operator[](int u) { return u == 0 ? s_i : (u == 1 ? s_j : s_k); }
  bool operator==(const SignPattern&) const = default;
};

/// Which rule of the resolution pipeline produced a sign pattern.
enum class SignBranch {
  unique,        // the sum constraint admits exactly one pattern
  zero,          // one coefficient is zero; two-coefficient criterion
  coincident,    // node coincides with a neighbor; indicator coefficient
  lemma2_case1,  // parallelogram point, pattern (-1, +1, +1)
  lemma2_case3,  // pattern (+1, +1, -1)
  lemma2_case4,  // pattern (+1, -1, +1)
};

inline const char* to_string(SignBranch b) {
  switch (b) {
    case SignBranch::unique: return "unique";
    case SignBranch::zero: return "zero";
    case SignBranch::coincident: return "coincident";
    case SignBranch::lemma2_case1: return "lemma2_case1";
    case SignBranch::lemma2_case3: return "lemma2_case3";
    case SignBranch::lemma2_case4: return "lemma2_case4";
  }
  return "?";
}

namespace detail {

inline double sign_sum_tol(double magnitude_sum) {
  return kSignSumTol * std::max(1.0, magnitude_sum);
}

}  // namespace detail

/// All sign patterns whose signed magnitude sum lands within the feasibility
/// band of 1. Patterns are enumerated in a fixed order with s_i outermost and
/// +1 before -1; the all-negative triple is excluded a priori.
template <typename Scalar>
std::vector<SignPattern> enumerate_feasible_patterns(const BarycentricMagnitudes<Scalar>& m) {
  const double tol = detail::sign_sum_tol(static_cast<double>(m.sum()));
  std::vector<SignPattern> feasible;
  for (std::int8_t si : {std::int8_t(1), std::int8_t(-1)})
    for (std::int8_t sj : {std::int8_t(1), std::int8_t(-1)})
      for (std::int8_t sk : {std::int8_t(1), std::int8_t(-1)}) {
        if (si < 0 && sj < 0 && sk < 0) continue;
        const double sum = si * double(m.m_i) + sj * double(m.m_j) + sk * double(m.m_k);
        if (std::abs(sum - 1.0) <= tol) feasible.push_back(SignPattern{si, sj, sk});
      }
  if (feasible.empty())
    throw InconsistentMagnitudes("no sign pattern reaches coefficient sum 1");
  return feasible;
}

/// Sign pattern when exactly one magnitude is zero (node on the line through
/// one triangle edge). The two remaining signs follow from which of the
/// branch conditions the nonzero magnitudes satisfy; the sign attached to the
/// zero coefficient is immaterial and fixed to +1.
template <typename Scalar>
SignPattern resolve_zero_case(const BarycentricMagnitudes<Scalar>& m) {
  int zero = -1;
  int zeros = 0;
  for (int u = 0; u < 3; ++u) {
    if (double(m[u]) <= kZeroMagTol) {
      zero = u;
      ++zeros;
    }
  }
  if (zeros != 1) throw NotZeroCase("expected exactly one zero magnitude");

  const int b = (zero + 1) % 3, c = (zero + 2) % 3;
  const double mb = double(m[b]), mc = double(m[c]);

  SignPattern p;
  p[zero] = 1;
  if (mb < 1.0 && mc < 1.0) {
    p[b] = 1;
    p[c] = 1;
  } else if (mb > 1.0 && mb > mc) {
    p[b] = 1;
    p[c] = -1;
  } else if (mc > 1.0 && mc > mb) {
    p[b] = -1;
    p[c] = 1;
  } else {
    throw AmbiguousZeroCase("nonzero magnitudes satisfy no branch condition");
  }
  return p;
}

/// True iff the sum constraint alone cannot pick the pattern: some magnitude
/// equals 1 while the other two are equal (within kAmbiguityTol). All
/// magnitudes must be nonzero.
template <typename Scalar>
bool is_ambiguous(const BarycentricMagnitudes<Scalar>& m) {
  for (int u = 0; u < 3; ++u) {
    const double mu = double(m[u]);
    const double mb = double(m[(u + 1) % 3]), mc = double(m[(u + 2) % 3]);
    if (std::abs(mu - 1.0) <= kAmbiguityTol && std::abs(mb - mc) <= kAmbiguityTol) return true;
  }
  return false;
}

namespace detail {

// Distances of q re-indexed so that role r maps to original neighbor perm[r].
struct PermutedQuad {
  const QuadDistances<double>& q;
  std::array<int, 3> perm;

  double dl(int r) const { return q.to_node(perm[r]); }
  double dn(int r, int s) const { return q.between(perm[r], perm[s]); }
};

}  // namespace detail

/// Distance-based tie-break when the magnitudes sit on the ambiguity
/// manifold (|a_li| = 1, |a_lj| = |a_lk|). The unit-magnitude coefficient is
/// permuted into the i role internally; if the triangle angle at j is not
/// acute, j and k swap roles first. Then:
///   - the parallelogram conditions d_jl = d_ik, d_kl = d_ij and
///     d_il^2 = 2 d_ij^2 + 2 d_ik^2 - d_jk^2 identify the pattern (-1,+1,+1);
///   - otherwise sigma_li = +1 and d_jl^2 <> d_ij^2 + d_il^2 picks
///     (+1,+1,-1) or (+1,-1,+1).
/// A comparison landing inside the kLemmaTol band of equality is surfaced as
/// UnresolvableAmbiguity rather than guessed.
template <typename Scalar>
std::pair<SignPattern, SignBranch> resolve_ambiguous_detailed(const QuadDistances<Scalar>& q) {
  const QuadDistances<double> qd(double(q.d_li), double(q.d_lj), double(q.d_lk),
                                 double(q.d_ij), double(q.d_ik), double(q.d_jk));
  const auto m = barycentric_magnitudes(qd);

  int unit = -1;
  for (int u = 0; u < 3 && unit < 0; ++u) {
    const double mb = m[(u + 1) % 3], mc = m[(u + 2) % 3];
    if (std::abs(m[u] - 1.0) <= kAmbiguityTol && std::abs(mb - mc) <= kAmbiguityTol) unit = u;
  }
  if (unit < 0) throw Error("resolve_ambiguous: magnitudes are not on the ambiguity manifold");

  detail::PermutedQuad pq{qd, {unit, (unit + 1) % 3, (unit + 2) % 3}};

  // Angle at j must be acute for the l'/l'' argument; otherwise the angle at
  // k is, so j and k swap.
  {
    const double dij = pq.dn(0, 1), djk = pq.dn(1, 2), dik = pq.dn(0, 2);
    if (dij * dij + djk * djk - dik * dik <= 0.0) std::swap(pq.perm[1], pq.perm[2]);
  }

  const double d_il = pq.dl(0), d_jl = pq.dl(1), d_kl = pq.dl(2);
  const double d_ij = pq.dn(0, 1), d_ik = pq.dn(0, 2), d_jk = pq.dn(1, 2);
  const double dmax = qd.max_distance();
  const double tol_d = kLemmaTol * dmax;
  const double tol_d2 = kLemmaTol * dmax * dmax;

  SignPattern internal;
  SignBranch branch;
  const double parallelogram_gap =
      d_il * d_il - (2 * d_ij * d_ij + 2 * d_ik * d_ik - d_jk * d_jk);
  if (std::abs(d_jl - d_ik) <= tol_d && std::abs(d_kl - d_ij) <= tol_d &&
      std::abs(parallelogram_gap) <= tol_d2) {
    internal = SignPattern{-1, 1, 1};
    branch = SignBranch::lemma2_case1;
  } else {
    const double gap = d_jl * d_jl - (d_ij * d_ij + d_il * d_il);
    if (gap < -tol_d2) {
      internal = SignPattern{1, 1, -1};
      branch = SignBranch::lemma2_case3;
    } else if (gap > tol_d2) {
      internal = SignPattern{1, -1, 1};
      branch = SignBranch::lemma2_case4;
    } else {
      throw UnresolvableAmbiguity("right-angle configuration: d_jl^2 = d_ij^2 + d_il^2");
    }
  }

  SignPattern out;
  for (int r = 0; r < 3; ++r) out[pq.perm[r]] = internal[r];
  return {out, branch};
}

template <typename Scalar>
SignPattern resolve_ambiguous(const QuadDistances<Scalar>& q) {
  return resolve_ambiguous_detailed(q).first;
}

/// A resolved signed barycentric coordinate plus the rule that produced it.
struct SignResolution {
  SignedBarycentricd coordinate;
  SignBranch branch;
};

/// Full sign-resolution pipeline for one node given its six pairwise
/// distances: compute magnitudes, keep the unique feasible pattern when there
/// is one, otherwise fall back to the zero-coefficient criterion or the
/// distance-based tie-break. The returned coefficients are renormalized to
/// sum to exactly 1.
template <typename Scalar>
SignResolution resolve_sign_pattern_detailed(const QuadDistances<Scalar>& q) {
  const QuadDistances<double> qd(double(q.d_li), double(q.d_lj), double(q.d_lk),
                                 double(q.d_ij), double(q.d_ik), double(q.d_jk));
  auto m = barycentric_magnitudes(qd);
  const auto feasible = enumerate_feasible_patterns(m);

  SignPattern pattern;
  SignBranch branch;
  std::array<bool, 3> zeroed{false, false, false};

  if (feasible.size() == 1) {
    pattern = feasible.front();
    branch = SignBranch::unique;
  } else {
    int zeros = 0;
    for (int u = 0; u < 3; ++u)
      if (m[u] <= kZeroMagTol) {
        zeroed[u] = true;
        ++zeros;
      }
    if (zeros >= 2) {
      // Node coincides with the remaining neighbor: indicator coefficient.
      pattern = SignPattern{1, 1, 1};
      branch = SignBranch::coincident;
      for (int u = 0; u < 3; ++u)
        if (!zeroed[u]) m[u] = 1.0;
    } else if (zeros == 1) {
      pattern = resolve_zero_case(m);
      branch = SignBranch::zero;
    } else {
      auto resolved = resolve_ambiguous_detailed(qd);
      pattern = resolved.first;
      branch = resolved.second;
    }
  }

  SignedBarycentricd out;
  for (int u = 0; u < 3; ++u) out[u] = zeroed[u] ? 0.0 : pattern[u] * m[u];
  const double sum = out.sum();
  if (!(std::abs(sum - 1.0) <= detail::sign_sum_tol(m.sum())))
    throw InconsistentMagnitudes("resolved coefficients do not sum to 1");
  for (int u = 0; u < 3; ++u) out[u] /= sum;

  // Pin the dominant coefficient so the renormalized sum is 1 to the last
  // ulp (zero slots stay exactly zero).
  int top = 0;
  for (int u = 1; u < 3; ++u)
    if (std::abs(out[u]) > std::abs(out[top])) top = u;
  out[top] = 1.0 - (out[(top + 1) % 3] + out[(top + 2) % 3]);
  return {out, branch};
}

template <typename Scalar>
SignedBarycentricd resolve_sign_pattern(const QuadDistances<Scalar>& q) {
  return resolve_sign_pattern_detailed(q).coordinate;
}

}  // namespace baryloc
