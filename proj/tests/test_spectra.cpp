#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>

#include "baryloc/rng.hpp"
#include "baryloc/spectra.hpp"
#include "test_support.hpp"

using baryloc::Rng;
using baryloc::Spectrum;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, int n, double scale = 1.0) {
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = rng.uniform(-scale, scale);
  return m;
}

Spectrum sorted(Spectrum sp) {
  std::sort(sp.begin(), sp.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return sp;
}

}  // namespace

TEST_CASE("eigenvalues of reference matrices") {
  SUBCASE("diagonal") {
    Eigen::Matrix2d m;
    m << 2, 0, 0, 3;
    const auto ev = sorted(baryloc::eigenvalues(m));
    CHECK(std::abs(ev[0] - std::complex<double>(2, 0)) < 1e-12);
    CHECK(std::abs(ev[1] - std::complex<double>(3, 0)) < 1e-12);
  }
  SUBCASE("rotation: conjugate imaginary pair") {
    Eigen::Matrix2d m;
    m << 0, -1, 1, 0;
    const auto ev = sorted(baryloc::eigenvalues(m));
    CHECK(std::abs(ev[0] - std::complex<double>(0, -1)) < 1e-12);
    CHECK(std::abs(ev[1] - std::complex<double>(0, 1)) < 1e-12);
  }
  SUBCASE("Jordan block") {
    Eigen::Matrix2d m;
    m << 1, 1, 0, 1;
    for (const auto& lambda : baryloc::eigenvalues(m))
      CHECK(std::abs(lambda - std::complex<double>(1, 0)) < 1e-7);
  }
  SUBCASE("non-square is rejected") {
    CHECK_THROWS_AS(baryloc::eigenvalues(Eigen::MatrixXd::Zero(2, 3)), baryloc::Error);
  }
}

TEST_CASE("spectral radius") {
  Eigen::Matrix2d d;
  d << 0.5, 0, 0, -0.9;
  CHECK(baryloc::spectral_radius(d) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(baryloc::spectral_radius(Eigen::Matrix3d::Zero()) == doctest::Approx(0.0));
  Eigen::Matrix2d m;
  m << 0, 2, 0.5, 0;
  CHECK(baryloc::spectral_radius(m) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("half-plane and disk predicates") {
  const Spectrum sp1{{1, 0}, {0.5, 0.2}, {0.5, -0.2}};
  CHECK(baryloc::all_in_open_rhp(sp1));
  CHECK(baryloc::all_in_unit_disk_at_one(sp1));

  CHECK(!baryloc::all_in_open_rhp(Spectrum{{-0.1, 0}}));
  CHECK(baryloc::all_in_open_rhp(Spectrum{{2.1, 0}}));
  CHECK(!baryloc::all_in_unit_disk_at_one(Spectrum{{2.1, 0}}));

  SUBCASE("boundary is excluded") {
    CHECK(!baryloc::all_in_open_rhp(Spectrum{{0.0, 1.0}}));
    CHECK(!baryloc::all_in_unit_disk_at_one(Spectrum{{0.0, 0.0}}));
    CHECK(!baryloc::all_in_unit_disk_at_one(Spectrum{{2.0, 0.0}}));
  }
}

TEST_CASE("trace and determinant identities") {
  Rng rng(77);
  for (int it = 0; it < 10000; ++it) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const Eigen::MatrixXd m = random_matrix(rng, n);
    const auto ev = baryloc::eigenvalues(m);
    REQUIRE(ev.size() == static_cast<std::size_t>(n));

    std::complex<double> prod(1, 0), sum(0, 0);
    for (const auto& lambda : ev) {
      prod *= lambda;
      sum += lambda;
    }
    const double det = m.determinant();
    const double tr = m.trace();
    CHECK(std::abs(prod - std::complex<double>(det, 0)) <= 1e-6 * std::max(1.0, std::abs(det)));
    CHECK(std::abs(sum - std::complex<double>(tr, 0)) <= 1e-8 * std::max(1.0, std::abs(tr)));
  }
}

TEST_CASE("characteristic polynomial residual at every eigenvalue") {
  Rng rng(88);
  for (int it = 0; it < 2000; ++it) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const Eigen::MatrixXd m = random_matrix(rng, n);
    const double scale = std::max(1.0, m.norm());
    const double bound = 1e-7 * std::pow(scale, n);
    for (const auto& lambda : baryloc::eigenvalues(m))
      CHECK(std::abs(test_support::char_poly_at(m, lambda)) <= bound);
  }
}

TEST_CASE("spectrum is closed under conjugation") {
  Rng rng(99);
  for (int it = 0; it < 2000; ++it) {
    const int n = 2 + static_cast<int>(rng.below(7));
    const auto ev = baryloc::eigenvalues(random_matrix(rng, n));
    Spectrum conjugated;
    for (const auto& lambda : ev) conjugated.push_back(std::conj(lambda));
    CHECK(test_support::spectrum_distance(ev, conjugated) <= 1e-8);
  }
}

TEST_CASE("similarity invariance") {
  Rng rng(111);
  for (int it = 0; it < 2000; ++it) {
    const int n = 2 + static_cast<int>(rng.below(7));
    const Eigen::MatrixXd m = random_matrix(rng, n);
    const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n) + 0.2 * random_matrix(rng, n);
    if (std::abs(p.determinant()) < 0.1) continue;
    const Eigen::MatrixXd similar = p.inverse() * m * p;
    const double scale = 1.0 + m.norm();
    CHECK(test_support::spectrum_distance(baryloc::eigenvalues(m), baryloc::eigenvalues(similar)) <=
          1e-6 * scale);
  }
}
