#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "membrane/fuzzy.hpp"

using namespace membrane;

TEST_CASE("spin matrices") {
  for (int n : {2, 3, 5}) {
    auto j = spin_matrices(n);
    const double s = 0.5 * (n - 1);
    // [Jx, Jy] = i Jz and cyclic
    auto comm = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
      return Eigen::MatrixXcd(a * b - b * a);
    };
    std::complex<double> iu(0.0, 1.0);
    CHECK((comm(j.jx, j.jy) - iu * j.jz).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((comm(j.jy, j.jz) - iu * j.jx).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((comm(j.jz, j.jx) - iu * j.jy).cwiseAbs().maxCoeff() < 1e-13);
    // Casimir
    Eigen::MatrixXcd c2 = j.jx * j.jx + j.jy * j.jy + j.jz * j.jz;
    CHECK((c2 - s * (s + 1.0) * Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <
          1e-13);
  }
}

TEST_CASE("degree-1 fields map onto the generators exactly") {
  auto g = SurfaceGrid::sphere(16, 16);
  auto f = sphere_coordinates(g);
  for (int n : {2, 3, 5, 9}) {
    auto j = spin_matrices(n);
    const double s = 0.5 * (n - 1);
    CHECK((fuzzy_map(f[0], n) - j.jx / s).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((fuzzy_map(f[1], n) - j.jy / s).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((fuzzy_map(f[2], n) - j.jz / s).cwiseAbs().maxCoeff() < 1e-13);
    // degree-1 brackets close exactly: deviation at machine precision
    CHECK(correspondence_deviation(f[0], f[1], n) < 1e-12);
  }
}

TEST_CASE("real fields map to hermitian matrices") {
  auto g = SurfaceGrid::sphere(24, 24);
  std::mt19937_64 rng(21);
  SurfaceField f = random_band_limited(g, 3, rng);
  Eigen::MatrixXcd m = fuzzy_map(f, 8);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  // mean value is carried by the trace: tr(F)/N = integral/(4 pi)
  CHECK(m.trace().real() / 8.0 ==
        doctest::Approx(surface_integral(f) / (4.0 * M_PI)).epsilon(1e-10));
}

TEST_CASE("band limit is enforced with degree listing") {
  auto g = SurfaceGrid::sphere(24, 24);
  std::mt19937_64 rng(22);
  SurfaceField f = random_band_limited(g, 5, rng);
  CHECK_NOTHROW(fuzzy_map(f, 6));
  CHECK_THROWS_WITH_AS(fuzzy_map(f, 4), doctest::Contains("degrees"), std::domain_error);
}

TEST_CASE("bracket correspondence improves with matrix size") {
  auto g = SurfaceGrid::sphere(24, 24);
  std::mt19937_64 rng(23);
  SurfaceField a = random_band_limited(g, 2, rng);
  SurfaceField b = random_band_limited(g, 2, rng);
  double prev = 1e30;
  for (int n : {4, 8, 16, 32}) {
    double dev = correspondence_deviation(a, b, n);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 0.2);  // N=32 deviation well below the N=4 scale
}
