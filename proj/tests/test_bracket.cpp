#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "membrane/field.hpp"

#include <cmath>

using namespace membrane;

TEST_CASE("gauss-legendre rule") {
  Eigen::VectorXd x, w;
  gauss_legendre(16, x, w);
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
  for (int i = 1; i < 16; ++i) CHECK(x[i] > x[i - 1]);
  double m2 = 0.0, m30 = 0.0;
  for (int i = 0; i < 16; ++i) {
    m2 += w[i] * x[i] * x[i];
    m30 += w[i] * std::pow(x[i], 30);
  }
  CHECK(m2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(m30 == doctest::Approx(2.0 / 31.0).epsilon(1e-13));  // degree 30 < 2n-1
}

TEST_CASE("sphere integrals and derivatives") {
  auto g = SurfaceGrid::sphere(16, 16);
  auto f = sphere_coordinates(g);
  Eigen::ArrayXXd one = Eigen::ArrayXXd::Ones(g->n1, g->n2);
  CHECK(g->integrate(one) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(g->integrate(f[2].v * f[2].v) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));
  CHECK(surface_integral(f[0]) == doctest::Approx(0.0).epsilon(1e-13));

  // sigma1 is cos(theta): d1 of the third coordinate is 1, d2 is 0
  CHECK((d1(f[2]).v - 1.0).abs().maxCoeff() < 1e-11);
  CHECK(d2(f[2]).v.abs().maxCoeff() < 1e-12);
  // d2 of sin(t) cos(p) = -sin(t) sin(p)
  CHECK((d2(f[0]).v + f[1].v).abs().maxCoeff() < 1e-12);
}

TEST_CASE("coordinate fields close under the bracket") {
  auto g = SurfaceGrid::sphere(16, 16);
  auto f = sphere_coordinates(g);
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    SurfaceField br = poisson_bracket(f[i], f[j]);
    CHECK((br.v - f[k].v).abs().maxCoeff() < 1e-12);
  }
  SurfaceField self = poisson_bracket(f[0], f[0]);
  CHECK(self.v.abs().maxCoeff() < 1e-13);
}

TEST_CASE("analysis-synthesis roundtrip and band limit") {
  auto g = SurfaceGrid::sphere(24, 24);
  std::mt19937_64 rng(3);
  SurfaceField f = random_band_limited(g, 5, rng);
  auto co = g->analyze(f.v);
  CHECK((g->synthesize(co) - f.v).abs().maxCoeff() < 1e-11 * f.v.abs().maxCoeff());
  double hi = 0.0;
  for (int m = 0; m <= co.M; ++m)
    for (int l = std::max(m, 6); l <= co.L; ++l)
      hi = std::max(hi, std::abs(co.c[m](l - m)));
  CHECK(hi < 1e-10 * f.v.abs().maxCoeff());
}

TEST_CASE("jacobi identity and bracket integral on the sphere") {
  auto g = SurfaceGrid::sphere(32, 32);
  std::mt19937_64 rng(5);
  SurfaceField a = random_band_limited(g, 2, rng);
  SurfaceField b = random_band_limited(g, 2, rng);
  SurfaceField c = random_band_limited(g, 2, rng);
  CHECK(jacobi_residual(a, b, c) < 1e-9);
  CHECK(std::abs(surface_integral(poisson_bracket(a, b))) < 1e-10);
  // antisymmetry and Leibniz
  SurfaceField ab = poisson_bracket(a, b), ba = poisson_bracket(b, a);
  CHECK((ab.v + ba.v).abs().maxCoeff() < 1e-12);
  SurfaceField prod{g, b.v * c.v};
  Eigen::ArrayXXd leib =
      poisson_bracket(a, prod).v - ab.v * c.v - b.v * poisson_bracket(a, c).v;
  CHECK(leib.abs().maxCoeff() < 1e-9);
}

TEST_CASE("torus derivatives, dealiasing, bracket") {
  auto g = SurfaceGrid::torus(32, 32);
  Eigen::ArrayXXd s1(g->n1, g->n2), s2(g->n1, g->n2), hi(g->n1, g->n2);
  for (int i = 0; i < g->n1; ++i)
    for (int j = 0; j < g->n2; ++j) {
      s1(i, j) = std::sin(g->nodes1[i]);
      s2(i, j) = std::sin(g->nodes2[j]);
      hi(i, j) = std::cos(14.0 * g->nodes1[i]);
    }
  Eigen::ArrayXXd c1(g->n1, g->n2);
  for (int i = 0; i < g->n1; ++i)
    for (int j = 0; j < g->n2; ++j) c1(i, j) = std::cos(g->nodes1[i]);
  CHECK((g->d1(s1) - c1).abs().maxCoeff() < 1e-11);
  CHECK(g->d2(s1).abs().maxCoeff() < 1e-11);
  CHECK(g->dealias(hi).abs().maxCoeff() < 1e-11);   // |k| = 14 > 32/3 truncated
  CHECK((g->dealias(s1) - s1).abs().maxCoeff() < 1e-11);

  // {sin s1, sin s2} = -cos s1 cos s2 under {f,g} = d2 f d1 g - d2 g d1 f
  Eigen::ArrayXXd br = g->bracket(s1, s2);
  Eigen::ArrayXXd want(g->n1, g->n2);
  for (int i = 0; i < g->n1; ++i)
    for (int j = 0; j < g->n2; ++j)
      want(i, j) = -std::cos(g->nodes1[i]) * std::cos(g->nodes2[j]);
  CHECK((br - want).abs().maxCoeff() < 1e-11);
  CHECK(g->integrate(Eigen::ArrayXXd::Ones(g->n1, g->n2)) ==
        doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-13));

  std::mt19937_64 rng(9);
  SurfaceField a = random_band_limited(g, 2, rng, 0.5);
  SurfaceField b = random_band_limited(g, 2, rng, 0.5);
  SurfaceField c = random_band_limited(g, 2, rng, 0.5);
  CHECK(jacobi_residual(a, b, c) < 1e-9);
  CHECK(std::abs(surface_integral(poisson_bracket(a, b))) < 1e-10);
}

TEST_CASE("winding cross terms") {
  auto g = SurfaceGrid::torus(16, 16);
  // X_0 = s2, X_1 = s1 as affine parts: {X_0, X_1} = +1
  FieldConfiguration cfg = FieldConfiguration::zero(g, 2);
  cfg.has_winding = true;
  cfg.wind1 = Eigen::VectorXd::Zero(2);
  cfg.wind2 = Eigen::VectorXd::Zero(2);
  cfg.wind2[0] = 1.0;  // X_0 = sigma2
  cfg.wind1[1] = 1.0;  // X_1 = sigma1
  Eigen::ArrayXXd br = component_bracket(cfg, 0, 1);
  CHECK((br - 1.0).abs().maxCoeff() < 1e-13);
  CHECK((component_bracket(cfg, 1, 0) + 1.0).abs().maxCoeff() < 1e-13);

  // affine-periodic cross terms: X_0 = sigma2, X_1 = sin s1 -> {X_0, X_1} = cos s1
  for (int i = 0; i < g->n1; ++i)
    for (int j = 0; j < g->n2; ++j) cfg.x[1].v(i, j) = std::sin(g->nodes1[i]);
  cfg.wind1[1] = 0.0;
  br = component_bracket(cfg, 0, 1);
  for (int i = 0; i < g->n1; ++i)
    CHECK(br(i, 0) == doctest::Approx(std::cos(g->nodes1[i])).epsilon(1e-10));
}

TEST_CASE("linear action covariance") {
  auto g = SurfaceGrid::sphere(16, 16);
  std::mt19937_64 rng(13);
  FieldConfiguration cfg = FieldConfiguration::zero(g, 7);
  for (int i = 0; i < 7; ++i) cfg.x[i] = random_band_limited(g, 2, rng, 0.3);
  Matrix7d r = random_g2(rng);
  FieldConfiguration rot = apply_g2(r, cfg);
  // {(Rx)_i,(Rx)_j} = R_ik R_jl {x_k, x_l}
  for (int i : {0, 3})
    for (int j : {1, 6}) {
      Eigen::ArrayXXd lhs = component_bracket(rot, i, j);
      Eigen::ArrayXXd rhs = Eigen::ArrayXXd::Zero(g->n1, g->n2);
      for (int k = 0; k < 7; ++k)
        for (int l = 0; l < 7; ++l)
          if (r(i, k) != 0.0 && r(j, l) != 0.0)
            rhs += r(i, k) * r(j, l) * component_bracket(cfg, k, l);
      CHECK((lhs - rhs).abs().maxCoeff() < 1e-10);
    }
}
