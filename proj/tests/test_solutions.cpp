#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "membrane/solutions.hpp"

#include <cmath>

using namespace membrane;

namespace {
Vector7d unit7(int i) {
  Vector7d e = Vector7d::Zero();
  e[i] = 1.0;
  return e;
}
}  // namespace

TEST_CASE("drift momentum") {
  CHECK((string_momentum(unit7(0), unit7(1)) - unit7(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((string_momentum(unit7(3), unit7(2)) - unit7(4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(string_momentum(2.0 * unit7(4), 3.0 * unit7(4)).cwiseAbs().maxCoeff() == 0.0);
  // antisymmetry and orthogonality to both arguments
  std::mt19937_64 rng(61);
  for (int rep = 0; rep < 8; ++rep) {
    Vector7d a, b;
    for (int i = 0; i < 7; ++i) {
      a[i] = standard_normal(rng);
      b[i] = standard_normal(rng);
    }
    Vector7d p = string_momentum(a, b);
    CHECK((p + string_momentum(b, a)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(p.dot(a)) < 1e-12);
    CHECK(std::abs(p.dot(b)) < 1e-12);
  }
}

TEST_CASE("velocity matrix spectral structure") {
  std::mt19937_64 rng(63);
  for (int rep = 0; rep < 20; ++rep) {
    Vector7d b;
    for (int i = 0; i < 7; ++i) b[i] = standard_normal(rng);
    VelocityMatrix vm = m_matrix(b);
    CHECK((vm.m + vm.m.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(vm.omega == doctest::Approx(b.norm()));
    CHECK((vm.m * b).cwiseAbs().maxCoeff() < 1e-12);
    Matrix7d want = -vm.omega * vm.omega * Matrix7d::Identity() + b * b.transpose();
    CHECK((vm.m * vm.m - want).cwiseAbs().maxCoeff() < 1e-11);
    for (const auto& c : vm.planes) {
      Eigen::Matrix<std::complex<double>, 7, 1> res =
          vm.m.cast<std::complex<double>>() * c +
          std::complex<double>(0.0, vm.omega) * c;
      CHECK(res.cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  // winding along the third axis: coordinate planes in the documented order
  VelocityMatrix vm = m_matrix(2.0 * unit7(2));
  CHECK(vm.m(0, 1) == 2.0);
  CHECK(vm.m(4, 3) == 2.0);
  CHECK(vm.m(5, 6) == 2.0);
  CHECK(vm.planes[0](0) == std::complex<double>(1.0, 0.0));
  CHECK(vm.planes[0](1) == std::complex<double>(0.0, -1.0));
  CHECK(vm.planes[1](4) == std::complex<double>(1.0, 0.0));
  CHECK(vm.planes[2](5) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("plane wave string is self-dual") {
  auto g = SurfaceGrid::torus(32, 32);
  StringSolution s;
  s.b[2] = 1;
  s.profiles[0].modes = {{1, {1.0, 0.0}}};
  for (double t : {0.0, 0.3}) {
    Snapshot snap = string_solution_eval(s, g, t);
    CHECK(selfduality_residual(snap.x, snap.xdot) < 1e-12);
    CHECK(gauss_residual(snap.x, snap.xdot) < 1e-12);
    // first pair carries exp(i w), w = s1 + i t
    for (int r = 0; r < g->n1; ++r) {
      double want0 = std::exp(-t) * std::cos(g->nodes1[r]);
      double want1 = std::exp(-t) * std::sin(g->nodes1[r]);
      CHECK(snap.x.x[0].v(r, 0) == doctest::Approx(want0).epsilon(1e-12));
      CHECK(snap.x.x[1].v(r, 0) == doctest::Approx(want1).epsilon(1e-12));
    }
    // third component is pure winding
    CHECK(snap.x.x[2].v.abs().maxCoeff() < 1e-13);
    CHECK(snap.x.wind2[2] == 1.0);
  }
}

TEST_CASE("multi-plane profiles and drifting strings stay self-dual") {
  auto g = SurfaceGrid::torus(32, 32);
  StringSolution s;
  s.b[2] = 2;
  s.profiles[0].modes = {{1, {0.7, 0.2}}, {-2, {0.1, -0.3}}};
  s.profiles[1].modes = {{1, {0.0, 0.4}}};
  s.profiles[2].modes = {{3, {0.2, 0.1}}};
  Snapshot snap = string_solution_eval(s, g, 0.15);
  CHECK(selfduality_residual(snap.x, snap.xdot) < 1e-10);

  // transverse winding adds the analytic drift
  StringSolution sd = s;
  sd.a[0] = 1;
  Snapshot dsnap = string_solution_eval(sd, g, 0.15);
  CHECK(selfduality_residual(dsnap.x, dsnap.xdot) < 1e-10);
  Vector7d p = string_momentum(Vector7d(sd.a.cast<double>()),
                               Vector7d(sd.b.cast<double>()));
  CHECK((p + 2.0 * unit7(1)).cwiseAbs().maxCoeff() == 0.0);  // psi_213 = -1
  CHECK(dsnap.xdot.x[1].v(0, 0) - snap.xdot.x[1].v(0, 0) == doctest::Approx(2.0));

  // a general integer winding vector goes through the eigen-plane branch
  StringSolution sg;
  sg.b[0] = 1;
  sg.b[3] = 2;
  sg.b[5] = -1;
  sg.profiles[0].modes = {{1, {0.5, 0.0}}};
  sg.profiles[1].modes = {{2, {0.0, 0.3}}};
  Snapshot gsnap = string_solution_eval(sg, g, 0.1);
  CHECK(selfduality_residual(gsnap.x, gsnap.xdot) < 1e-10);
  CHECK(gauss_residual(gsnap.x, gsnap.xdot) < 1e-10);
}

TEST_CASE("axially symmetric sphere solution") {
  auto g = SurfaceGrid::sphere(32, 32);
  TodaSolution s;
  s.kappa = 1.0;
  s.t0 = 2.0;
  for (double t : {0.0, 0.9}) {
    Snapshot snap = toda_eval(s, g, t);
    CHECK(selfduality_residual(snap.x, snap.xdot) < 1e-9);
    CHECK(gauss_residual(snap.x, snap.xdot) < 1e-9);
    CHECK(toda_pde_residual(s, g, t) < 1e-9);
  }
  CHECK_THROWS_AS(toda_eval(s, g, 2.5), std::domain_error);
  // kappa scaling
  TodaSolution s2;
  s2.kappa = 0.7;
  s2.t0 = 1.5;
  CHECK(toda_pde_residual(s2, g, 0.4) < 1e-9);
  CHECK(selfduality_residual(toda_eval(s2, g, 0.4).x, toda_eval(s2, g, 0.4).xdot) < 1e-9);
}

TEST_CASE("collapsing sphere evaluation") {
  auto g = SurfaceGrid::sphere(16, 16);
  Snapshot snap = collapsing_sphere_eval(1.0, g, 0.25);
  CHECK(selfduality_residual(snap.x, snap.xdot) < 1e-11);
  const double r = 1.0 / 0.75;
  auto coords = sphere_coordinates(g);
  CHECK((snap.x.x[2].v - r * coords[2].v).abs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(collapsing_sphere_eval(1.0, g, 1.0), std::domain_error);
}
