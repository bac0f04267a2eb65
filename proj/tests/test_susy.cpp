#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "membrane/susy.hpp"

#include <cmath>

using namespace membrane;

namespace {

Snapshot random_selfdual_snapshot(std::shared_ptr<const SurfaceGrid> g, int d,
                                  std::uint64_t seed, double amp) {
  std::mt19937_64 rng(seed);
  Snapshot snap;
  snap.x = FieldConfiguration::zero(g, d);
  for (int i = 0; i < d; ++i) snap.x.x[i] = random_band_limited(g, 2, rng, amp);
  snap.xdot = selfdual_rhs(snap.x);
  return snap;
}

}  // namespace

TEST_CASE("three-component collapse keeps eight parameters") {
  auto g = SurfaceGrid::sphere(16, 16);
  Snapshot snap = collapsing_sphere_eval(1.0, g, 0.2);
  SusyOperator op = build_susy_operator(snap);
  SusyReport rep = count_preserved_susy(op);
  CHECK(rep.kernel_plus == 4);
  CHECK(rep.kernel_minus == 4);
  CHECK(rep.kernel_dim == 8);
  // clear spectral gap: the largest kernel value sits far below the cut
  CHECK(rep.svals_plus[0] > 1.0);
  CHECK(rep.svals_plus[4] < 1e-10 * rep.svals_plus[0]);
}

TEST_CASE("generic seven-component self-dual data keeps exactly one") {
  auto g = SurfaceGrid::sphere(16, 16);
  Snapshot snap = random_selfdual_snapshot(g, 7, 71, 0.4);
  SusyReport rep = count_preserved_susy(build_susy_operator(snap));
  CHECK(rep.kernel_plus == 0);
  CHECK(rep.kernel_minus == 1);
  CHECK(rep.kernel_dim == 1);
}

TEST_CASE("non-self-dual data keeps none") {
  auto g = SurfaceGrid::sphere(16, 16);
  std::mt19937_64 rng(73);
  Snapshot snap;
  snap.x = FieldConfiguration::zero(g, 7);
  snap.xdot = FieldConfiguration::zero(g, 7);
  for (int i = 0; i < 7; ++i) {
    snap.x.x[i] = random_band_limited(g, 2, rng, 0.4);
    snap.xdot.x[i] = random_band_limited(g, 2, rng, 0.4);
  }
  SusyReport rep = count_preserved_susy(build_susy_operator(snap));
  CHECK(rep.kernel_dim == 0);
}

TEST_CASE("last spinor direction is annihilated exactly on self-dual data") {
  auto g = SurfaceGrid::sphere(12, 12);
  Eigen::VectorXd e8 = Eigen::VectorXd::Zero(8);
  e8(7) = 1.0;
  for (std::uint64_t seed : {81ull, 82ull}) {
    Snapshot snap = random_selfdual_snapshot(g, 7, seed, 0.4);
    SusyOperator op = build_susy_operator(snap);
    double on = (op.sector_minus * e8).cwiseAbs().maxCoeff();
    CHECK(on < 1e-10);
    // breaking self-duality moves it away from the kernel
    snap.xdot.x[3].v += 0.1;
    SusyOperator bad = build_susy_operator(snap);
    CHECK((bad.sector_minus * e8).cwiseAbs().maxCoeff() > 0.05);
  }
}

TEST_CASE("counts are invariant under the stabilizer group") {
  auto g = SurfaceGrid::sphere(12, 12);
  Snapshot snap = random_selfdual_snapshot(g, 7, 91, 0.4);
  std::mt19937_64 rng(92);
  Matrix7d r = random_g2(rng);
  Snapshot rot;
  rot.x = apply_g2(r, snap.x);
  rot.xdot = apply_g2(r, snap.xdot);
  SusyReport a = count_preserved_susy(build_susy_operator(snap));
  SusyReport b = count_preserved_susy(build_susy_operator(rot));
  CHECK(a.kernel_plus == b.kernel_plus);
  CHECK(a.kernel_minus == b.kernel_minus);

  Snapshot coll = collapsing_sphere_eval(1.0, g, 0.1);
  Snapshot coll7;
  coll7.x = apply_g2(r, embed_in_seven(coll.x));
  coll7.xdot = apply_g2(r, embed_in_seven(coll.xdot));
  SusyReport c = count_preserved_susy(build_susy_operator(coll7));
  CHECK(c.kernel_dim == 8);
}

TEST_CASE("count degrades monotonically under growing noise") {
  auto g = SurfaceGrid::sphere(12, 12);
  Snapshot base = collapsing_sphere_eval(1.0, g, 0.1);
  int prev = 17;
  for (double eps : {0.0, 1e-6, 1e-3, 0.3}) {
    std::mt19937_64 rng(95);
    Snapshot noisy = base;
    for (int i = 0; i < 3; ++i)
      noisy.xdot.x[i].v += eps * random_band_limited(g, 3, rng, 1.0).v;
    // tolerance 1e-8 relative: eps below it keeps the count, above kills it
    SusyReport rep = count_preserved_susy(build_susy_operator(noisy));
    CHECK(rep.kernel_dim <= prev);
    prev = rep.kernel_dim;
  }
  CHECK(prev == 0);
}

TEST_CASE("doubly wound snapshots") {
  auto g = SurfaceGrid::torus(16, 16);
  // a single excited plane is three-component data in disguise: eight survive
  StringSolution s;
  s.b[2] = 1;
  s.profiles[0].modes = {{1, {1.0, 0.0}}};
  Snapshot snap = string_solution_eval(s, g, 0.0);
  SusyReport rep = count_preserved_susy(build_susy_operator(snap));
  CHECK(rep.kernel_dim == 8);
  Eigen::VectorXd e8 = Eigen::VectorXd::Zero(8);
  e8(7) = 1.0;
  CHECK((build_susy_operator(snap).sector_minus * e8).cwiseAbs().maxCoeff() < 1e-10);

  // all three planes excited: four survive (two per sector)
  StringSolution s3 = s;
  s3.profiles[1].modes = {{2, {0.0, 0.6}}};
  s3.profiles[2].modes = {{1, {0.3, 0.2}}};
  Snapshot snap3 = string_solution_eval(s3, g, 0.1);
  SusyReport rep3 = count_preserved_susy(build_susy_operator(snap3));
  CHECK(rep3.kernel_plus == 2);
  CHECK(rep3.kernel_minus == 2);
  CHECK(rep3.kernel_dim == 4);
  CHECK((build_susy_operator(snap3).sector_minus * e8).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("single-sector counting mode") {
  auto g = SurfaceGrid::sphere(12, 12);
  Snapshot snap = random_selfdual_snapshot(g, 7, 99, 0.4);
  SusyOperator op = build_susy_operator(snap);
  CHECK(count_preserved_susy(op, 1e-8, SusySector::minus).kernel_dim == 1);
  CHECK(count_preserved_susy(op, 1e-8, SusySector::plus).kernel_dim == 0);
}
