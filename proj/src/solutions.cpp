#include "membrane/solutions.hpp"

#include <cmath>
#include <stdexcept>

namespace membrane {

Vector7d string_momentum(const Vector7d& a, const Vector7d& b,
                         const StructureConstants& sc) {
  Vector7d p = Vector7d::Zero();
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int k = 0; k < 7; ++k)
        if (sc.psi(i, j, k) != 0) p[i] += sc.psi(i, j, k) * a[j] * b[k];
  return p;
}

VelocityMatrix m_matrix(const Vector7d& b, const StructureConstants& sc) {
  VelocityMatrix vm;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      double s = 0.0;
      for (int k = 0; k < 7; ++k)
        if (sc.psi(i, j, k) != 0) s += sc.psi(i, j, k) * b[k];
      vm.m(i, j) = s;
    }
  vm.omega = b.norm();
  if (vm.omega == 0.0) throw std::invalid_argument("m_matrix: zero winding");
  vm.kernel = b / vm.omega;

  using C = std::complex<double>;
  const C iu(0.0, 1.0);
  if (b.cwiseAbs().maxCoeff() == std::abs(b[2]) && std::abs(b[2]) == vm.omega) {
    // winding along the third axis: coordinate planes, fixed order
    auto unit = [](int i) {
      Eigen::Matrix<C, 7, 1> e = Eigen::Matrix<C, 7, 1>::Zero();
      e(i) = 1.0;
      return e;
    };
    double s = b[2] > 0 ? 1.0 : -1.0;  // flip is conjugation for reversed B
    vm.planes[0] = unit(0) - s * iu * unit(1);
    vm.planes[1] = unit(4) - s * iu * unit(3);
    vm.planes[2] = unit(5) - s * iu * unit(6);
  } else {
    Eigen::MatrixXcd h = iu * vm.m.cast<C>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    // eigenvalues ascending; the +|B| triple sits in the last three columns
    for (int n = 0; n < 3; ++n) {
      Eigen::VectorXcd c = es.eigenvectors().col(4 + n);
      vm.planes[n] = std::sqrt(2.0) * c;  // match |c|^2 = 2 of the unit pairs
    }
  }
  for (const auto& c : vm.planes) {
    Eigen::Matrix<C, 7, 1> res = vm.m.cast<C>() * c + iu * vm.omega * c;
    if (res.cwiseAbs().maxCoeff() > 1e-10 * vm.omega)
      throw std::runtime_error("m_matrix: invariant plane construction failed");
  }
  return vm;
}

std::complex<double> PlaneProfile::eval(std::complex<double> w) const {
  std::complex<double> s = 0.0;
  const std::complex<double> iu(0.0, 1.0);
  for (const auto& [k, c] : modes) s += c * std::exp(iu * double(k) * w);
  return s;
}

std::complex<double> PlaneProfile::deriv(std::complex<double> w) const {
  std::complex<double> s = 0.0;
  const std::complex<double> iu(0.0, 1.0);
  for (const auto& [k, c] : modes) s += c * iu * double(k) * std::exp(iu * double(k) * w);
  return s;
}

Snapshot string_solution_eval(const StringSolution& s,
                              std::shared_ptr<const SurfaceGrid> g, double t,
                              const StructureConstants& sc) {
  if (g->topology != Topology::torus)
    throw std::invalid_argument("string solutions live on the torus");
  Vector7d a = s.a.cast<double>(), b = s.b.cast<double>();
  VelocityMatrix vm = m_matrix(b, sc);
  Vector7d p = string_momentum(a, b, sc);

  Snapshot snap;
  snap.t = t;
  snap.x = FieldConfiguration::zero(g, 7);
  snap.x.has_winding = true;
  snap.x.wind1 = a;
  snap.x.wind2 = b;
  snap.xdot = FieldConfiguration::zero(g, 7);

  const std::complex<double> iu(0.0, 1.0);
  for (int i = 0; i < 7; ++i) {
    snap.x.x[i].v = -p[i] * t;
    snap.xdot.x[i].v = -p[i];
  }
  for (int n = 0; n < 3; ++n) {
    if (s.profiles[n].modes.empty()) continue;
    for (int r = 0; r < g->n1; ++r) {
      std::complex<double> w(g->nodes1[r], vm.omega * t);
      std::complex<double> f = s.profiles[n].eval(w);
      std::complex<double> fd = iu * vm.omega * s.profiles[n].deriv(w);
      for (int i = 0; i < 7; ++i) {
        double xv = (f * vm.planes[n](i)).real();
        double vv = (fd * vm.planes[n](i)).real();
        for (int c = 0; c < g->n2; ++c) {
          snap.x.x[i].v(r, c) += xv;
          snap.xdot.x[i].v(r, c) += vv;
        }
      }
    }
  }
  return snap;
}

namespace {

void toda_radial(const TodaSolution& s, double t, double x, double& r, double& z,
                 double& rdot, double& zdot) {
  const double u = s.kappa * (s.t0 - t);
  if (u <= 0.0) throw std::domain_error("toda_eval: t must precede t0");
  const double sh = std::sinh(u), ch = std::cosh(u);
  const double st = std::sqrt(std::max(0.0, 1.0 - x * x));
  r = s.kappa * st / sh;
  z = s.kappa * (ch / sh) * x;
  rdot = s.kappa * s.kappa * st * ch / (sh * sh);
  zdot = s.kappa * s.kappa * x / (sh * sh);
}

}  // namespace

Snapshot toda_eval(const TodaSolution& s, std::shared_ptr<const SurfaceGrid> g,
                   double t) {
  if (g->topology != Topology::sphere)
    throw std::invalid_argument("toda_eval: sphere grids only");
  Snapshot snap;
  snap.t = t;
  snap.x = FieldConfiguration::zero(g, 3);
  snap.xdot = FieldConfiguration::zero(g, 3);
  for (int i = 0; i < g->n1; ++i) {
    double r, z, rdot, zdot;
    toda_radial(s, t, g->nodes1[i], r, z, rdot, zdot);
    for (int j = 0; j < g->n2; ++j) {
      const double cp = std::cos(g->nodes2[j]), sp = std::sin(g->nodes2[j]);
      snap.x.x[0].v(i, j) = r * cp;
      snap.x.x[1].v(i, j) = r * sp;
      snap.x.x[2].v(i, j) = z;
      snap.xdot.x[0].v(i, j) = rdot * cp;
      snap.xdot.x[1].v(i, j) = rdot * sp;
      snap.xdot.x[2].v(i, j) = zdot;
    }
  }
  return snap;
}

double toda_pde_residual(const TodaSolution& s,
                         std::shared_ptr<const SurfaceGrid> g, double t) {
  Eigen::ArrayXXd r2(g->n1, g->n2), zf(g->n1, g->n2), rf(g->n1, g->n2);
  Eigen::ArrayXXd rdot(g->n1, g->n2), zdot(g->n1, g->n2);
  for (int i = 0; i < g->n1; ++i) {
    double r, z, rd, zd;
    toda_radial(s, t, g->nodes1[i], r, z, rd, zd);
    for (int j = 0; j < g->n2; ++j) {
      r2(i, j) = r * r;
      rf(i, j) = r;
      zf(i, j) = z;
      rdot(i, j) = rd;
      zdot(i, j) = zd;
    }
  }
  double res_z = (zdot + 0.5 * g->d1(r2)).abs().maxCoeff();
  double res_r = (rdot - rf * g->d1(zf)).abs().maxCoeff();
  return std::max(res_z, res_r);
}

Snapshot collapsing_sphere_eval(double r0, std::shared_ptr<const SurfaceGrid> g,
                                double t) {
  const double denom = 1.0 - r0 * t;
  if (denom <= 0.0) throw std::domain_error("collapsing_sphere_eval: past the pole");
  const double r = r0 / denom;
  auto coords = sphere_coordinates(g);
  Snapshot snap;
  snap.t = t;
  snap.x = FieldConfiguration::zero(g, 3);
  snap.xdot = FieldConfiguration::zero(g, 3);
  for (int i = 0; i < 3; ++i) {
    snap.x.x[i].v = r * coords[i].v;
    snap.xdot.x[i].v = r * r * coords[i].v;
  }
  return snap;
}

}  // namespace membrane
