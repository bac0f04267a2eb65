#pragma once

#include "membrane/flow.hpp"

#include <array>
#include <complex>
#include <vector>

namespace membrane {

// Configuration with its velocity at a fixed time.
struct Snapshot {
  FieldConfiguration x, xdot;
  double t = 0.0;
};

// Drift momentum of a doubly wound configuration: P_i = psi_ijk A_j B_k.
Vector7d string_momentum(const Vector7d& a, const Vector7d& b,
                         const StructureConstants& sc = structure_constants());

// M_ij = psi_ijk B_k together with its spectral data. M is antisymmetric with
// M^2 = -|B|^2 (1 - BB^T/|B|^2): a kernel along B and three invariant planes
// rotating at rate |B|; the stored plane vectors satisfy M c = -i |B| c.
struct VelocityMatrix {
  Matrix7d m = Matrix7d::Zero();
  double omega = 0.0;
  Vector7d kernel = Vector7d::Zero();
  std::array<Eigen::Matrix<std::complex<double>, 7, 1>, 3> planes;
};
VelocityMatrix m_matrix(const Vector7d& b,
                        const StructureConstants& sc = structure_constants());

// Finite Fourier profile sum_k c_k e^{i k w} in one invariant plane,
// w = s1 + i |B| t.
struct PlaneProfile {
  std::vector<std::pair<int, std::complex<double>>> modes;
  std::complex<double> eval(std::complex<double> w) const;
  std::complex<double> deriv(std::complex<double> w) const;
};

// Doubly wound solution X = A s1 + B s2 - P t + sum_n Re[F_n(w) c_n] with the
// plane vectors c_n attached to B. For winding along the third axis the
// planes are the coordinate pairs (1,2), (5,4), (6,7) in that order.
struct StringSolution {
  Eigen::Matrix<long, 7, 1> a = Eigen::Matrix<long, 7, 1>::Zero();
  Eigen::Matrix<long, 7, 1> b = Eigen::Matrix<long, 7, 1>::Zero();
  std::array<PlaneProfile, 3> profiles;
};
Snapshot string_solution_eval(const StringSolution& s,
                              std::shared_ptr<const SurfaceGrid> g, double t,
                              const StructureConstants& sc = structure_constants());

// Axially symmetric three-component solution on the sphere with a finite-time
// singularity at t0:
//   X1 + i X2 = R e^{i phi}, X3 = z,
//   R = kappa sin(theta)/sinh(kappa (t0 - t)),
//   z  = kappa coth(kappa (t0 - t)) cos(theta).
struct TodaSolution {
  double kappa = 1.0;
  double t0 = 1.0;
};
Snapshot toda_eval(const TodaSolution& s, std::shared_ptr<const SurfaceGrid> g,
                   double t);

// Residual of the reduced radial system
//   dR/dt = R d1(z),  dz/dt = -(1/2) d1(R^2)
// with analytic time derivatives and spectral d1; max-abs over the grid.
double toda_pde_residual(const TodaSolution& s,
                         std::shared_ptr<const SurfaceGrid> g, double t);

// X = r(t) (sin t cos p, sin t sin p, cos t), r = r0/(1 - r0 t).
Snapshot collapsing_sphere_eval(double r0, std::shared_ptr<const SurfaceGrid> g,
                                double t);

}  // namespace membrane
