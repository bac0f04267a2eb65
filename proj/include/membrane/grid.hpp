#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace membrane {

enum class Topology { sphere, torus };

// Spherical-harmonic coefficients of a real field, nonnegative azimuthal
// orders only; c[m](l-m) multiplies the orthonormal basis function with
// Condon-Shortley phase. Negative orders follow from reality.
struct SphereCoefficients {
  int L = 0;  // highest degree
  int M = 0;  // highest azimuthal order
  std::vector<Eigen::VectorXcd> c;
};

// Collocation grid with precomputed spectral tables.
//
// sphere: rows follow Gauss-Legendre nodes in x = cos(theta) (this is the
//   first surface coordinate), columns follow uniform azimuth phi. Derivatives
//   are evaluated through a spherical-harmonic transform: analysis is exact
//   for data band-limited to degree <= n1-1, so brackets of low-band fields
//   are spectrally exact.
// torus: uniform periodic nodes in both angles, differentiation by the
//   standard cotangent matrices, products guarded by 2/3-rule dealiasing.
class SurfaceGrid {
 public:
  static std::shared_ptr<const SurfaceGrid> sphere(int n1, int n2);
  static std::shared_ptr<const SurfaceGrid> torus(int n1, int n2);

  Topology topology = Topology::sphere;
  int n1 = 0, n2 = 0;
  Eigen::VectorXd nodes1;    // sphere: x_i ascending; torus: angle
  Eigen::VectorXd nodes2;    // azimuth / second angle
  Eigen::VectorXd weights1;  // sphere: GL weights; torus: 2*pi/n1
  int lmax = 0;              // sphere: degree capacity; torus: |k| capacity

  double area() const;
  double cell2() const;  // azimuth step

  // partial derivatives with respect to the surface coordinates
  // (sphere: sigma1 = cos(theta), sigma2 = phi)
  Eigen::ArrayXXd d1(const Eigen::ArrayXXd& f) const;
  Eigen::ArrayXXd d2(const Eigen::ArrayXXd& f) const;
  // {f,g} = d2(f) d1(g) - d2(g) d1(f)
  Eigen::ArrayXXd bracket(const Eigen::ArrayXXd& f, const Eigen::ArrayXXd& g) const;
  double integrate(const Eigen::ArrayXXd& f) const;

  // sphere only
  SphereCoefficients analyze(const Eigen::ArrayXXd& f) const;
  // deriv: 0 value, 1 d/dx, 2 d/dphi
  Eigen::ArrayXXd synthesize(const SphereCoefficients& co, int deriv = 0) const;

  // torus only: band projection used around products
  Eigen::ArrayXXd dealias(const Eigen::ArrayXXd& f) const;

 private:
  SurfaceGrid() = default;

  // sphere tables, one block per azimuthal order m = 0..M
  std::vector<Eigen::MatrixXd> plm_;   // n1 x (L-m+1)
  std::vector<Eigen::MatrixXd> dplm_;  // derivative tables
  Eigen::MatrixXd cosm_, sinm_;        // (M+1) x n2

  // torus tables
  Eigen::MatrixXd diff1_, diff2_;      // cotangent differentiation
  Eigen::MatrixXd proj1_, proj2_;      // dealiasing circulants
};

// Gauss-Legendre nodes (ascending) and weights on (-1, 1).
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w);

// Orthonormal associated Legendre values P_l^m(x) for l = m..L (row index
// l-m), Condon-Shortley phase included; and the x-derivative table.
Eigen::MatrixXd legendre_table(int L, int m, const Eigen::VectorXd& x);
Eigen::MatrixXd legendre_deriv_table(int L, int m, const Eigen::VectorXd& x);

}  // namespace membrane
