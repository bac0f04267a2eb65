#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace membrane {

using Matrix7d = Eigen::Matrix<double, 7, 7>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;
using Matrix16d = Eigen::Matrix<double, 16, 16>;
using Vector7d = Eigen::Matrix<double, 7, 1>;

// Oriented index triples (1-based) carrying the +1 entries of the totally
// antisymmetric cross-product tensor on R^7.
inline constexpr std::array<std::array<int, 3>, 7> kOrientedTriples{
    {{1, 2, 3}, {2, 4, 6}, {4, 3, 5}, {3, 6, 7}, {6, 5, 1}, {5, 7, 2}, {7, 1, 4}}};

// Exact integer tables for the rank-3 tensor psi, its dual 4-form phi
//   phi_ijlm = sum_k psi_ijk psi_lmk - d_il d_jm + d_im d_jl
// and the projector family X(u) = Delta + (u/4) phi. All indices 0-based.
class StructureConstants {
 public:
  StructureConstants();

  int psi(int i, int j, int k) const { return psi_[(i * 7 + j) * 7 + k]; }
  int phi(int i, int j, int k, int l) const {
    return phi_[((i * 7 + j) * 7 + k) * 7 + l];
  }

  // 4 X^{ij}_{kl}(u) = 2 (d_ik d_jl - d_il d_jk) + u phi_ijkl.
  // Integer-exact for integer u.
  long x4(int i, int j, int k, int l, long u) const {
    long delta = 2 * (long((i == k) && (j == l)) - long((i == l) && (j == k)));
    return delta + u * phi(i, j, k, l);
  }

  // Copy with one psi entry overwritten and phi left as originally built;
  // exists so the identity suite can demonstrate sensitivity to corruption.
  StructureConstants with_psi_entry(int i, int j, int k, int value) const;

 private:
  std::array<std::int8_t, 343> psi_{};
  std::array<std::int8_t, 2401> phi_{};
};

// Shared immutable instance; the tables are fixed once and for all.
const StructureConstants& structure_constants();

// X(u) with real parameter u: X^{ij}_{kl}(u) = Delta^{ij}_{kl} + (u/4) phi_ijkl,
// Delta^{ij}_{kl} = (d_ik d_jl - d_il d_jk)/2.
class XTensor {
 public:
  XTensor(const StructureConstants& sc, double u) : sc_(&sc), u_(u) {}
  double u() const { return u_; }
  double operator()(int i, int j, int k, int l) const {
    double delta = 0.5 * (double((i == k) && (j == l)) - double((i == l) && (j == k)));
    return delta + 0.25 * u_ * sc_->phi(i, j, k, l);
  }

 private:
  const StructureConstants* sc_;
  double u_;
};

// Octonion x0 + x_i e_i over the same triple table.
struct Octonion {
  double x0 = 0.0;
  Vector7d xi = Vector7d::Zero();

  // unit(0) = 1, unit(1..7) = imaginary units.
  static Octonion unit(int i);
  Octonion conjugate() const;
  double norm2() const;
};

Octonion operator+(const Octonion& a, const Octonion& b);
Octonion operator-(const Octonion& a, const Octonion& b);
Octonion operator*(double s, const Octonion& a);
Octonion operator*(const Octonion& a, const Octonion& b);

struct IdentityCheck {
  std::string name;
  bool pass = false;
  std::string violation;  // empty when pass; first offending index tuple otherwise
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool all_pass = false;
};

// Exact integer verification of the defining tensor identities:
//   (a) phi equals its bilinear psi-psi definition,
//   (b) psi_ijk X^{jk}_{lm}(-1) = 0,
//   (c) X(-1) X(2) = 0 under pair contraction,
//   (d) total antisymmetry of psi and phi.
IdentityReport verify_identity_suite(const StructureConstants& sc = structure_constants());

// Real 8x8 representation entering the fermionic sector:
//   (beta_n)^i_j = psi_inj, (beta_n)^i_8 = +d_in, (beta_n)^8_j = -d_nj.
// Antisymmetric, beta_m beta_n + beta_n beta_m = -2 d_mn, beta_1...beta_7 = -1.
// The 16x16 gamma blocks are assembled from them.
struct BetaMatrices {
  std::array<Matrix8d, 7> beta;
  std::array<Matrix16d, 7> gamma;  // gamma_n = [[0, beta_n], [-beta_n, 0]]
  Matrix16d gamma8;                // [[0, 1], [-1, 0]]
  Matrix16d gamma9;                // diag(1, -1)
};

// Throws std::runtime_error if the built family fails the Clifford relations
// or the ordered product beta_1..beta_7 = -identity (both exact in integers).
BetaMatrices build_beta_matrices(const StructureConstants& sc = structure_constants());

// Basis of the 14-dimensional stabilizer algebra of psi inside so(7):
// antisymmetric A with psi_ljk A_li + psi_ilk A_lj + psi_ijl A_lk = 0.
// Throws std::runtime_error if the computed dimension is not 14.
std::vector<Matrix7d> g2_algebra_basis(const StructureConstants& sc = structure_constants());

// Max-abs residual of psi-invariance in the two-rotation form
//   psi_ijk R_lk = psi_mnl R_mi R_nj
// plus the orthogonality defect; both must vanish on the stabilizer group.
double g2_invariance_residual(const Matrix7d& r,
                              const StructureConstants& sc = structure_constants());

bool g2_membership(const Matrix7d& r, double tol = 1e-10,
                   const StructureConstants& sc = structure_constants());

// exp(sum c_a B_a) for a seeded random coefficient vector; exact group element.
Matrix7d random_g2(std::mt19937_64& rng,
                   const StructureConstants& sc = structure_constants());

// Deterministic standard normal from raw engine bits (Box-Muller); used instead
// of std::normal_distribution so that seeded runs are reproducible across
// standard libraries.
double standard_normal(std::mt19937_64& rng);

}  // namespace membrane
