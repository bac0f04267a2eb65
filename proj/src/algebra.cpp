#include "membrane/algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace membrane {

StructureConstants::StructureConstants() {
  for (const auto& t : kOrientedTriples) {
    const int i = t[0] - 1, j = t[1] - 1, k = t[2] - 1;
    // all six permutations with their signs
    const int per[6][4] = {{i, j, k, 1}, {j, k, i, 1}, {k, i, j, 1},
                           {j, i, k, -1}, {i, k, j, -1}, {k, j, i, -1}};
    for (const auto& p : per) psi_[(p[0] * 7 + p[1]) * 7 + p[2]] = std::int8_t(p[3]);
  }
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int l = 0; l < 7; ++l)
        for (int m = 0; m < 7; ++m) {
          int s = 0;
          for (int k = 0; k < 7; ++k) s += psi(i, j, k) * psi(l, m, k);
          s += -int((i == l) && (j == m)) + int((i == m) && (j == l));
          phi_[((i * 7 + j) * 7 + l) * 7 + m] = std::int8_t(s);
        }
}

StructureConstants StructureConstants::with_psi_entry(int i, int j, int k,
                                                      int value) const {
  StructureConstants sc = *this;
  sc.psi_[(i * 7 + j) * 7 + k] = std::int8_t(value);
  return sc;
}

const StructureConstants& structure_constants() {
  static const StructureConstants sc;
  return sc;
}

Octonion Octonion::unit(int i) {
  Octonion o;
  if (i == 0)
    o.x0 = 1.0;
  else
    o.xi[i - 1] = 1.0;
  return o;
}

Octonion Octonion::conjugate() const {
  Octonion o;
  o.x0 = x0;
  o.xi = -xi;
  return o;
}

double Octonion::norm2() const { return x0 * x0 + xi.squaredNorm(); }

Octonion operator+(const Octonion& a, const Octonion& b) {
  Octonion o;
  o.x0 = a.x0 + b.x0;
  o.xi = a.xi + b.xi;
  return o;
}

Octonion operator-(const Octonion& a, const Octonion& b) {
  Octonion o;
  o.x0 = a.x0 - b.x0;
  o.xi = a.xi - b.xi;
  return o;
}

Octonion operator*(double s, const Octonion& a) {
  Octonion o;
  o.x0 = s * a.x0;
  o.xi = s * a.xi;
  return o;
}

Octonion operator*(const Octonion& a, const Octonion& b) {
  const auto& sc = structure_constants();
  Octonion o;
  o.x0 = a.x0 * b.x0 - a.xi.dot(b.xi);
  o.xi = a.x0 * b.xi + b.x0 * a.xi;
  for (int k = 0; k < 7; ++k) {
    double s = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) s += sc.psi(i, j, k) * a.xi[i] * b.xi[j];
    o.xi[k] += s;
  }
  return o;
}

namespace {

std::string tuple_msg(std::initializer_list<int> idx, long got, long want) {
  std::ostringstream os;
  os << "indices (0-based) (";
  bool first = true;
  for (int v : idx) {
    if (!first) os << ",";
    os << v;
    first = false;
  }
  os << "): got " << got << ", expected " << want;
  return os.str();
}

}  // namespace

IdentityReport verify_identity_suite(const StructureConstants& sc) {
  IdentityReport rep;

  {
    IdentityCheck c{"dual-4-form-definition", true, ""};
    for (int i = 0; i < 7 && c.pass; ++i)
      for (int j = 0; j < 7 && c.pass; ++j)
        for (int l = 0; l < 7 && c.pass; ++l)
          for (int m = 0; m < 7 && c.pass; ++m) {
            int s = -int((i == l) && (j == m)) + int((i == m) && (j == l));
            for (int k = 0; k < 7; ++k) s += sc.psi(i, j, k) * sc.psi(l, m, k);
            if (s != sc.phi(i, j, l, m)) {
              c.pass = false;
              c.violation = tuple_msg({i, j, l, m}, sc.phi(i, j, l, m), s);
            }
          }
    rep.checks.push_back(c);
  }

  {
    IdentityCheck c{"psi-contract-x(-1)", true, ""};
    for (int i = 0; i < 7 && c.pass; ++i)
      for (int l = 0; l < 7 && c.pass; ++l)
        for (int m = 0; m < 7 && c.pass; ++m) {
          long s = 0;
          for (int j = 0; j < 7; ++j)
            for (int k = 0; k < 7; ++k) s += sc.psi(i, j, k) * sc.x4(j, k, l, m, -1);
          if (s != 0) {
            c.pass = false;
            c.violation = tuple_msg({i, l, m}, s, 0);
          }
        }
    rep.checks.push_back(c);
  }

  {
    IdentityCheck c{"x(-1)-x(2)-orthogonality", true, ""};
    for (int i = 0; i < 7 && c.pass; ++i)
      for (int j = 0; j < 7 && c.pass; ++j)
        for (int k = 0; k < 7 && c.pass; ++k)
          for (int l = 0; l < 7 && c.pass; ++l) {
            long s = 0;
            for (int m = 0; m < 7; ++m)
              for (int n = 0; n < 7; ++n)
                s += sc.x4(i, j, m, n, -1) * sc.x4(m, n, k, l, 2);
            // pair contraction carries a 1/2 against double counting; exactness
            // of s = 0 is unaffected by the factor.
            if (s != 0) {
              c.pass = false;
              c.violation = tuple_msg({i, j, k, l}, s, 0);
            }
          }
    rep.checks.push_back(c);
  }

  {
    IdentityCheck c{"total-antisymmetry", true, ""};
    for (int i = 0; i < 7 && c.pass; ++i)
      for (int j = 0; j < 7 && c.pass; ++j)
        for (int k = 0; k < 7 && c.pass; ++k) {
          if (sc.psi(i, j, k) != -sc.psi(j, i, k) || sc.psi(i, j, k) != -sc.psi(i, k, j)) {
            c.pass = false;
            c.violation = tuple_msg({i, j, k}, sc.psi(i, j, k), -sc.psi(j, i, k));
            break;
          }
        }
    for (int i = 0; i < 7 && c.pass; ++i)
      for (int j = 0; j < 7 && c.pass; ++j)
        for (int k = 0; k < 7 && c.pass; ++k)
          for (int l = 0; l < 7 && c.pass; ++l) {
            if (sc.phi(i, j, k, l) != -sc.phi(j, i, k, l) ||
                sc.phi(i, j, k, l) != -sc.phi(i, k, j, l) ||
                sc.phi(i, j, k, l) != -sc.phi(i, j, l, k)) {
              c.pass = false;
              c.violation = tuple_msg({i, j, k, l}, sc.phi(i, j, k, l), 0);
            }
          }
    rep.checks.push_back(c);
  }

  rep.all_pass = true;
  for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

BetaMatrices build_beta_matrices(const StructureConstants& sc) {
  BetaMatrices bm;
  for (int n = 0; n < 7; ++n) {
    Matrix8d b = Matrix8d::Zero();
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) b(i, j) = sc.psi(i, n, j);
    b(n, 7) = 1.0;
    b(7, n) = -1.0;
    bm.beta[n] = b;
  }

  // Clifford relations and the ordered product are exact in integer arithmetic.
  for (int m = 0; m < 7; ++m)
    for (int n = 0; n < 7; ++n) {
      Matrix8d anti = bm.beta[m] * bm.beta[n] + bm.beta[n] * bm.beta[m];
      Matrix8d want = (m == n) ? Matrix8d(-2.0 * Matrix8d::Identity()) : Matrix8d(Matrix8d::Zero());
      if (((anti - want).cwiseAbs().maxCoeff() != 0.0))
        throw std::runtime_error("beta Clifford relation violated");
    }
  Matrix8d prod = Matrix8d::Identity();
  for (int n = 0; n < 7; ++n) prod = prod * bm.beta[n];
  if (((prod + Matrix8d::Identity()).cwiseAbs().maxCoeff() != 0.0))
    throw std::runtime_error("beta ordered product is not -identity");

  for (int n = 0; n < 7; ++n) {
    Matrix16d g = Matrix16d::Zero();
    g.block<8, 8>(0, 8) = bm.beta[n];
    g.block<8, 8>(8, 0) = -bm.beta[n];
    bm.gamma[n] = g;
  }
  bm.gamma8 = Matrix16d::Zero();
  bm.gamma8.block<8, 8>(0, 8) = Matrix8d::Identity();
  bm.gamma8.block<8, 8>(8, 0) = -Matrix8d::Identity();
  bm.gamma9 = Matrix16d::Identity();
  bm.gamma9.block<8, 8>(8, 8) = -Matrix8d::Identity();
  return bm;
}

std::vector<Matrix7d> g2_algebra_basis(const StructureConstants& sc) {
  // Parametrize antisymmetric A by its 21 upper-triangle entries and demand
  //   psi_ljk A_li + psi_ilk A_lj + psi_ijl A_lk = 0  for all i<j<k.
  std::vector<std::pair<int, int>> pairs;
  for (int r = 0; r < 7; ++r)
    for (int s = r + 1; s < 7; ++s) pairs.emplace_back(r, s);

  Eigen::MatrixXd con(35, 21);
  int row = 0;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      for (int k = j + 1; k < 7; ++k) {
        for (int p = 0; p < 21; ++p) {
          auto [r, s] = pairs[p];
          Matrix7d a = Matrix7d::Zero();
          a(r, s) = 1.0;
          a(s, r) = -1.0;
          double v = 0.0;
          for (int l = 0; l < 7; ++l)
            v += sc.psi(l, j, k) * a(l, i) + sc.psi(i, l, k) * a(l, j) +
                 sc.psi(i, j, l) * a(l, k);
          con(row, p) = v;
        }
        ++row;
      }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(con, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cut = 1e-10 * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  int dim = 21 - rank;
  if (dim != 14) throw std::runtime_error("stabilizer algebra dimension != 14");

  std::vector<Matrix7d> basis;
  for (int c = rank; c < 21; ++c) {
    Matrix7d a = Matrix7d::Zero();
    for (int p = 0; p < 21; ++p) {
      auto [r, s] = pairs[p];
      a(r, s) = svd.matrixV()(p, c);
      a(s, r) = -svd.matrixV()(p, c);
    }
    basis.push_back(a);
  }
  return basis;
}

double g2_invariance_residual(const Matrix7d& r, const StructureConstants& sc) {
  double res = (r.transpose() * r - Matrix7d::Identity()).cwiseAbs().maxCoeff();
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int l = 0; l < 7; ++l) {
        double lhs = 0.0, rhs = 0.0;
        for (int k = 0; k < 7; ++k) lhs += sc.psi(i, j, k) * r(l, k);
        for (int m = 0; m < 7; ++m)
          for (int n = 0; n < 7; ++n) rhs += sc.psi(m, n, l) * r(m, i) * r(n, j);
        res = std::max(res, std::abs(lhs - rhs));
      }
  return res;
}

bool g2_membership(const Matrix7d& r, double tol, const StructureConstants& sc) {
  return g2_invariance_residual(r, sc) <= tol;
}

double standard_normal(std::mt19937_64& rng) {
  // 53-bit uniforms in (0,1]; Box-Muller cosine branch.
  double u1 = (double(rng() >> 11) + 1.0) * 0x1p-53;
  double u2 = (double(rng() >> 11) + 0.5) * 0x1p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Matrix7d random_g2(std::mt19937_64& rng, const StructureConstants& sc) {
  static const std::vector<Matrix7d> basis = g2_algebra_basis(structure_constants());
  const auto& b = (&sc == &structure_constants()) ? basis : g2_algebra_basis(sc);
  Matrix7d a = Matrix7d::Zero();
  for (const auto& e : b) a += 0.35 * standard_normal(rng) * e;
  return a.exp();
}

}  // namespace membrane
