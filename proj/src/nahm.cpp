#include "membrane/nahm.hpp"

#include <cmath>

namespace membrane {

Matrix7d factorized_rhs(const Matrix7d& z, const StructureConstants& sc) {
  Matrix7d out = Matrix7d::Zero();
  for (int i = 0; i < 7; ++i)
    for (int k = 0; k < 7; ++k)
      for (int l = 0; l < 7; ++l) {
        int p1 = sc.psi(i, k, l);
        if (p1 == 0) continue;
        for (int j = 0; j < 7; ++j)
          for (int m = 0; m < 7; ++m)
            for (int n = 0; n < 7; ++n) {
              int p2 = sc.psi(j, m, n);
              if (p2 == 0) continue;
              out(i, j) += (p1 * p2 / 6.0) * z(k, m) * z(l, n);
            }
      }
  return out;
}

Vector7d diagonal_rhs(const Vector7d& r, const StructureConstants& sc) {
  Vector7d out = Vector7d::Zero();
  for (int i = 0; i < 7; ++i)
    for (int k = 0; k < 7; ++k)
      for (int l = k + 1; l < 7; ++l) {
        int p = sc.psi(i, k, l);
        if (p != 0) out[i] += (1.0 / 3.0) * r[k] * r[l];
      }
  return out;
}

FactorizedState evolve_factorized(FactorizedState st, double dt, long steps,
                                  double blowup_threshold,
                                  const StructureConstants& sc) {
  for (long n = 0; n < steps; ++n) {
    Matrix7d k1 = factorized_rhs(st.z, sc);
    Matrix7d k2 = factorized_rhs(st.z + 0.5 * dt * k1, sc);
    Matrix7d k3 = factorized_rhs(st.z + 0.5 * dt * k2, sc);
    Matrix7d k4 = factorized_rhs(st.z + dt * k3, sc);
    st.z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    st.t += dt;
    ++st.step;
    double m = st.z.cwiseAbs().maxCoeff();
    if (!std::isfinite(m) || m > blowup_threshold) {
      st.blown_up = true;
      break;
    }
  }
  return st;
}

DiagonalState evolve_diagonal(DiagonalState st, double dt, long steps,
                              double blowup_threshold, const StructureConstants& sc) {
  for (long n = 0; n < steps; ++n) {
    Vector7d k1 = diagonal_rhs(st.r, sc);
    Vector7d k2 = diagonal_rhs(st.r + 0.5 * dt * k1, sc);
    Vector7d k3 = diagonal_rhs(st.r + 0.5 * dt * k2, sc);
    Vector7d k4 = diagonal_rhs(st.r + dt * k3, sc);
    st.r += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    st.t += dt;
    ++st.step;
    double m = st.r.cwiseAbs().maxCoeff();
    if (!std::isfinite(m) || m > blowup_threshold) {
      st.blown_up = true;
      break;
    }
  }
  return st;
}

double ansatz_residual(const Matrix7d& z, const StructureConstants& sc) {
  Matrix7d dz = factorized_rhs(z, sc);
  double res = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int l = 0; l < 7; ++l)
      for (int n = 0; n < 7; ++n) {
        double lhs = 0.0, rhs = 0.0;
        for (int m = 0; m < 7; ++m)
          if (sc.psi(m, l, n) != 0) lhs += dz(i, m) * sc.psi(m, l, n);
        for (int j = 0; j < 7; ++j)
          for (int k = 0; k < 7; ++k)
            if (sc.psi(i, j, k) != 0) rhs += sc.psi(i, j, k) * z(j, l) * z(k, n);
        res = std::max(res, std::abs(lhs - rhs));
      }
  return res;
}

double f_equation_residual(const FieldConfiguration& f, const StructureConstants& sc) {
  FieldConfiguration rhs = selfdual_rhs(f, sc);
  double res = 0.0;
  for (int i = 0; i < f.d; ++i)
    res = std::max(res, (f.x[i].v - rhs.x[i].v).abs().maxCoeff());
  return res;
}

}  // namespace membrane
