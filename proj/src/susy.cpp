#include "membrane/susy.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace membrane {

SusyOperator build_susy_operator(const Snapshot& snap, const StructureConstants& sc) {
  const Snapshot* use = &snap;
  Snapshot embedded;
  if (snap.x.d == 3) {
    embedded.x = embed_in_seven(snap.x);
    embedded.xdot = embed_in_seven(snap.xdot);
    embedded.t = snap.t;
    use = &embedded;
  }
  if (use->x.d != 7) throw std::invalid_argument("susy operator: d = 3 or 7");

  static const BetaMatrices bm = build_beta_matrices(structure_constants());
  // commutators [beta_m, beta_n] for m < n
  std::array<std::array<Matrix8d, 7>, 7> comm;
  for (int m = 0; m < 7; ++m)
    for (int n = m + 1; n < 7; ++n)
      comm[m][n] = bm.beta[m] * bm.beta[n] - bm.beta[n] * bm.beta[m];

  auto g = use->x.grid();
  const long nodes = long(g->n1) * g->n2;

  // all pair brackets once
  std::array<std::array<Eigen::ArrayXXd, 7>, 7> w;
  for (int m = 0; m < 7; ++m)
    for (int n = m + 1; n < 7; ++n) w[m][n] = component_bracket(use->x, m, n);

  SusyOperator op;
  op.nodes = nodes;
  op.convention =
      "O(chi) = chi v.beta + (1/4) W_mn [beta_m, beta_n]; chi = +1/-1 sectors; "
      "euclidean velocities; kernel per stacked sector";
  op.sector_plus.resize(8 * nodes, 8);
  op.sector_minus.resize(8 * nodes, 8);

  long row = 0;
  for (int i = 0; i < g->n1; ++i)
    for (int j = 0; j < g->n2; ++j, ++row) {
      Matrix8d vel = Matrix8d::Zero();
      for (int m = 0; m < 7; ++m) {
        double v = use->xdot.x[m].v(i, j);
        if (v != 0.0) vel += v * bm.beta[m];
      }
      Matrix8d wpart = Matrix8d::Zero();
      for (int m = 0; m < 7; ++m)
        for (int n = m + 1; n < 7; ++n) {
          double s = w[m][n](i, j);
          if (s != 0.0) wpart += 0.5 * s * comm[m][n];
        }
      op.sector_plus.block<8, 8>(8 * row, 0) = vel + wpart;
      op.sector_minus.block<8, 8>(8 * row, 0) = -vel + wpart;
    }
  return op;
}

namespace {

void sector_svals(const Eigen::MatrixXd& stack, std::array<double, 8>& out) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(stack);
  Eigen::VectorXd sv = svd.singularValues();
  for (int i = 0; i < 8; ++i) out[i] = (i < sv.size()) ? sv(i) : 0.0;
}

int kernel_count(const std::array<double, 8>& sv, double tol) {
  double cut = tol * std::max(sv[0], 1.0);
  int k = 0;
  for (double s : sv)
    if (s < cut) ++k;
  return k;
}

}  // namespace

SusyReport count_preserved_susy(const SusyOperator& op, double tol, SusySector sector) {
  SusyReport rep;
  rep.tol = tol;
  rep.convention = op.convention;
  sector_svals(op.sector_plus, rep.svals_plus);
  sector_svals(op.sector_minus, rep.svals_minus);
  rep.kernel_plus = kernel_count(rep.svals_plus, tol);
  rep.kernel_minus = kernel_count(rep.svals_minus, tol);
  switch (sector) {
    case SusySector::both:
      rep.kernel_dim = rep.kernel_plus + rep.kernel_minus;
      break;
    case SusySector::plus:
      rep.kernel_dim = rep.kernel_plus;
      break;
    case SusySector::minus:
      rep.kernel_dim = rep.kernel_minus;
      break;
  }
  return rep;
}

}  // namespace membrane
