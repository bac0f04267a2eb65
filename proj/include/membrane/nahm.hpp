#pragma once

#include "membrane/flow.hpp"

namespace membrane {

// Factorized matrix flow dZ_ij/dt = (1/6) psi_ikl psi_jmn Z_km Z_ln.
Matrix7d factorized_rhs(const Matrix7d& z,
                        const StructureConstants& sc = structure_constants());

// Restriction to diagonal Z = diag(R): dR_i/dt = (1/3) sum over the index
// triples through i of the product of the other two entries. The off-diagonal
// part of the full flow vanishes identically on this locus.
Vector7d diagonal_rhs(const Vector7d& r,
                      const StructureConstants& sc = structure_constants());

struct FactorizedState {
  Matrix7d z = Matrix7d::Zero();
  double t = 0.0;
  long step = 0;
  bool blown_up = false;
};

struct DiagonalState {
  Vector7d r = Vector7d::Zero();
  double t = 0.0;
  long step = 0;
  bool blown_up = false;
};

FactorizedState evolve_factorized(FactorizedState st, double dt, long steps,
                                  double blowup_threshold = 1e8,
                                  const StructureConstants& sc = structure_constants());
DiagonalState evolve_diagonal(DiagonalState st, double dt, long steps,
                              double blowup_threshold = 1e8,
                              const StructureConstants& sc = structure_constants());

// Algebraic obstruction of the product form: max-abs over (i,l,n) of
//   dZ_im psi_mln - psi_ijk Z_jl Z_kn,  dZ = factorized_rhs(Z).
// Zero on multiples of the identity.
double ansatz_residual(const Matrix7d& z,
                       const StructureConstants& sc = structure_constants());

// Static closure equation f_i = (1/2) C_ijk {f_j, f_k} entering the product
// form; returns max-abs of the defect.
double f_equation_residual(const FieldConfiguration& f,
                           const StructureConstants& sc = structure_constants());

}  // namespace membrane
