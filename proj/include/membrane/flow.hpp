#pragma once

#include "membrane/field.hpp"

#include <complex>
#include <cstdint>

namespace membrane {

// First-order flow dX_i/dt = (1/2) C_ijk {X_j, X_k};
// C is the Levi-Civita symbol for d=3 and the octonionic 3-tensor for d=7.
FieldConfiguration selfdual_rhs(const FieldConfiguration& cfg,
                                const StructureConstants& sc = structure_constants());

struct FlowState {
  FieldConfiguration cfg;
  double t = 0.0;
  long step = 0;
  bool blown_up = false;
};

struct FlowOptions {
  double dt = 1e-3;
  long steps = 0;
  double blowup_threshold = 1e8;
};

// Fixed-step RK4. Stops early with blown_up set when the field max-abs
// passes the threshold or turns non-finite.
FlowState evolve(FlowState st, const FlowOptions& opt,
                 const StructureConstants& sc = structure_constants());

// max-abs over the grid of sum_i {X_i, Xdot_i}; vanishes identically on the
// flow for any configuration.
double gauss_residual(const FieldConfiguration& x, const FieldConfiguration& xdot);

// max-abs of Xddot_i - {X_k, {X_i, X_k}} with Xddot obtained by
// differentiating the flow through the given velocity.
double eom_residual(const FieldConfiguration& x, const FieldConfiguration& xdot,
                    const StructureConstants& sc = structure_constants());

// max-abs of Xdot_i - (1/2) C_ijk {X_j, X_k}
double selfduality_residual(const FieldConfiguration& x,
                            const FieldConfiguration& xdot,
                            const StructureConstants& sc = structure_constants());

// Complex pair with u.u = 0, v.v = -1, u.v = 0 (bilinear, not hermitian)
// satisfying the cross-product eigen relation C_ijk u_j v_k = u_i.
// Seed 0 returns the canonical pair; other seeds a rotated copy.
struct NullVectorPair {
  Eigen::VectorXcd u, v;
};
NullVectorPair make_null_pair(int d, std::uint64_t seed,
                              const StructureConstants& sc = structure_constants());

// integral of (u . X)^n over the surface
std::complex<double> conserved_charge(const FieldConfiguration& x,
                                      const NullVectorPair& p, int n);

// d=7 transport relation behind charge conservation: max-abs over the grid of
//   u.Xdot - {u.X, v.X} - (1/2) phi_jklm u_j v_k {X_l, X_m}
double conservation_relation_residual(const FieldConfiguration& x,
                                      const FieldConfiguration& xdot,
                                      const NullVectorPair& p,
                                      const StructureConstants& sc = structure_constants());

// Three-component configuration placed in the first three slots of a
// seven-component one (zero elsewhere).
FieldConfiguration embed_in_seven(const FieldConfiguration& cfg);

// Bogomolny split: returns (integral of sum Xdot^2, (1/2) integral of
// sum_{jk} {X_j,X_k}^2); equal on self-dual data.
std::pair<double, double> bogomolny_pair(const FieldConfiguration& x,
                                         const FieldConfiguration& xdot);

}  // namespace membrane
