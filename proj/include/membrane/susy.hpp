#pragma once

#include "membrane/solutions.hpp"

#include <array>
#include <string>

namespace membrane {

// Pointwise fermionic stability operators of a snapshot. At every grid node
// the real 8x8 operator
//   O(chi) = chi sum_m Xdot_m beta_m + (1/2) sum_{m != n} W_mn beta_m beta_n,
//   W_mn = {X_m, X_n} at the node,
// is built for the two sector signs chi = +1 and chi = -1; the blocks are
// stacked over all nodes into one (8 nodes) x 8 matrix per sector. A spinor
// parameter survives when it lies in the joint kernel of every node block,
// i.e. the kernel of the stack. Three-component snapshots are embedded into
// the first three slots before building.
struct SusyOperator {
  Eigen::MatrixXd sector_plus, sector_minus;
  long nodes = 0;
  std::string convention;
};

SusyOperator build_susy_operator(const Snapshot& snap,
                                 const StructureConstants& sc = structure_constants());

enum class SusySector { both, plus, minus };

// Kernel dimensions from the singular values of the stacked sectors; a value
// counts as zero below tol * max(sigma_max, 1). kernel_dim sums the sectors
// selected (0..16 for both).
struct SusyReport {
  int kernel_plus = 0;
  int kernel_minus = 0;
  int kernel_dim = 0;
  std::array<double, 8> svals_plus{};
  std::array<double, 8> svals_minus{};
  double tol = 1e-8;
  std::string convention;
};

SusyReport count_preserved_susy(const SusyOperator& op, double tol = 1e-8,
                                SusySector sector = SusySector::both);

}  // namespace membrane
