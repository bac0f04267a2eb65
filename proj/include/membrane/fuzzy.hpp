#pragma once

#include "membrane/field.hpp"

#include <complex>

namespace membrane {

// su(2) generators in the N-dimensional irreducible representation,
// spin s = (N-1)/2, basis ordered by descending weight.
struct SpinMatrices {
  Eigen::MatrixXcd jx, jy, jz, jp, jm;
};
SpinMatrices spin_matrices(int n);

// Matrix image of a band-limited real field on the sphere: each harmonic
// coefficient is carried onto the matching polarization tensor built from the
// ladder operators, scaled so the three degree-1 fields land exactly on J_i/s.
// Real fields map to Hermitian matrices. Throws std::domain_error naming the
// offending degrees if the field has weight beyond l = N-1 (relative
// threshold 1e-9 against the largest coefficient).
Eigen::MatrixXcd fuzzy_map(const SurfaceField& f, int n);

// -i s [F, G]: the matrix counterpart of the surface bracket.
Eigen::MatrixXcd matrix_bracket(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& g);

// sqrt(tr(M^H M)/N)
double matrix_norm(const Eigen::MatrixXcd& m);

// || fuzzy({f,g}) - matrix_bracket(fuzzy f, fuzzy g) ||; both fields and
// their bracket must fit inside the matrix band.
double correspondence_deviation(const SurfaceField& f, const SurfaceField& g, int n);

}  // namespace membrane
