#pragma once

#include "membrane/algebra.hpp"
#include "membrane/grid.hpp"

#include <optional>
#include <random>
#include <vector>

namespace membrane {

// Scalar field sampled on a shared grid; rows follow the first coordinate.
struct SurfaceField {
  std::shared_ptr<const SurfaceGrid> grid;
  Eigen::ArrayXXd v;

  SurfaceField() = default;
  explicit SurfaceField(std::shared_ptr<const SurfaceGrid> g)
      : grid(std::move(g)), v(Eigen::ArrayXXd::Zero(grid->n1, grid->n2)) {}
  SurfaceField(std::shared_ptr<const SurfaceGrid> g, Eigen::ArrayXXd values)
      : grid(std::move(g)), v(std::move(values)) {}
};

SurfaceField d1(const SurfaceField& f);
SurfaceField d2(const SurfaceField& f);
SurfaceField poisson_bracket(const SurfaceField& f, const SurfaceField& g);
double surface_integral(const SurfaceField& f);
// max-abs of {f,{g,h}} + {g,{h,f}} + {h,{f,g}} over the grid
double jacobi_residual(const SurfaceField& f, const SurfaceField& g,
                       const SurfaceField& h);

// d target-space components over one grid. On the torus each component may
// carry an affine winding part X_j = wind1_j s1 + wind2_j s2 + periodic_j;
// the stored field holds the periodic part only.
struct FieldConfiguration {
  int d = 0;
  std::vector<SurfaceField> x;
  bool has_winding = false;
  Eigen::VectorXd wind1, wind2;

  std::shared_ptr<const SurfaceGrid> grid() const { return x.at(0).grid; }
  static FieldConfiguration zero(std::shared_ptr<const SurfaceGrid> g, int d);
};

// {X_j, X_k} including winding cross terms; single-valued (periodic) result.
Eigen::ArrayXXd component_bracket(const FieldConfiguration& cfg, int j, int k);

// Same with the two components drawn from different configurations.
Eigen::ArrayXXd cross_bracket(const FieldConfiguration& a, int j,
                              const FieldConfiguration& b, int k);

// {X_j, h} for a plain single-valued field h.
Eigen::ArrayXXd mixed_bracket(const FieldConfiguration& a, int j,
                              const Eigen::ArrayXXd& h);

// New configuration with components coef.row(r) . X, winding included.
FieldConfiguration combine(const FieldConfiguration& cfg, const Eigen::MatrixXd& coef);

// Pointwise linear action on a 7-component configuration; winding vectors
// rotate with the fields.
FieldConfiguration apply_g2(const Matrix7d& r, const FieldConfiguration& cfg);

// Random real field band-limited to degree (sphere) or mode (torus) <= lmax,
// coefficients drawn from the shared deterministic normal stream.
SurfaceField random_band_limited(std::shared_ptr<const SurfaceGrid> g, int lmax,
                                 std::mt19937_64& rng, double amplitude = 1.0);

// Cartesian coordinate fields of the embedded unit sphere:
// (sin t cos p, sin t sin p, cos t). Degree-1 band.
std::vector<SurfaceField> sphere_coordinates(std::shared_ptr<const SurfaceGrid> g);

}  // namespace membrane
