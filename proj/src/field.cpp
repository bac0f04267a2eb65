#include "membrane/field.hpp"

#include <cmath>
#include <stdexcept>

namespace membrane {

SurfaceField d1(const SurfaceField& f) { return {f.grid, f.grid->d1(f.v)}; }
SurfaceField d2(const SurfaceField& f) { return {f.grid, f.grid->d2(f.v)}; }

SurfaceField poisson_bracket(const SurfaceField& f, const SurfaceField& g) {
  if (f.grid != g.grid) throw std::invalid_argument("bracket: mixed grids");
  return {f.grid, f.grid->bracket(f.v, g.v)};
}

double surface_integral(const SurfaceField& f) { return f.grid->integrate(f.v); }

double jacobi_residual(const SurfaceField& f, const SurfaceField& g,
                       const SurfaceField& h) {
  auto gr = f.grid;
  Eigen::ArrayXXd s = gr->bracket(f.v, gr->bracket(g.v, h.v)) +
                      gr->bracket(g.v, gr->bracket(h.v, f.v)) +
                      gr->bracket(h.v, gr->bracket(f.v, g.v));
  return s.abs().maxCoeff();
}

FieldConfiguration FieldConfiguration::zero(std::shared_ptr<const SurfaceGrid> g,
                                            int d) {
  FieldConfiguration cfg;
  cfg.d = d;
  cfg.x.reserve(d);
  for (int i = 0; i < d; ++i) cfg.x.emplace_back(g);
  return cfg;
}

Eigen::ArrayXXd cross_bracket(const FieldConfiguration& a, int j,
                              const FieldConfiguration& b, int k) {
  auto g = a.grid();
  if (g != b.grid()) throw std::invalid_argument("cross_bracket: mixed grids");
  Eigen::ArrayXXd out = g->bracket(a.x[j].v, b.x[k].v);
  const double aj = a.has_winding ? a.wind1[j] : 0.0;
  const double bj = a.has_winding ? a.wind2[j] : 0.0;
  const double ak = b.has_winding ? b.wind1[k] : 0.0;
  const double bk = b.has_winding ? b.wind2[k] : 0.0;
  if ((a.has_winding || b.has_winding) && g->topology != Topology::torus)
    throw std::logic_error("winding parts require the torus");
  if (bj != 0.0) out += bj * g->d1(b.x[k].v);
  if (aj != 0.0) out -= aj * g->d2(b.x[k].v);
  if (bk != 0.0) out -= bk * g->d1(a.x[j].v);
  if (ak != 0.0) out += ak * g->d2(a.x[j].v);
  out += bj * ak - bk * aj;
  return out;
}

Eigen::ArrayXXd component_bracket(const FieldConfiguration& cfg, int j, int k) {
  return cross_bracket(cfg, j, cfg, k);
}

Eigen::ArrayXXd mixed_bracket(const FieldConfiguration& a, int j,
                              const Eigen::ArrayXXd& h) {
  auto g = a.grid();
  Eigen::ArrayXXd out = g->bracket(a.x[j].v, h);
  if (!a.has_winding) return out;
  if (a.wind2[j] != 0.0) out += a.wind2[j] * g->d1(h);
  if (a.wind1[j] != 0.0) out -= a.wind1[j] * g->d2(h);
  return out;
}

FieldConfiguration combine(const FieldConfiguration& cfg, const Eigen::MatrixXd& coef) {
  if (coef.cols() != cfg.d) throw std::invalid_argument("combine: coefficient shape");
  auto g = cfg.grid();
  FieldConfiguration out = FieldConfiguration::zero(g, int(coef.rows()));
  for (int r = 0; r < coef.rows(); ++r)
    for (int j = 0; j < cfg.d; ++j)
      if (coef(r, j) != 0.0) out.x[r].v += coef(r, j) * cfg.x[j].v;
  out.has_winding = cfg.has_winding;
  if (cfg.has_winding) {
    out.wind1 = coef * cfg.wind1;
    out.wind2 = coef * cfg.wind2;
  }
  return out;
}

FieldConfiguration apply_g2(const Matrix7d& r, const FieldConfiguration& cfg) {
  if (cfg.d != 7) throw std::invalid_argument("apply_g2: seven components required");
  FieldConfiguration out = FieldConfiguration::zero(cfg.grid(), 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      if (r(i, j) != 0.0) out.x[i].v += r(i, j) * cfg.x[j].v;
  out.has_winding = cfg.has_winding;
  if (cfg.has_winding) {
    out.wind1 = r * cfg.wind1;
    out.wind2 = r * cfg.wind2;
  }
  return out;
}

SurfaceField random_band_limited(std::shared_ptr<const SurfaceGrid> g, int lmax,
                                 std::mt19937_64& rng, double amplitude) {
  if (g->topology == Topology::sphere) {
    if (lmax > g->lmax) throw std::invalid_argument("band exceeds grid capacity");
    SphereCoefficients co = g->analyze(Eigen::ArrayXXd::Zero(g->n1, g->n2));
    for (int m = 0; m <= co.M; ++m)
      for (int l = std::max(m, 1); l <= std::min(lmax, co.L); ++l) {
        double re = amplitude * standard_normal(rng);
        double im = (m == 0) ? 0.0 : amplitude * standard_normal(rng);
        co.c[m](l - m) = std::complex<double>(re, im);
      }
    return {g, g->synthesize(co, 0)};
  }
  Eigen::ArrayXXd f = Eigen::ArrayXXd::Zero(g->n1, g->n2);
  for (int k1 = 0; k1 <= lmax; ++k1)
    for (int k2 = -lmax; k2 <= lmax; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;  // one representative per conjugate pair
      double a = amplitude * standard_normal(rng);
      double b = amplitude * standard_normal(rng);
      for (int i = 0; i < g->n1; ++i)
        for (int j = 0; j < g->n2; ++j) {
          double ph = k1 * g->nodes1[i] + k2 * g->nodes2[j];
          f(i, j) += a * std::cos(ph) + b * std::sin(ph);
        }
    }
  return {g, f};
}

std::vector<SurfaceField> sphere_coordinates(std::shared_ptr<const SurfaceGrid> g) {
  if (g->topology != Topology::sphere)
    throw std::invalid_argument("sphere_coordinates: wrong topology");
  Eigen::ArrayXXd f1(g->n1, g->n2), f2(g->n1, g->n2), f3(g->n1, g->n2);
  for (int i = 0; i < g->n1; ++i) {
    double x = g->nodes1[i];
    double st = std::sqrt(1.0 - x * x);
    for (int j = 0; j < g->n2; ++j) {
      f1(i, j) = st * std::cos(g->nodes2[j]);
      f2(i, j) = st * std::sin(g->nodes2[j]);
      f3(i, j) = x;
    }
  }
  return {{g, f1}, {g, f2}, {g, f3}};
}

}  // namespace membrane
