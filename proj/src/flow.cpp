#include "membrane/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace membrane {

namespace {

int epsilon3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

// C_ijk: Levi-Civita for d=3, octonionic tensor for d=7
int cten(const StructureConstants& sc, int d, int i, int j, int k) {
  return d == 3 ? epsilon3(i, j, k) : sc.psi(i, j, k);
}

double config_maxabs(const FieldConfiguration& cfg) {
  double m = 0.0;
  for (const auto& f : cfg.x) m = std::max(m, f.v.abs().maxCoeff());
  return m;
}

FieldConfiguration advanced(const FieldConfiguration& base, double a,
                            const FieldConfiguration& k) {
  FieldConfiguration out = base;
  for (int i = 0; i < base.d; ++i) out.x[i].v += a * k.x[i].v;
  return out;
}

}  // namespace

FieldConfiguration selfdual_rhs(const FieldConfiguration& cfg,
                                const StructureConstants& sc) {
  if (cfg.d != 3 && cfg.d != 7)
    throw std::invalid_argument("selfdual_rhs: three or seven components");
  FieldConfiguration out = FieldConfiguration::zero(cfg.grid(), cfg.d);
  for (int j = 0; j < cfg.d; ++j)
    for (int k = j + 1; k < cfg.d; ++k) {
      bool used = false;
      Eigen::ArrayXXd w;
      for (int i = 0; i < cfg.d; ++i) {
        int c = cten(sc, cfg.d, i, j, k);
        if (c == 0) continue;
        if (!used) {
          w = component_bracket(cfg, j, k);
          used = true;
        }
        out.x[i].v += double(c) * w;  // j<k and k<j halves cancel the 1/2
      }
    }
  return out;
}

FlowState evolve(FlowState st, const FlowOptions& opt, const StructureConstants& sc) {
  for (long n = 0; n < opt.steps; ++n) {
    FieldConfiguration k1 = selfdual_rhs(st.cfg, sc);
    FieldConfiguration k2 = selfdual_rhs(advanced(st.cfg, 0.5 * opt.dt, k1), sc);
    FieldConfiguration k3 = selfdual_rhs(advanced(st.cfg, 0.5 * opt.dt, k2), sc);
    FieldConfiguration k4 = selfdual_rhs(advanced(st.cfg, opt.dt, k3), sc);
    for (int i = 0; i < st.cfg.d; ++i)
      st.cfg.x[i].v +=
          (opt.dt / 6.0) * (k1.x[i].v + 2.0 * k2.x[i].v + 2.0 * k3.x[i].v + k4.x[i].v);
    st.t += opt.dt;
    ++st.step;
    double m = config_maxabs(st.cfg);
    if (!std::isfinite(m) || m > opt.blowup_threshold) {
      st.blown_up = true;
      break;
    }
  }
  return st;
}

double gauss_residual(const FieldConfiguration& x, const FieldConfiguration& xdot) {
  auto g = x.grid();
  Eigen::ArrayXXd s = Eigen::ArrayXXd::Zero(g->n1, g->n2);
  for (int i = 0; i < x.d; ++i) s += cross_bracket(x, i, xdot, i);
  return s.abs().maxCoeff();
}

double eom_residual(const FieldConfiguration& x, const FieldConfiguration& xdot,
                    const StructureConstants& sc) {
  auto g = x.grid();
  const int d = x.d;
  // second derivative through the flow
  std::vector<Eigen::ArrayXXd> xdd(d, Eigen::ArrayXXd::Zero(g->n1, g->n2));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      bool any = false;
      for (int i = 0; i < d; ++i) any = any || (cten(sc, d, i, j, k) != 0);
      if (!any) continue;
      Eigen::ArrayXXd w = cross_bracket(xdot, j, x, k) + cross_bracket(x, j, xdot, k);
      for (int i = 0; i < d; ++i) {
        int c = cten(sc, d, i, j, k);
        if (c != 0) xdd[i] += double(c) * w;
      }
    }
  double res = 0.0;
  for (int i = 0; i < d; ++i) {
    Eigen::ArrayXXd force = Eigen::ArrayXXd::Zero(g->n1, g->n2);
    for (int k = 0; k < d; ++k) {
      if (k == i) continue;
      force += mixed_bracket(x, k, component_bracket(x, i, k));
    }
    res = std::max(res, (xdd[i] - force).abs().maxCoeff());
  }
  return res;
}

double selfduality_residual(const FieldConfiguration& x,
                            const FieldConfiguration& xdot,
                            const StructureConstants& sc) {
  FieldConfiguration rhs = selfdual_rhs(x, sc);
  double res = 0.0;
  for (int i = 0; i < x.d; ++i)
    res = std::max(res, (xdot.x[i].v - rhs.x[i].v).abs().maxCoeff());
  return res;
}

NullVectorPair make_null_pair(int d, std::uint64_t seed, const StructureConstants& sc) {
  if (d != 3 && d != 7) throw std::invalid_argument("make_null_pair: d = 3 or 7");
  NullVectorPair p;
  p.u = Eigen::VectorXcd::Zero(d);
  p.v = Eigen::VectorXcd::Zero(d);
  p.u(0) = 1.0;
  p.u(1) = std::complex<double>(0.0, 1.0);
  p.v(2) = std::complex<double>(0.0, -1.0);
  if (seed == 0) return p;
  std::mt19937_64 rng(seed);
  if (d == 3) {
    Eigen::Vector3d axis(standard_normal(rng), standard_normal(rng), standard_normal(rng));
    axis.normalize();
    Eigen::Matrix3d r = Eigen::AngleAxisd(standard_normal(rng), axis).toRotationMatrix();
    p.u = r * p.u;
    p.v = r * p.v;
  } else {
    Matrix7d r = random_g2(rng, sc);
    p.u = r * p.u;
    p.v = r * p.v;
  }
  return p;
}

std::complex<double> conserved_charge(const FieldConfiguration& x,
                                      const NullVectorPair& p, int n) {
  auto g = x.grid();
  Eigen::ArrayXXcd w = Eigen::ArrayXXcd::Zero(g->n1, g->n2);
  for (int i = 0; i < x.d; ++i) w += p.u(i) * x.x[i].v.cast<std::complex<double>>();
  if (x.has_winding) {
    // affine parts evaluated over the fundamental domain
    std::complex<double> ua = 0.0, ub = 0.0;
    for (int i = 0; i < x.d; ++i) {
      ua += p.u(i) * x.wind1[i];
      ub += p.u(i) * x.wind2[i];
    }
    for (int i = 0; i < g->n1; ++i)
      for (int j = 0; j < g->n2; ++j)
        w(i, j) += ua * g->nodes1[i] + ub * g->nodes2[j];
  }
  Eigen::ArrayXXcd pw = Eigen::ArrayXXcd::Ones(g->n1, g->n2);
  for (int k = 0; k < n; ++k) pw *= w;
  return {g->integrate(pw.real()), g->integrate(pw.imag())};
}

double conservation_relation_residual(const FieldConfiguration& x,
                                      const FieldConfiguration& xdot,
                                      const NullVectorPair& p,
                                      const StructureConstants& sc) {
  if (x.d != 7) throw std::invalid_argument("conservation relation: d = 7");
  auto g = x.grid();
  // rows: Re(u.X), Im(u.X), Re(v.X), Im(v.X)
  Eigen::MatrixXd coef(4, 7);
  for (int i = 0; i < 7; ++i) {
    coef(0, i) = p.u(i).real();
    coef(1, i) = p.u(i).imag();
    coef(2, i) = p.v(i).real();
    coef(3, i) = p.v(i).imag();
  }
  FieldConfiguration uv = combine(x, coef);
  Eigen::ArrayXXd br_re = cross_bracket(uv, 0, uv, 2) - cross_bracket(uv, 1, uv, 3);
  Eigen::ArrayXXd br_im = cross_bracket(uv, 1, uv, 2) + cross_bracket(uv, 0, uv, 3);

  // (1/2) phi_jklm u_j v_k summed over j,k
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(7, 7);
  for (int l = 0; l < 7; ++l)
    for (int m = 0; m < 7; ++m) {
      std::complex<double> s = 0.0;
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k)
          if (sc.phi(j, k, l, m) != 0) s += 0.5 * double(sc.phi(j, k, l, m)) * p.u(j) * p.v(k);
      q(l, m) = s;
    }
  Eigen::ArrayXXd t_re = Eigen::ArrayXXd::Zero(g->n1, g->n2);
  Eigen::ArrayXXd t_im = Eigen::ArrayXXd::Zero(g->n1, g->n2);
  for (int l = 0; l < 7; ++l)
    for (int m = l + 1; m < 7; ++m) {
      if (q(l, m) == std::complex<double>(0.0)) continue;
      Eigen::ArrayXXd w = component_bracket(x, l, m);
      t_re += 2.0 * q(l, m).real() * w;
      t_im += 2.0 * q(l, m).imag() * w;
    }

  Eigen::ArrayXXd vel_re = Eigen::ArrayXXd::Zero(g->n1, g->n2);
  Eigen::ArrayXXd vel_im = Eigen::ArrayXXd::Zero(g->n1, g->n2);
  for (int i = 0; i < 7; ++i) {
    vel_re += p.u(i).real() * xdot.x[i].v;
    vel_im += p.u(i).imag() * xdot.x[i].v;
  }

  Eigen::ArrayXXd rre = vel_re - br_re - t_re;
  Eigen::ArrayXXd rim = vel_im - br_im - t_im;
  return std::sqrt((rre.square() + rim.square()).maxCoeff());
}

FieldConfiguration embed_in_seven(const FieldConfiguration& cfg) {
  if (cfg.d != 3) throw std::invalid_argument("embed_in_seven: three components");
  FieldConfiguration out = FieldConfiguration::zero(cfg.grid(), 7);
  for (int i = 0; i < 3; ++i) out.x[i] = cfg.x[i];
  out.has_winding = cfg.has_winding;
  if (cfg.has_winding) {
    out.wind1 = Eigen::VectorXd::Zero(7);
    out.wind2 = Eigen::VectorXd::Zero(7);
    out.wind1.head<3>() = cfg.wind1;
    out.wind2.head<3>() = cfg.wind2;
  }
  return out;
}

std::pair<double, double> bogomolny_pair(const FieldConfiguration& x,
                                         const FieldConfiguration& xdot) {
  auto g = x.grid();
  Eigen::ArrayXXd kin = Eigen::ArrayXXd::Zero(g->n1, g->n2);
  for (int i = 0; i < x.d; ++i) kin += xdot.x[i].v.square();
  Eigen::ArrayXXd pot = Eigen::ArrayXXd::Zero(g->n1, g->n2);
  for (int j = 0; j < x.d; ++j)
    for (int k = j + 1; k < x.d; ++k) pot += component_bracket(x, j, k).square();
  return {g->integrate(kin), g->integrate(pot)};
}

}  // namespace membrane
