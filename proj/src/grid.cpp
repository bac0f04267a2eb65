#include "membrane/grid.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace membrane {

void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[n - 1 - i] = xi;  // ascending order
    w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

Eigen::MatrixXd legendre_table(int L, int m, const Eigen::VectorXd& x) {
  const int n = int(x.size());
  const int rows = L - m + 1;
  Eigen::MatrixXd tab(rows, n);
  Eigen::ArrayXd s = (1.0 - x.array().square()).sqrt();
  Eigen::ArrayXd pmm = Eigen::ArrayXd::Constant(n, std::sqrt(0.5));
  for (int k = 1; k <= m; ++k)
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  tab.row(0) = pmm.matrix().transpose();
  if (rows > 1)
    tab.row(1) = (std::sqrt(2.0 * m + 3.0) * x.array() * pmm).matrix().transpose();
  for (int l = m + 2; l <= L; ++l) {
    double a = std::sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) /
                         (double(l - m) * double(l + m)));
    double b = std::sqrt((2.0 * l + 1.0) * (l + m - 1.0) * (l - m - 1.0) /
                         (double(l - m) * double(l + m) * (2.0 * l - 3.0)));
    tab.row(l - m) = a * (x.array() * tab.row(l - m - 1).transpose().array()).matrix().transpose() -
                     b * tab.row(l - m - 2);
  }
  return tab.transpose();  // n x rows
}

Eigen::MatrixXd legendre_deriv_table(int L, int m, const Eigen::VectorXd& x) {
  Eigen::MatrixXd p = legendre_table(L, m, x);  // n x (L-m+1)
  const int n = int(x.size());
  Eigen::MatrixXd d(n, L - m + 1);
  Eigen::ArrayXd onemx2 = 1.0 - x.array().square();
  for (int l = m; l <= L; ++l) {
    Eigen::ArrayXd acc = -double(l) * x.array() * p.col(l - m).array();
    if (l > m) {
      double a = std::sqrt(double(l * l - m * m) * (2.0 * l + 1.0) / (2.0 * l - 1.0));
      acc += a * p.col(l - m - 1).array();
    }
    d.col(l - m) = (acc / onemx2).matrix();
  }
  return d;
}

std::shared_ptr<const SurfaceGrid> SurfaceGrid::sphere(int n1, int n2) {
  if (n1 < 2 || n2 < 4) throw std::invalid_argument("sphere grid too small");
  auto g = std::shared_ptr<SurfaceGrid>(new SurfaceGrid());
  g->topology = Topology::sphere;
  g->n1 = n1;
  g->n2 = n2;
  gauss_legendre(n1, g->nodes1, g->weights1);
  g->nodes2.resize(n2);
  for (int j = 0; j < n2; ++j) g->nodes2[j] = 2.0 * M_PI * j / n2;
  const int L = n1 - 1;
  const int M = std::min(L, (n2 - 1) / 2);
  g->lmax = L;
  g->plm_.reserve(M + 1);
  g->dplm_.reserve(M + 1);
  for (int m = 0; m <= M; ++m) {
    g->plm_.push_back(legendre_table(L, m, g->nodes1));
    g->dplm_.push_back(legendre_deriv_table(L, m, g->nodes1));
  }
  g->cosm_.resize(M + 1, n2);
  g->sinm_.resize(M + 1, n2);
  for (int m = 0; m <= M; ++m)
    for (int j = 0; j < n2; ++j) {
      g->cosm_(m, j) = std::cos(m * g->nodes2[j]);
      g->sinm_(m, j) = std::sin(m * g->nodes2[j]);
    }
  return g;
}

std::shared_ptr<const SurfaceGrid> SurfaceGrid::torus(int n1, int n2) {
  if (n1 < 4 || n2 < 4 || n1 % 2 || n2 % 2)
    throw std::invalid_argument("torus grid must be even and >= 4 per direction");
  auto g = std::shared_ptr<SurfaceGrid>(new SurfaceGrid());
  g->topology = Topology::torus;
  g->n1 = n1;
  g->n2 = n2;
  g->nodes1.resize(n1);
  g->nodes2.resize(n2);
  for (int i = 0; i < n1; ++i) g->nodes1[i] = 2.0 * M_PI * i / n1;
  for (int j = 0; j < n2; ++j) g->nodes2[j] = 2.0 * M_PI * j / n2;
  g->weights1 = Eigen::VectorXd::Constant(n1, 2.0 * M_PI / n1);
  g->lmax = std::min(n1, n2) / 2 - 1;

  auto diff = [](int n) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        int sgn = ((j - k) % 2 == 0) ? 1 : -1;
        d(j, k) = 0.5 * sgn / std::tan((j - k) * M_PI / n);
      }
    return d;
  };
  g->diff1_ = diff(n1);
  g->diff2_ = diff(n2);

  auto proj = [](int n) {
    const int kc = n / 3;
    Eigen::MatrixXd p(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 1.0;
        for (int k = 1; k <= kc; ++k) s += 2.0 * std::cos(k * 2.0 * M_PI * (i - j) / n);
        p(i, j) = s / n;
      }
    return p;
  };
  g->proj1_ = proj(n1);
  g->proj2_ = proj(n2);
  return g;
}

double SurfaceGrid::area() const {
  return topology == Topology::sphere ? 4.0 * M_PI : 4.0 * M_PI * M_PI;
}

double SurfaceGrid::cell2() const { return 2.0 * M_PI / n2; }

SphereCoefficients SurfaceGrid::analyze(const Eigen::ArrayXXd& f) const {
  if (topology != Topology::sphere) throw std::logic_error("analyze: sphere only");
  SphereCoefficients co;
  co.L = lmax;
  co.M = int(plm_.size()) - 1;
  co.c.resize(co.M + 1);
  const double scale = std::sqrt(2.0 * M_PI);
  for (int m = 0; m <= co.M; ++m) {
    Eigen::VectorXd gre = f.matrix() * cosm_.row(m).transpose() / double(n2);
    Eigen::VectorXd gim = -(f.matrix() * sinm_.row(m).transpose()) / double(n2);
    Eigen::VectorXcd gw(n1);
    gw.real() = weights1.cwiseProduct(gre);
    gw.imag() = weights1.cwiseProduct(gim);
    co.c[m] = scale * (plm_[m].transpose() * gw);
  }
  return co;
}

Eigen::ArrayXXd SurfaceGrid::synthesize(const SphereCoefficients& co, int deriv) const {
  if (topology != Topology::sphere) throw std::logic_error("synthesize: sphere only");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n1, n2);
  const double inv = 1.0 / std::sqrt(2.0 * M_PI);
  for (int m = 0; m <= co.M; ++m) {
    Eigen::VectorXcd cm = co.c[m];
    if (deriv == 2) cm *= std::complex<double>(0.0, double(m));
    const Eigen::MatrixXd& tab = (deriv == 1) ? dplm_[m] : plm_[m];
    Eigen::VectorXcd h = tab * cm;
    const double s = (m == 0 ? 1.0 : 2.0) * inv;
    out.noalias() += s * (h.real() * cosm_.row(m) - h.imag() * sinm_.row(m));
  }
  return out.array();
}

Eigen::ArrayXXd SurfaceGrid::d1(const Eigen::ArrayXXd& f) const {
  if (topology == Topology::sphere) return synthesize(analyze(f), 1);
  return (diff1_ * f.matrix()).array();
}

Eigen::ArrayXXd SurfaceGrid::d2(const Eigen::ArrayXXd& f) const {
  if (topology == Topology::sphere) return synthesize(analyze(f), 2);
  return (f.matrix() * diff2_.transpose()).array();
}

Eigen::ArrayXXd SurfaceGrid::dealias(const Eigen::ArrayXXd& f) const {
  if (topology == Topology::sphere) return f;
  return (proj1_ * f.matrix() * proj2_.transpose()).array();
}

Eigen::ArrayXXd SurfaceGrid::bracket(const Eigen::ArrayXXd& f,
                                     const Eigen::ArrayXXd& g) const {
  if (topology == Topology::sphere) {
    SphereCoefficients cf = analyze(f), cg = analyze(g);
    Eigen::ArrayXXd f1 = synthesize(cf, 1), f2 = synthesize(cf, 2);
    Eigen::ArrayXXd g1 = synthesize(cg, 1), g2 = synthesize(cg, 2);
    return f2 * g1 - g2 * f1;
  }
  Eigen::ArrayXXd f1 = dealias(d1(f)), f2 = dealias(d2(f));
  Eigen::ArrayXXd g1 = dealias(d1(g)), g2 = dealias(d2(g));
  return dealias(f2 * g1 - g2 * f1);
}

double SurfaceGrid::integrate(const Eigen::ArrayXXd& f) const {
  Eigen::VectorXd rowsum = f.matrix().rowwise().sum();
  return weights1.dot(rowsum) * cell2();
}

}  // namespace membrane
