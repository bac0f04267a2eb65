#include "membrane/fuzzy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace membrane {

SpinMatrices spin_matrices(int n) {
  if (n < 1) throw std::invalid_argument("spin_matrices: n >= 1");
  const double s = 0.5 * (n - 1);
  SpinMatrices j;
  j.jz = Eigen::MatrixXcd::Zero(n, n);
  j.jp = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) j.jz(k, k) = s - k;
  for (int k = 1; k < n; ++k) {
    double m = s - k;
    j.jp(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  j.jm = j.jp.adjoint();
  j.jx = 0.5 * (j.jp + j.jm);
  j.jy = std::complex<double>(0.0, -0.5) * (j.jp - j.jm);
  return j;
}

namespace {

// T_ll = Jp^l, lowered by T_{l,m-1} = [Jm, T_lm]/sqrt((l+m)(l-m+1));
// result indexed by m+l.
std::vector<Eigen::MatrixXcd> polarization_tensors(const SpinMatrices& j, int l) {
  const int n = int(j.jz.rows());
  std::vector<Eigen::MatrixXcd> t(2 * l + 1);
  Eigen::MatrixXcd top = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 0; k < l; ++k) top = top * j.jp;
  t[2 * l] = top;
  for (int m = l; m > -l; --m) {
    double c = std::sqrt(double(l + m) * double(l - m + 1));
    t[m - 1 + l] = (j.jm * t[m + l] - t[m + l] * j.jm) / c;
  }
  return t;
}

double alpha_coeff(int l) {
  double fact = 1.0;  // (2l+1)!
  for (int k = 2; k <= 2 * l + 1; ++k) fact *= k;
  double lfact = 1.0;
  for (int k = 2; k <= l; ++k) lfact *= k;
  double sign = (l % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sqrt(fact / (4.0 * M_PI)) / (std::pow(2.0, l) * lfact);
}

}  // namespace

Eigen::MatrixXcd fuzzy_map(const SurfaceField& f, int n) {
  if (f.grid->topology != Topology::sphere)
    throw std::invalid_argument("fuzzy_map: sphere fields only");
  const double s = 0.5 * (n - 1);
  SphereCoefficients co = f.grid->analyze(f.v);

  double cmax = 0.0;
  for (const auto& cm : co.c)
    for (int i = 0; i < cm.size(); ++i) cmax = std::max(cmax, std::abs(cm(i)));

  std::vector<int> excess;
  for (int m = 0; m <= co.M; ++m)
    for (int l = std::max(m, n); l <= co.L; ++l)
      if (std::abs(co.c[m](l - m)) > 1e-9 * cmax) excess.push_back(l);
  if (!excess.empty()) {
    std::ostringstream os;
    os << "band limit exceeded for n=" << n << ": degrees";
    int last = -1;
    for (int l : excess)
      if (l != last) {
        os << " " << l;
        last = l;
      }
    throw std::domain_error(os.str());
  }

  SpinMatrices j = spin_matrices(n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  const int ltop = std::min(co.L, n - 1);
  for (int l = 0; l <= ltop; ++l) {
    auto t = polarization_tensors(j, l);
    const double scale = alpha_coeff(l) / ((l == 0) ? 1.0 : std::pow(s, l));
    for (int m = 0; m <= std::min(l, co.M); ++m) {
      std::complex<double> c = co.c[m](l - m);
      out += scale * c * t[m + l];
      if (m > 0) out += scale * std::conj(c) * t[m + l].adjoint();
    }
  }
  return out;
}

Eigen::MatrixXcd matrix_bracket(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& g) {
  const double s = 0.5 * (double(f.rows()) - 1.0);
  return std::complex<double>(0.0, -s) * (f * g - g * f);
}

double matrix_norm(const Eigen::MatrixXcd& m) {
  return std::sqrt((m.adjoint() * m).trace().real() / double(m.rows()));
}

double correspondence_deviation(const SurfaceField& f, const SurfaceField& g, int n) {
  Eigen::MatrixXcd lhs = fuzzy_map(poisson_bracket(f, g), n);
  Eigen::MatrixXcd rhs = matrix_bracket(fuzzy_map(f, n), fuzzy_map(g, n));
  return matrix_norm(lhs - rhs);
}

}  // namespace membrane
