#include "bosonic/wigner.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "bosonic/format.hpp"

namespace bosonic {

namespace {

// W(x,p) = (1/pi) Tr[rho D(2 alpha) Pi], alpha = (x + i p)/sqrt2, using
// columns D(beta)|l> = (a^dag - beta^*) D(beta)|l-1> / sqrt(l).
double wigner_at(const CMatrix& rho, double x, double p, CVector& prev, CVector& cur) {
  const int D = static_cast<int>(rho.rows());
  const cplx beta = std::sqrt(2.0) * cplx(x, p);
  const cplx bc = std::conj(beta);
  cplx c = std::exp(-0.5 * std::norm(beta));
  for (int k = 0; k < D; ++k) {
    prev[k] = c;
    c *= beta / std::sqrt(static_cast<double>(k + 1));
  }
  double acc = 0;
  for (int l = 0; l < D; ++l) {
    if (l > 0) {
      double inv = 1.0 / std::sqrt(static_cast<double>(l));
      cur[0] = -bc * prev[0] * inv;
      for (int k = 1; k < D; ++k) cur[k] = (std::sqrt(static_cast<double>(k)) * prev[k - 1] - bc * prev[k]) * inv;
      prev.swap(cur);
    }
    // (rho M)_{ll} = sum_k rho(l,k) <k|D|l>
    cplx s = rho.row(l).transpose().cwiseProduct(prev).sum();
    acc += (l % 2 == 0 ? 1.0 : -1.0) * s.real();
  }
  return acc / std::numbers::pi;
}

Eigen::VectorXd axis(double lo, double hi, int n) {
  if (n < 2) throw ConfigError("grid needs at least 2 points per axis");
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

}  // namespace

double WignerGrid::riemann_sum() const {
  double dx = (x_axis[x_axis.size() - 1] - x_axis[0]) / (x_axis.size() - 1);
  double dp = (p_axis[p_axis.size() - 1] - p_axis[0]) / (p_axis.size() - 1);
  return values.sum() * dx * dp;
}

double WignerGrid::max_abs_diff(const WignerGrid& o) const {
  if (values.rows() != o.values.rows() || values.cols() != o.values.cols()) {
    throw DimensionError("grid shapes differ");
  }
  return (values - o.values).cwiseAbs().maxCoeff();
}

double wigner_point(const CMatrix& rho_osc, double x, double p) {
  CVector a(rho_osc.rows()), b(rho_osc.rows());
  return wigner_at(rho_osc, x, p, a, b);
}

WignerGrid wigner(const CMatrix& rho_osc, const GridSpec& grid) {
  WignerGrid w;
  w.x_axis = axis(grid.x_min, grid.x_max, grid.nx);
  w.p_axis = axis(grid.p_min, grid.p_max, grid.np);
  w.values.resize(grid.nx, grid.np);
  CVector a(rho_osc.rows()), b(rho_osc.rows());
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.np; ++j) w.values(i, j) = wigner_at(rho_osc, w.x_axis[i], w.p_axis[j], a, b);
  return w;
}

WignerGrid wigner(const DensityMatrix& rho, const GridSpec& grid) {
  if (rho.space().num_oscillators() != 1) throw DimensionError("wigner needs a single-oscillator state");
  return wigner(trace_out_qubit(rho), grid);
}

WignerGrid wigner(const StateVector& psi, const GridSpec& grid) {
  if (psi.space().num_oscillators() != 1) throw DimensionError("wigner needs a single-oscillator state");
  return wigner(trace_out_qubit(psi), grid);
}

void write_wigner_csv(std::ostream& os, const WignerGrid& w) {
  os << "x,p,w\n";
  for (int i = 0; i < w.values.rows(); ++i)
    for (int j = 0; j < w.values.cols(); ++j)
      os << fmt_num(w.x_axis[i]) << ',' << fmt_num(w.p_axis[j]) << ',' << fmt_num(w.values(i, j)) << '\n';
}

}  // namespace bosonic
