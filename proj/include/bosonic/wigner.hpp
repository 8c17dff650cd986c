#pragma once

#include <iosfwd>
#include <string>

#include "bosonic/space.hpp"

namespace bosonic {

struct GridSpec {
  double x_min = -5, x_max = 5;
  int nx = 201;
  double p_min = -5, p_max = 5;
  int np = 201;
};

// values(i, j) is W(x_axis[i], p_axis[j]); normalized so the integral over
// dx dp is 1 with x = (a + a^dag)/sqrt2.
struct WignerGrid {
  Eigen::VectorXd x_axis, p_axis;
  Eigen::MatrixXd values;

  double riemann_sum() const;
  double max_abs_diff(const WignerGrid& o) const;
};

// Single-oscillator density matrix (D x D).
WignerGrid wigner(const CMatrix& rho_osc, const GridSpec& grid = {});
double wigner_point(const CMatrix& rho_osc, double x, double p);
// Full-space inputs; the qubit is traced out. Two-oscillator spaces throw.
WignerGrid wigner(const DensityMatrix& rho, const GridSpec& grid = {});
WignerGrid wigner(const StateVector& psi, const GridSpec& grid = {});

void write_wigner_csv(std::ostream& os, const WignerGrid& w);

}  // namespace bosonic
