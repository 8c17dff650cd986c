#include "bosonic/operators.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace bosonic {

namespace osc {

CMatrix lowering_power(int D, int n) {
  CMatrix a = CMatrix::Zero(D, D);
  for (int l = n; l < D; ++l) {
    double v = 1.0;
    for (int j = 0; j < n; ++j) v *= std::sqrt(static_cast<double>(l - j));
    a(l - n, l) = v;
  }
  return a;
}

CMatrix number(int D) {
  CMatrix m = CMatrix::Zero(D, D);
  for (int l = 0; l < D; ++l) m(l, l) = static_cast<double>(l);
  return m;
}

SparseC displacement_generator(int D, cplx alpha) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (int l = 1; l < D; ++l) {
    double s = std::sqrt(static_cast<double>(l));
    t.emplace_back(l, l - 1, alpha * s);
    t.emplace_back(l - 1, l, -std::conj(alpha) * s);
  }
  SparseC g(D, D);
  g.setFromTriplets(t.begin(), t.end());
  return g;
}

SparseC squeezing_generator(int D, int n, cplx zeta) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (int l = n; l < D; ++l) {
    double v = 1.0;
    for (int j = 0; j < n; ++j) v *= std::sqrt(static_cast<double>(l - j));
    t.emplace_back(l, l - n, zeta * v);
    t.emplace_back(l - n, l, -std::conj(zeta) * v);
  }
  SparseC g(D, D);
  g.setFromTriplets(t.begin(), t.end());
  return g;
}

CMatrix displacement(int D, cplx alpha) {
  if (std::norm(alpha) > D / 4.0) {
    warn("displacement |alpha|^2 = " + std::to_string(std::norm(alpha)) +
         " exceeds cutoff/4 for cutoff " + std::to_string(D));
  }
  if (alpha == cplx(0)) return CMatrix::Identity(D, D);
  return expm(CMatrix(displacement_generator(D, alpha)));
}

CMatrix squeezing(int D, int n, cplx zeta) {
  if (n < 1 || n >= D) throw OrderError("squeezing order must satisfy 1 <= n < cutoff");
  if (zeta == cplx(0)) return CMatrix::Identity(D, D);
  CMatrix s = expm(CMatrix(squeezing_generator(D, n, zeta)));
  double photons = 0;
  for (int l = 0; l < D; ++l) photons += l * std::norm(s(l, 0));
  if (photons > D / 2.0) {
    warn("squeezing photon content " + std::to_string(photons) + " exceeds cutoff/2 for cutoff " +
         std::to_string(D));
  }
  return s;
}

CMatrix rotation(int D, double angle) {
  CMatrix m = CMatrix::Zero(D, D);
  for (int l = 0; l < D; ++l) m(l, l) = std::polar(1.0, angle * l);
  return m;
}

CVector coherent(int D, cplx alpha) {
  CVector v(D);
  cplx c = std::exp(-0.5 * std::norm(alpha));
  for (int l = 0; l < D; ++l) {
    v[l] = c;
    c *= alpha / std::sqrt(static_cast<double>(l + 1));
  }
  return v;
}

}  // namespace osc

CMatrix expm(const CMatrix& a) { return a.exp(); }

CVector expm_action(const SparseC& a, const CVector& v) {
  double nrm = 0;
  for (int k = 0; k < a.outerSize(); ++k) {
    double col = 0;
    for (SparseC::InnerIterator it(a, k); it; ++it) col += std::abs(it.value());
    nrm = std::max(nrm, col);
  }
  int steps = std::max(1, static_cast<int>(std::ceil(nrm / 0.5)));
  CVector out = v;
  for (int s = 0; s < steps; ++s) {
    CVector term = out;
    CVector sum = out;
    double base = out.norm();
    for (int j = 1; j < 60; ++j) {
      term = (a * term) / (static_cast<double>(steps) * j);
      sum += term;
      if (term.norm() <= 1e-18 * base) break;
    }
    out = std::move(sum);
  }
  return out;
}

namespace {

// Identity factors around an oscillator operator inside the oscillator block.
CMatrix osc_block(const TruncatedSpace& space, int osc, const CMatrix& op) {
  if (osc < 0 || osc >= space.num_oscillators()) throw DimensionError("oscillator index out of range");
  if (op.rows() != space.cutoff(osc)) throw DimensionError("operator size does not match cutoff");
  CMatrix m = op;
  for (int i = osc - 1; i >= 0; --i) {
    m = Eigen::kroneckerProduct(CMatrix::Identity(space.cutoff(i), space.cutoff(i)), m).eval();
  }
  for (int i = osc + 1; i < space.num_oscillators(); ++i) {
    m = Eigen::kroneckerProduct(m, CMatrix::Identity(space.cutoff(i), space.cutoff(i))).eval();
  }
  return m;
}

}  // namespace

CMatrix kron_qubit(const TruncatedSpace& space, const Qubit2& q, int osc, const CMatrix& op) {
  return Eigen::kroneckerProduct(CMatrix(q), osc_block(space, osc, op)).eval();
}

CMatrix lift_osc(const TruncatedSpace& space, int osc, const CMatrix& op) {
  return kron_qubit(space, Qubit2::Identity(), osc, op);
}

CMatrix lift_qubit(const TruncatedSpace& space, const Qubit2& q) {
  return Eigen::kroneckerProduct(CMatrix(q), CMatrix::Identity(space.osc_dim(), space.osc_dim()))
      .eval();
}

CMatrix ladder_power(const TruncatedSpace& space, int osc, int n) {
  int D = space.cutoff(osc);
  if (n < 1 || n >= D) throw OrderError("ladder power must satisfy 1 <= n < cutoff");
  return lift_osc(space, osc, osc::lowering_power(D, n));
}

CMatrix displacement(const TruncatedSpace& space, int osc, cplx alpha) {
  return lift_osc(space, osc, osc::displacement(space.cutoff(osc), alpha));
}

CMatrix squeezing(const TruncatedSpace& space, int osc, int n, cplx zeta) {
  return lift_osc(space, osc, osc::squeezing(space.cutoff(osc), n, zeta));
}

CMatrix rotation(const TruncatedSpace& space, int osc, double angle) {
  return lift_osc(space, osc, osc::rotation(space.cutoff(osc), angle));
}

namespace qubit {
Qubit2 sigma_minus() {
  Qubit2 m = Qubit2::Zero();
  m(0, 1) = 1.0;
  return m;
}
Qubit2 sigma_plus() { return sigma_minus().adjoint(); }
Qubit2 sigma_x() { return sigma_minus() + sigma_plus(); }
Qubit2 sigma_z() {
  Qubit2 m = Qubit2::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}
Qubit2 hadamard() {
  Qubit2 m;
  double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}
}  // namespace qubit

double unitarity_error(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace bosonic
