#pragma once

#include <Eigen/Sparse>

#include "bosonic/space.hpp"

namespace bosonic {

using SparseC = Eigen::SparseMatrix<cplx>;
using Qubit2 = Eigen::Matrix2cd;  // rows/cols ordered {g, e}

// Oscillator-only matrices of size D x D.
namespace osc {
CMatrix lowering_power(int D, int n);
CMatrix number(int D);
CMatrix displacement(int D, cplx alpha);
CMatrix squeezing(int D, int n, cplx zeta);
CMatrix rotation(int D, double angle);
// Sparse generator alpha a^dag - alpha^* a.
SparseC displacement_generator(int D, cplx alpha);
SparseC squeezing_generator(int D, int n, cplx zeta);
// Coherent state amplitudes e^{-|a|^2/2} a^l / sqrt(l!), l < D (not renormalized).
CVector coherent(int D, cplx alpha);
}  // namespace osc

// Dense exponential (scaling and squaring Pade).
CMatrix expm(const CMatrix& a);
// exp(A) v for sparse A by scaled Taylor series; accurate to ~1e-14 relative.
CVector expm_action(const SparseC& a, const CVector& v);

// Lift operators into the full space.
CMatrix lift_osc(const TruncatedSpace& space, int osc, const CMatrix& op);
CMatrix lift_qubit(const TruncatedSpace& space, const Qubit2& q);
CMatrix kron_qubit(const TruncatedSpace& space, const Qubit2& q, int osc, const CMatrix& op);

CMatrix ladder_power(const TruncatedSpace& space, int osc, int n);
CMatrix displacement(const TruncatedSpace& space, int osc, cplx alpha);
CMatrix squeezing(const TruncatedSpace& space, int osc, int n, cplx zeta);
CMatrix rotation(const TruncatedSpace& space, int osc, double angle);

namespace qubit {
Qubit2 sigma_minus();  // |g><e|
Qubit2 sigma_plus();
Qubit2 sigma_x();
Qubit2 sigma_z();  // +1 on |e>
Qubit2 hadamard();
}  // namespace qubit

double unitarity_error(const CMatrix& u);

}  // namespace bosonic
