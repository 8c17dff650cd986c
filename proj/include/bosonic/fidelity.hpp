#pragma once

#include "bosonic/space.hpp"

namespace bosonic {

// |<b|a>|^2, or <b|rho|b> for a density matrix. The smaller space is padded.
double fidelity(const StateVector& a, const StateVector& b);
double fidelity(const DensityMatrix& a, const StateVector& b);
// Square root of the above: |<b|a>| and sqrt(<b|rho|b>).
double overlap_fidelity(const StateVector& a, const StateVector& b);
double overlap_fidelity(const DensityMatrix& a, const StateVector& b);

// Oscillator-only vectors of possibly different length.
double fidelity(const CVector& a, const CVector& b);
double fidelity(const CMatrix& rho, const CVector& b);
double overlap_fidelity(const CVector& a, const CVector& b);

}  // namespace bosonic
