#include "bosonic/fidelity.hpp"

#include <algorithm>
#include <cmath>

namespace bosonic {

namespace {

TruncatedSpace common_space(const TruncatedSpace& a, const TruncatedSpace& b) {
  if (a.num_oscillators() != b.num_oscillators()) throw DimensionError("incompatible oscillator counts");
  std::vector<int> c(a.num_oscillators());
  for (int i = 0; i < a.num_oscillators(); ++i) c[i] = std::max(a.cutoff(i), b.cutoff(i));
  return TruncatedSpace(c);
}

CVector pad(const CVector& v, Eigen::Index n) {
  CVector out = CVector::Zero(n);
  out.head(v.size()) = v;
  return out;
}

}  // namespace

double fidelity(const StateVector& a, const StateVector& b) {
  TruncatedSpace s = common_space(a.space(), b.space());
  return std::norm(embed(b, s).amps().dot(embed(a, s).amps()));
}

double fidelity(const DensityMatrix& a, const StateVector& b) {
  TruncatedSpace s = common_space(a.space(), b.space());
  CVector bv = embed(b, s).amps();
  DensityMatrix ra = embed(a, s);
  return std::max(0.0, bv.dot(ra.matrix() * bv).real());
}

double overlap_fidelity(const StateVector& a, const StateVector& b) { return std::sqrt(fidelity(a, b)); }

double overlap_fidelity(const DensityMatrix& a, const StateVector& b) { return std::sqrt(fidelity(a, b)); }

double fidelity(const CVector& a, const CVector& b) {
  Eigen::Index n = std::max(a.size(), b.size());
  return std::norm(pad(b, n).dot(pad(a, n)));
}

double fidelity(const CMatrix& rho, const CVector& b) {
  Eigen::Index n = rho.rows();
  if (b.size() > n) {
    CMatrix r = CMatrix::Zero(b.size(), b.size());
    r.topLeftCorner(n, n) = rho;
    return std::max(0.0, b.dot(r * b).real());
  }
  CVector bp = pad(b, n);
  return std::max(0.0, bp.dot(rho * bp).real());
}

double overlap_fidelity(const CVector& a, const CVector& b) { return std::sqrt(fidelity(a, b)); }

}  // namespace bosonic
