#include "bosonic/space.hpp"

#include <iostream>
#include <mutex>

namespace bosonic {

namespace {
std::mutex g_sink_mu;
WarningSink g_sink;
}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lk(g_sink_mu);
  std::swap(g_sink, sink);
  return sink;
}

void warn(const std::string& msg) {
  std::lock_guard<std::mutex> lk(g_sink_mu);
  if (g_sink) {
    g_sink(msg);
  } else {
    std::cerr << "warning: " << msg << "\n";
  }
}

TruncatedSpace::TruncatedSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty() || cutoffs_.size() > 2) {
    throw DimensionError("space needs one or two oscillators");
  }
  osc_dim_ = 1;
  for (int d : cutoffs_) {
    if (d < 2) throw DimensionError("oscillator cutoff must be >= 2, got " + std::to_string(d));
    osc_dim_ *= d;
  }
}

TruncatedSpace make_space(const std::vector<int>& cutoffs) { return TruncatedSpace(cutoffs); }

int TruncatedSpace::stride(int osc) const {
  int s = 1;
  for (int i = num_oscillators() - 1; i > osc; --i) s *= cutoffs_[i];
  return s;
}

int TruncatedSpace::osc_index(const std::vector<int>& fock) const {
  if (static_cast<int>(fock.size()) != num_oscillators()) {
    throw DimensionError("Fock label has wrong number of oscillators");
  }
  int idx = 0;
  for (int i = 0; i < num_oscillators(); ++i) {
    if (fock[i] < 0 || fock[i] >= cutoffs_[i]) {
      throw DimensionError("Fock index " + std::to_string(fock[i]) + " outside cutoff " +
                           std::to_string(cutoffs_[i]));
    }
    idx = idx * cutoffs_[i] + fock[i];
  }
  return idx;
}

int TruncatedSpace::index(Qubit q, const std::vector<int>& fock) const {
  return static_cast<int>(q) * osc_dim_ + osc_index(fock);
}

Qubit TruncatedSpace::label(int idx, std::vector<int>& fock) const {
  if (idx < 0 || idx >= dim()) throw DimensionError("basis index out of range");
  Qubit q = idx >= osc_dim_ ? Qubit::e : Qubit::g;
  int rest = idx % osc_dim_;
  fock.assign(cutoffs_.size(), 0);
  for (int i = num_oscillators() - 1; i >= 0; --i) {
    fock[i] = rest % cutoffs_[i];
    rest /= cutoffs_[i];
  }
  return q;
}

StateVector::StateVector(TruncatedSpace space, CVector amps)
    : space_(std::move(space)), amps_(std::move(amps)) {
  if (amps_.size() != space_.dim()) throw DimensionError("amplitude vector size mismatch");
}

StateVector StateVector::basis(const TruncatedSpace& space, Qubit q, const std::vector<int>& fock) {
  CVector v = CVector::Zero(space.dim());
  v[space.index(q, fock)] = 1.0;
  return StateVector(space, v);
}

StateVector StateVector::product(const TruncatedSpace& space, Qubit q, const CVector& osc) {
  if (osc.size() != space.osc_dim()) throw DimensionError("oscillator vector size mismatch");
  CVector v = CVector::Zero(space.dim());
  v.segment(static_cast<int>(q) * space.osc_dim(), space.osc_dim()) = osc;
  return StateVector(space, v);
}

StateVector& StateVector::normalize() {
  double n = amps_.norm();
  if (n > 0) amps_ /= n;
  return *this;
}

DensityMatrix::DensityMatrix(TruncatedSpace space, CMatrix rho)
    : space_(std::move(space)), rho_(std::move(rho)) {
  if (rho_.rows() != space_.dim() || rho_.cols() != space_.dim()) {
    throw DimensionError("density matrix size mismatch");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.space(), psi.amps() * psi.amps().adjoint());
}

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::symmetrize() {
  CMatrix h = 0.5 * (rho_ + rho_.adjoint());
  rho_ = std::move(h);
}

namespace {

// Calls f(src_index, dst_index) for every basis state present in both spaces.
template <class F>
void for_common_basis(const TruncatedSpace& from, const TruncatedSpace& to, F f) {
  if (from.num_oscillators() != to.num_oscillators()) {
    throw DimensionError("incompatible oscillator counts");
  }
  std::vector<int> fock;
  for (int i = 0; i < from.dim(); ++i) {
    Qubit q = from.label(i, fock);
    bool inside = true;
    for (int k = 0; k < to.num_oscillators(); ++k) inside = inside && fock[k] < to.cutoff(k);
    if (inside) f(i, to.index(q, fock));
  }
}

}  // namespace

StateVector embed(const StateVector& psi, const TruncatedSpace& space) {
  if (psi.space() == space) return psi;
  CVector v = CVector::Zero(space.dim());
  for_common_basis(psi.space(), space, [&](int i, int j) { v[j] = psi.amps()[i]; });
  return StateVector(space, v);
}

DensityMatrix embed(const DensityMatrix& rho, const TruncatedSpace& space) {
  if (rho.space() == space) return rho;
  std::vector<std::pair<int, int>> map;
  for_common_basis(rho.space(), space, [&](int i, int j) { map.emplace_back(i, j); });
  CMatrix m = CMatrix::Zero(space.dim(), space.dim());
  for (auto [i, a] : map)
    for (auto [j, b] : map) m(a, b) = rho.matrix()(i, j);
  return DensityMatrix(space, m);
}

CMatrix trace_out_qubit(const DensityMatrix& rho) {
  int n = rho.space().osc_dim();
  return rho.matrix().topLeftCorner(n, n) + rho.matrix().bottomRightCorner(n, n);
}

CMatrix trace_out_qubit(const StateVector& psi) {
  int n = psi.space().osc_dim();
  CVector g = psi.amps().head(n);
  CVector e = psi.amps().tail(n);
  return g * g.adjoint() + e * e.adjoint();
}

}  // namespace bosonic
