#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bosonic {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct OrderError : Error {
  using Error::Error;
};
struct SymmetryError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

// Warnings go through a process-wide sink; the default writes to stderr.
// Returns the previous sink.
using WarningSink = std::function<void(const std::string&)>;
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string& msg);

// Qubit level encoding in basis labels.
enum class Qubit : int { g = 0, e = 1 };

// Qubit tensor one or two oscillators. Basis index of (q, l1[, l2]) is
//   q * (D1*D2) + l1 * D2 + l2
// so the qubit is slowest and the last oscillator fastest. q = 0 is |g>.
class TruncatedSpace {
 public:
  TruncatedSpace() = default;
  explicit TruncatedSpace(std::vector<int> cutoffs);

  int num_oscillators() const { return static_cast<int>(cutoffs_.size()); }
  int cutoff(int osc) const {
    if (osc < 0 || osc >= num_oscillators()) throw DimensionError("oscillator index out of range");
    return cutoffs_[osc];
  }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  // Product of oscillator cutoffs.
  int osc_dim() const { return osc_dim_; }
  int dim() const { return 2 * osc_dim_; }

  int index(Qubit q, const std::vector<int>& fock) const;
  int osc_index(const std::vector<int>& fock) const;
  // Inverse map; fills fock with one entry per oscillator.
  Qubit label(int idx, std::vector<int>& fock) const;
  // Stride of an oscillator inside the oscillator block.
  int stride(int osc) const;

  bool operator==(const TruncatedSpace& o) const { return cutoffs_ == o.cutoffs_; }
  bool operator!=(const TruncatedSpace& o) const { return !(*this == o); }

 private:
  std::vector<int> cutoffs_;
  int osc_dim_ = 0;
};

TruncatedSpace make_space(const std::vector<int>& cutoffs);

class StateVector {
 public:
  StateVector() = default;
  StateVector(TruncatedSpace space, CVector amps);
  static StateVector basis(const TruncatedSpace& space, Qubit q, const std::vector<int>& fock);
  // |q> tensor an oscillator vector laid out by osc_index.
  static StateVector product(const TruncatedSpace& space, Qubit q, const CVector& osc);

  const TruncatedSpace& space() const { return space_; }
  const CVector& amps() const { return amps_; }
  CVector& amps() { return amps_; }
  cplx amp(Qubit q, const std::vector<int>& fock) const { return amps_[space_.index(q, fock)]; }

  double norm() const { return amps_.norm(); }
  StateVector& normalize();

 private:
  TruncatedSpace space_;
  CVector amps_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(TruncatedSpace space, CMatrix rho);
  static DensityMatrix pure(const StateVector& psi);

  const TruncatedSpace& space() const { return space_; }
  const CMatrix& matrix() const { return rho_; }
  CMatrix& matrix() { return rho_; }

  double trace() const { return rho_.trace().real(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  void symmetrize();

 private:
  TruncatedSpace space_;
  CMatrix rho_;
};

// Re-expresses a state in a space with the same oscillator count, dropping
// or zero-padding Fock levels.
StateVector embed(const StateVector& psi, const TruncatedSpace& space);
DensityMatrix embed(const DensityMatrix& rho, const TruncatedSpace& space);

// Reduced oscillator density matrix (qubit traced out).
CMatrix trace_out_qubit(const DensityMatrix& rho);
CMatrix trace_out_qubit(const StateVector& psi);

}  // namespace bosonic
