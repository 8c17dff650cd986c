#pragma once

#include <map>
#include <string>

#include "bosonic/space.hpp"

namespace bosonic {

struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Oscillator-only amplitudes. For two oscillators the layout is l1 * D2 + l2.
struct TargetState {
  std::vector<int> cutoffs;  // amplitude layout per oscillator (max index + 1)
  CVector amps;
  int n = 1;  // rotational symmetry order (single oscillator)
  int k = 0;  // offset
  std::string label;
  // Untruncated comparison state (4x the working cutoff for analytic families).
  CVector reference;
  std::vector<int> reference_cutoffs;

  int num_oscillators() const { return static_cast<int>(cutoffs.size()); }
  cplx amp(const std::vector<int>& fock) const;
  // Highest Fock level with |amp| > tol on each oscillator.
  std::vector<int> max_indices(double tol = 1e-12) const;
  int max_index(double tol = 1e-12) const { return max_indices(tol).at(0); }
  // Overlap fidelity of amps against reference.
  double truncation_fidelity() const;
};

enum class CatKind { even2, odd2, four };
enum class GkpEnvelope { literal, gaussian_half };

CVector cat_amplitudes(int dim, cplx alpha, CatKind kind);
// Levels 0..dim-1.
TargetState cat_state(int dim, cplx alpha, CatKind kind);
CVector gkp_amplitudes(int dim, double kappa, double r, int P, GkpEnvelope env = GkpEnvelope::literal);
TargetState gkp_zero(int dim, double kappa, double r, int P, GkpEnvelope env = GkpEnvelope::literal);

struct SqueezingMetrics {
  double dx = 0, dp = 0;
  double dx_db = 0, dp_db = 0;
};
// <D(beta)> for a single-oscillator state, evaluated at an enlarged cutoff.
cplx displacement_expectation(const CVector& psi, cplx beta);
SqueezingMetrics effective_squeezing(const CVector& psi);
double squeezing_db(double delta);

// Two-oscillator targets.
TargetState noon_state(int N);
TargetState bell_cat_state(cplx alpha1, cplx alpha2, int trunc);
TargetState dense_state(int L1, int L2);
TargetState custom_two_osc(const std::map<std::pair<int, int>, cplx>& amps, std::string label = "custom");
TargetState fock_superposition(const std::vector<int>& levels);
TargetState from_amplitudes(const CVector& amps, std::string label);

// Largest n in {4, 2, 1} whose support lies in one class {l n + k}.
void infer_symmetry(TargetState& t);
bool has_symmetry(const TargetState& t, int n, int k, double tol = 1e-12);

TargetState parse_target(const std::string& spec);

}  // namespace bosonic
