#pragma once

#include <optional>
#include <vector>

#include "bosonic/operators.hpp"

namespace bosonic {

enum class StepKind { drive, njc };
enum class Semantics { exact, ideal_pair };

const char* to_string(Semantics s);
Semantics parse_semantics(const std::string& s);

using FockLabel = std::vector<int>;

struct PulseStep {
  StepKind kind = StepKind::drive;
  int osc = 0;    // njc: 0-based oscillator
  int order = 0;  // njc: interaction order
  double area = 0;
  double phase = 0;
  // drive: Fock labels the rotation is conditioned on; empty means unconditional.
  std::vector<FockLabel> select;

  static PulseStep drive(double area, double phase, std::vector<FockLabel> select = {});
  static PulseStep njc(int osc, int order, double area, double phase);
  bool selective() const { return !select.empty(); }
};

double xi(int a, int b);

// 2x2 drive in {g, e} order; signed area, phase theta.
Qubit2 drive_propagator(double area, double phase);
CMatrix drive_propagator(const TruncatedSpace& space, double area, double phase);
CMatrix selective_drive_propagator(const TruncatedSpace& space, double area, double phase,
                                   const std::vector<FockLabel>& selected);

// Exact n-photon JC step on one oscillator: every {|e,l>, |g,l+n>} pair that
// fits in the cutoff rotates by area * xi(l+n, n); unpaired states are fixed.
CMatrix njc_propagator(const TruncatedSpace& space, int osc, int n, double area, double phase);
// Same rotation on the single pair whose excited member is |e, source>.
CMatrix njc_pair_propagator(const TruncatedSpace& space, int osc, int n, double area, double phase,
                            const FockLabel& source);

// Propagator of one schedule step. For ideal-pair semantics `pair_source` picks
// the pair; without it the exact form is used.
CMatrix step_propagator(const TruncatedSpace& space, const PulseStep& step, Semantics sem,
                        const std::optional<FockLabel>& pair_source);

// Signed Stirling numbers of the first kind, exact for n <= 13.
long long stirling1(int n, int k);
// Coefficient of l^k in the order-n selective drive shift.
long long c_plus(int n, int k);

struct DispersiveModel {
  int order = 1;
  double omega_q = 0;  // rad/s
  double omega_o = 0;
  double g = 0;

  DispersiveModel() = default;
  DispersiveModel(int order, double omega_q, double omega_o, double g);
  double delta() const { return omega_q - order * omega_o; }
  double chi() const;
};

// omega_q + sum over oscillators of chi * sum_k C+_{n,k} l^k. One model per
// oscillator; omega_q is taken from the first.
double selective_drive_frequency(const std::vector<DispersiveModel>& models, const FockLabel& fock);

// H Rx(pi) Q(area) Rx(pi) Q(area) H with Rx(pi) = exp(-i pi sigma_x / 2).
CMatrix conditional_squeezing_via_sidebands(const TruncatedSpace& space, int n, double area);

}  // namespace bosonic
