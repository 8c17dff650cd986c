#pragma once

#include <optional>

#include "bosonic/planner.hpp"
#include "bosonic/synthesis.hpp"

namespace bosonic {

struct TwoOscResult {
  PulseSchedule schedule;
  int base_steps = 0;
  int stage1_steps = 0;  // oscillator-1 climbs
  int stage2_steps = 0;  // oscillator-2 climbs
  double fidelity_ideal = 0;
  double fidelity_exact = 0;
  bool delegated = false;
};

struct TwoOscOptions {
  std::optional<CouplingBudget> budget;
  std::optional<std::vector<int>> cutoffs;  // default L_i + n_i
  Semantics semantics = Semantics::ideal_pair;
};

// Target over H_{0,n1} x H_{0,n2}: oscillator-1 ladder at oscillator-2 vacuum,
// then rows of oscillator-2 climbs with columns ascending.
TwoOscResult invert_two_oscillator_traced(const TargetState& target, int n1, int n2, const TwoOscOptions& opt = {});
PulseSchedule invert_two_oscillator(const TargetState& target, int n1, int n2, const TwoOscOptions& opt = {});

// Arbitrary two-oscillator target: linear base block, then order-n1 climbs on
// oscillator 1, then order-n2 climbs on oscillator 2.
TwoOscResult ftp_two_oscillator_traced(const TargetState& target, int n1, int n2, const TwoOscOptions& opt = {});
PulseSchedule ftp_two_oscillator(const TargetState& target, int n1, int n2, const TwoOscOptions& opt = {});

// One model per oscillator. Selective drives with a single label get a
// frequency; every other step gets none.
PulseSchedule annotate_frequencies(const PulseSchedule& s, const std::vector<DispersiveModel>& models);

}  // namespace bosonic
