#pragma once

#include <optional>

#include "bosonic/schedule.hpp"
#include "bosonic/targets.hpp"

namespace bosonic {

// Mixing angle and phase solving one inversion constraint. `angle` is signed
// and phase is 0 whenever the constraint ratio is real.
struct AngleSolution {
  double angle = 0;
  double phase = 0;
};

// njc: new c_g = c_g cos X + i e^{-i phi} sin X c_e = 0.
AngleSolution solve_njc_constraint(cplx cg, cplx ce, int branch = 0);
// drive: new c_e = i e^{i theta} sin Y c_g + cos Y c_e = 0.
AngleSolution solve_drive_constraint(cplx cg, cplx ce, int branch = 0);

// Per inversion step (forward step index j = 0..M-1) offsets in units of pi
// added to the principal mixing angle; empty means principal everywhere.
struct BranchPolicy {
  std::vector<int> njc;
  std::vector<int> drive;
  int njc_at(int j) const { return j < static_cast<int>(njc.size()) ? njc[j] : 0; }
  int drive_at(int j) const { return j < static_cast<int>(drive.size()) ? drive[j] : 0; }
};

struct InversionOptions {
  Semantics semantics = Semantics::exact;
  BranchPolicy branches;
  std::optional<int> cutoff;       // working cutoff; default M n + k + n
  std::optional<int> steps;        // force M (pads with zero-area steps)
  std::optional<CouplingBudget> budget;
};

struct InversionResult {
  PulseSchedule schedule;
  // |e, top - n> after each drive inversion and |g, top> after each njc inversion.
  std::vector<double> cleared_residuals;
  // Distance of the fully inverted state from |g, k> (up to phase).
  double final_residual = 0;
  // Mixing angles per forward step.
  std::vector<double> njc_angles, drive_angles;
};

InversionResult invert_symmetric_traced(const TargetState& target, int n, const InversionOptions& opt = {});
PulseSchedule invert_symmetric(const TargetState& target, int n, const InversionOptions& opt = {});

// Recovers the per-step branch offsets that make the inversion reproduce the
// given forward-order reference areas (tolerance on area). Returns nullopt if
// some reference value is not a root of its step constraint.
std::optional<BranchPolicy> classify_branches(const TargetState& target, int n,
                                              const std::vector<double>& njc_areas,
                                              const std::vector<double>& drive_areas, double tol = 1e-3,
                                              int max_offset = 3);

// Full-space state of a target embedded as |g> x target.
StateVector target_vector(const TargetState& t, const TruncatedSpace& space);

StateVector apply_schedule(const PulseSchedule& s, const StateVector& initial, Semantics sem);
StateVector apply_schedule(const PulseSchedule& s, Semantics sem);  // from |g, s.initial>
// Reversed, conjugated schedule.
StateVector apply_inverse_schedule(const PulseSchedule& s, const StateVector& state, Semantics sem);
// State after every step, starting with the initial state (size steps + 1).
std::vector<StateVector> replay_trace(const PulseSchedule& s, Semantics sem);
// Product of all step propagators (first step rightmost).
CMatrix schedule_unitary(const PulseSchedule& s, Semantics sem);

// Overlap fidelity of the replayed state against the target reference.
double replay_fidelity(const PulseSchedule& s, const TargetState& t, Semantics sem);
// Same, against the truncated target itself.
double replay_fidelity_truncated(const PulseSchedule& s, const TargetState& t, Semantics sem);

// A selective drive on `source` followed by an order-n swap into source + n on `osc`.
struct ClimbStep {
  int osc = 0;
  int order = 1;
  FockLabel source;
};

// Inverts the climbing steps (given in forward order) from `state`, which is
// left in the collapsed base state. Returns forward-order pulse steps.
std::vector<PulseStep> invert_climbs(StateVector& state, const std::vector<ClimbStep>& climbs, Semantics sem);

struct FtpResult {
  PulseSchedule schedule;
  int base_steps = 0;
  int climb_steps = 0;
  double fidelity_ideal = 0;   // overlap fidelity vs truncated target, ideal-pair replay
  double fidelity_exact = 0;   // same under exact semantics (leakage report)
  bool delegated = false;      // target was in H_{0,n}
};

FtpResult ftp_schedule_traced(const TargetState& target, int n, const std::optional<CouplingBudget>& budget,
                              Semantics sem = Semantics::ideal_pair, std::optional<int> cutoff = {});
PulseSchedule ftp_schedule(const TargetState& target, int n, const std::optional<CouplingBudget>& budget,
                           Semantics sem = Semantics::ideal_pair);

struct RefineResult {
  PulseSchedule schedule;
  double initial_infidelity = 0;
  double final_infidelity = 0;
  int iterations = 0;
  bool improved = false;
};

// Local BFGS over all areas and phases minimizing 1 - |<target|replay>|^2.
RefineResult refine_schedule(const PulseSchedule& s, const StateVector& target, Semantics sem = Semantics::exact,
                             int max_iter = 400);

}  // namespace bosonic
