#include "bosonic/multiosc.hpp"

#include <algorithm>
#include <cmath>

namespace bosonic {

namespace {

std::vector<int> working_cutoffs(const MultiPunchCard& card, const TwoOscOptions& opt) {
  std::vector<int> c = {std::max(2, card.L1 + card.n1), std::max(2, card.L2 + card.n2)};
  if (opt.cutoffs) {
    const auto& o = *opt.cutoffs;
    if (o.size() != 2) throw DimensionError("two cutoffs expected");
    if (o[0] < card.L1 + 1 || o[1] < card.L2 + 1) throw DimensionError("working cutoffs too small for the target");
    c = o;
  }
  return c;
}

TwoOscResult finish(const TargetState& target, std::vector<ClimbStep> climbs, const std::vector<int>& cutoffs,
                    const TwoOscOptions& opt) {
  TruncatedSpace space(cutoffs);
  StateVector psi = target_vector(target, space);
  std::vector<PulseStep> steps = invert_climbs(psi, climbs, opt.semantics);
  double ov = std::abs(psi.amp(Qubit::g, {0, 0}));
  if (opt.semantics == Semantics::ideal_pair && ov < 1 - 1e-9) {
    warn("two-oscillator inversion left residual " + std::to_string(1 - ov));
  }
  TwoOscResult r;
  PulseSchedule& s = r.schedule;
  s.osc_cutoffs = cutoffs;
  s.semantics = opt.semantics;
  s.initial = {0, 0};
  s.budget = opt.budget;
  s.steps = std::move(steps);
  s.target = target.label;
  s.fidelity = replay_fidelity(s, target, s.semantics);
  if (s.budget) s.duration_s = schedule_duration(s, *s.budget);
  r.fidelity_ideal = replay_fidelity_truncated(s, target, Semantics::ideal_pair);
  r.fidelity_exact = replay_fidelity_truncated(s, target, Semantics::exact);
  return r;
}

bool in_zero_subspaces(const MultiPunchCard& c) {
  for (int l1 = 0; l1 <= c.L1; ++l1)
    for (int l2 = 0; l2 <= c.L2; ++l2)
      if (c.occupancy[l1][l2] && (l1 % c.n1 || l2 % c.n2)) return false;
  return true;
}

// Oscillator-2 climbs, row outer, oscillator-1 level inner.
void second_stage(const MultiPunchCard& c, int order, std::vector<ClimbStep>& out, int& count) {
  int rows = 0;
  for (const auto& r : c.hh)
    for (int v : r) rows = std::max(rows, v);
  for (int i = 1; i <= rows; ++i)
    for (int k2 = 0; k2 < c.n2; ++k2)
      for (int m = 0; m <= c.L1; ++m)
        if (i <= c.hh[m][k2]) {
          out.push_back({1, order, {m, (i - 1) * c.n2 + k2}});
          ++count;
        }
}

void first_stage(const MultiPunchCard& c, int order, std::vector<ClimbStep>& out, int& count) {
  int rows = 0;
  for (const auto& r : c.h)
    for (int v : r) rows = std::max(rows, v);
  for (int j = 1; j <= rows; ++j)
    for (int k2 = 0; k2 < c.n2; ++k2)
      for (int k1 = 0; k1 < c.n1; ++k1)
        if (j <= c.h[k1][k2]) {
          out.push_back({0, order, {(j - 1) * c.n1 + k1, k2}});
          ++count;
        }
}

}  // namespace

TwoOscResult invert_two_oscillator_traced(const TargetState& target, int n1, int n2, const TwoOscOptions& opt) {
  MultiPunchCard card = multi_punch_card(target, n1, n2);
  if (!in_zero_subspaces(card)) {
    throw SymmetryError("target is not confined to H_{0," + std::to_string(n1) + "} x H_{0," + std::to_string(n2) + "}");
  }
  std::vector<ClimbStep> climbs;
  int s1 = 0, s2 = 0;
  first_stage(card, n1, climbs, s1);
  second_stage(card, n2, climbs, s2);
  TwoOscResult r = finish(target, std::move(climbs), working_cutoffs(card, opt), opt);
  r.stage1_steps = s1;
  r.stage2_steps = s2;
  return r;
}

PulseSchedule invert_two_oscillator(const TargetState& target, int n1, int n2, const TwoOscOptions& opt) {
  return invert_two_oscillator_traced(target, n1, n2, opt).schedule;
}

TwoOscResult ftp_two_oscillator_traced(const TargetState& target, int n1, int n2, const TwoOscOptions& opt) {
  MultiPunchCard card = multi_punch_card(target, n1, n2);
  if (in_zero_subspaces(card)) {
    TwoOscResult r = invert_two_oscillator_traced(target, n1, n2, opt);
    r.delegated = true;
    return r;
  }
  std::vector<ClimbStep> climbs;
  int sb = 0, s1 = 0, s2 = 0;
  MultiPunchCard base = card.base_card();
  first_stage(base, 1, climbs, sb);
  second_stage(base, 1, climbs, sb);
  first_stage(card, n1, climbs, s1);
  second_stage(card, n2, climbs, s2);
  TwoOscResult r = finish(target, std::move(climbs), working_cutoffs(card, opt), opt);
  r.base_steps = sb;
  r.stage1_steps = s1;
  r.stage2_steps = s2;
  return r;
}

PulseSchedule ftp_two_oscillator(const TargetState& target, int n1, int n2, const TwoOscOptions& opt) {
  return ftp_two_oscillator_traced(target, n1, n2, opt).schedule;
}

PulseSchedule annotate_frequencies(const PulseSchedule& s, const std::vector<DispersiveModel>& models) {
  if (models.size() != s.osc_cutoffs.size()) {
    throw ConfigError("annotate_frequencies needs one dispersive model per oscillator");
  }
  PulseSchedule out = s;
  out.drive_freqs.assign(s.steps.size(), std::nullopt);
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const auto& st = s.steps[i];
    if (st.kind == StepKind::drive && st.select.size() == 1) {
      out.drive_freqs[i] = selective_drive_frequency(models, st.select[0]);
    }
  }
  return out;
}

}  // namespace bosonic
