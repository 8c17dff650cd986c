#pragma once

#include <map>
#include <optional>
#include <string>

#include "bosonic/gates.hpp"

namespace bosonic {

struct CouplingBudget {
  double omega = 0;          // drive Rabi rate, rad/s
  std::map<int, double> g;   // interaction order -> coupling, rad/s

  // Omega = g2 = 2pi x 25 MHz, g1 = 2pi x 100 MHz.
  static CouplingBudget standard();
  double magnitude(const PulseStep& s) const;
  void validate() const;
  // Reads omega_* and g<n>_* keys (see config.hpp for units).
  static CouplingBudget from_key_values(const std::map<std::string, std::string>& kv);
};

struct PulseSchedule {
  std::vector<int> osc_cutoffs;
  std::optional<CouplingBudget> budget;
  std::vector<PulseStep> steps;
  std::string target;
  std::optional<double> fidelity;
  std::optional<double> duration_s;
  // Replay conventions, stored in meta.
  Semantics semantics = Semantics::exact;
  FockLabel initial;  // replay starts from |g, initial>
  std::vector<std::optional<double>> drive_freqs;  // per step when annotated

  TruncatedSpace space() const { return TruncatedSpace(osc_cutoffs); }
  int num_njc() const;
};

double schedule_duration(const PulseSchedule& s, const CouplingBudget& b);
double schedule_duration(const PulseSchedule& s);

// Canonical sign/phase form: area >= 0 with phase in (-pi, pi].
PulseStep canonical(const PulseStep& s);
bool equivalent(const PulseStep& a, const PulseStep& b, double tol);
double wrap_phase(double phi);

std::string to_json(const PulseSchedule& s);
PulseSchedule schedule_from_json(const std::string& text);
PulseSchedule read_schedule(const std::string& path);
void write_schedule(const std::string& path, const PulseSchedule& s);

}  // namespace bosonic
