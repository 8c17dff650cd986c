#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "bosonic/operators.hpp"
#include "bosonic/schedule.hpp"
#include "bosonic/wigner.hpp"

namespace bosonic {

// Circuit couplings in rad/s.
struct CircuitParams {
  double omega_q = 0, omega_o = 0, g2 = 0;
  double g_e1 = 0, g_e2 = 0, g_e3 = 0, g_e4 = 0, g_e5 = 0, g_c = 0;

  // Tunable transmon / asymmetric SQUID values used for the cat runs.
  static CircuitParams defaults();
  CircuitParams without_spurious() const;
  // Keys: omega_q, omega_o, g2, g_e1..g_e5, g_c with a unit suffix (see config.hpp).
  // Missing keys keep their default values.
  static CircuitParams from_key_values(const std::map<std::string, std::string>& kv);
};

// Rates in 1/s (no 2 pi).
struct NoiseRates {
  double q_r = 0, o_r = 0, q_phi = 0, o_phi = 0;

  static NoiseRates defaults();  // 2e4, 2e4, 1.1e5, 1.1e5
  static NoiseRates zero() { return {}; }
  // Keys: gamma_q_r, gamma_o_r, gamma_q_phi, gamma_o_phi with a rate suffix.
  static NoiseRates from_key_values(const std::map<std::string, std::string>& kv);
};

struct IntegrationError : Error {
  IntegrationError(const std::string& msg, double t) : Error(msg + " at t = " + std::to_string(t) + " s"), time(t) {}
  double time;
};

// H(t) = sum_m coeff_m exp(i freq_m t) op_m; terms come in conjugate pairs.
struct HamiltonianTerm {
  SparseC op;
  cplx coeff;
  double freq = 0;  // rad/s
};

struct TimeDependentHamiltonian {
  TruncatedSpace space;
  std::vector<HamiltonianTerm> terms;

  CMatrix at(double t) const;
  // Sum of the terms with zero frequency.
  CMatrix static_part() const;
};

// Two-photon circuit Hamiltonian minus the free part, in the frame rotating
// with (omega_q/2) sigma_z + omega_o a^dag a. `phase` multiplies the g2
// sigma_+ terms by exp(i phase) (and sigma_- by its conjugate).
TimeDependentHamiltonian interaction_hamiltonian(const TruncatedSpace& space, const CircuitParams& p,
                                                 double phase = 0);
CMatrix hamiltonian_interaction_picture(const TruncatedSpace& space, const CircuitParams& p, double t,
                                        double phase = 0);
// Omega (e^{i theta} sigma_+ + h.c.).
TimeDependentHamiltonian drive_hamiltonian(const TruncatedSpace& space, double omega, double theta);

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_dt = 1e-12;
  double min_dt = 1e-20;
  long max_steps = 50'000'000;
  bool eigen_check_each_step = false;  // positivity at every accepted step
};

struct EvolveStats {
  long accepted = 0;
  long rejected = 0;
  double max_trace_error = 0;
  double max_hermiticity_error = 0;  // before symmetrization
  double min_eigenvalue = 1;         // over the checks performed
  int eigen_checks = 0;

  void merge(const EvolveStats& o);
};

// Integrates d rho/dt = -i[H(t), rho] + q_r D(sigma_-) + (q_phi/2) D(sigma_z)
// + o_r D(a) + o_phi D(a^dag a) from t0 to t1.
DensityMatrix lindblad_evolve(const DensityMatrix& rho0, const TimeDependentHamiltonian& h, const NoiseRates& rates,
                              double t0, double t1, const IntegratorOptions& opt = {}, EvolveStats* stats = nullptr);

struct OpenOptions {
  IntegratorOptions integrator;
  int cutoff = 30;  // raised to the schedule cutoff if smaller
};

struct OpenResult {
  DensityMatrix rho;
  double fidelity = 0;      // sqrt(<g, psi| rho |g, psi>)
  double fidelity_osc = 0;  // sqrt(<psi| Tr_q rho |psi>)
  double duration_s = 0;
  EvolveStats stats;
};

// Single-oscillator schedules with non-selective drives and order-2 njc steps.
// Drive steps use the drive Hamiltonian at the budget's Omega; njc steps use
// the circuit Hamiltonian for |area| / g2. Interaction-picture phases run on
// the schedule clock. `target` is an oscillator state (any length).
OpenResult run_open_protocol(const PulseSchedule& s, const CircuitParams& p, const NoiseRates& rates,
                             const CVector& target, const OpenOptions& opt = {});

struct Lobe {
  double x = 0, p = 0, weight = 0;
};
// Positive-weight centroids in `count` angular sectors centred on 2 pi s / count,
// ignoring |(x, p)| < r_min.
std::vector<Lobe> lobe_centroids(const WignerGrid& w, int count, double r_min = 1.0);

struct WignerComparison {
  WignerGrid ideal, open;
  double max_deviation = 0;
  std::vector<Lobe> ideal_lobes, open_lobes;
  double lobe_shift = 0;     // mean centroid displacement
  double lobe_rotation = 0;  // mean centroid angle change, rad
  OpenResult run;
};

WignerComparison wigner_comparison(const PulseSchedule& s, const CircuitParams& p, const NoiseRates& rates,
                                   const CVector& target, const GridSpec& grid = {}, const OpenOptions& opt = {},
                                   int lobes = 4);

// "row,col,re,im" for entries with modulus above 1e-14.
void write_density_csv(std::ostream& os, const DensityMatrix& rho);

}  // namespace bosonic
