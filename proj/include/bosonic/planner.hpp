#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bosonic/gates.hpp"
#include "bosonic/schedule.hpp"
#include "bosonic/targets.hpp"

namespace bosonic {

constexpr double kOccupancyTol = 1e-12;

// Fock level j n + k sits at row j, column k. Row 0 is the base row.
struct PunchCard {
  int n = 1;
  int max_level = 0;                          // L
  std::vector<std::vector<bool>> occupancy;   // [row][column]
  std::vector<int> heights;                   // h_k, one per column
  std::vector<bool> base;                     // row 0

  bool occupied(int level) const;
  int total_height() const;
};

PunchCard punch_card(const TargetState& target, int n, double tol = kOccupancyTol);
PunchCard punch_card_from_levels(const std::vector<int>& levels, int n);

// Steps to build a base state over levels 0..n-1: start from {0} and keep
// applying the largest listed order that reaches a new level.
int greedy_base_steps(int n, const std::vector<int>& orders = {1, 2});

struct StepCounts {
  int n_arb = 0;
  int k_arb = 0;
};
StepCounts steps_arbitrary(const PunchCard& card, int J);

// K pi / Omega + sum_{j=1..K} pi / (g_n xi(j n, n)).
double time_symmetric(int K, int n, const CouplingBudget& b);

enum class LeConvention {
  worked_example,      // L pi/Omega + sum_{j=2..L+1} pi/(g1 sqrt j)
  printed_no_drive,    // sum_{j=1..L} pi/(g1 sqrt j)
  printed_with_drive,  // L pi/Omega + sum_{j=1..L} pi/(g1 sqrt j)
};
double time_le(int L, const CouplingBudget& b, LeConvention conv = LeConvention::worked_example);

enum class BaseTimeConvention {
  worked_example,  // n linear symmetric steps, time_symmetric(n, 1); zero for n = 1
  le_steps,        // n - 1 linear steps, time_symmetric(n - 1, 1)
};
double base_time(int n, const CouplingBudget& b, BaseTimeConvention conv = BaseTimeConvention::worked_example);

// T_b + sum_k (h_k pi/Omega + sum_j pi/(g_n xi(j n + k, n))). Warns when the
// model says the selective drive is too fast (Omega >= |chi|).
double time_ftp(const PunchCard& card, const CouplingBudget& b, double base_time,
                const std::optional<DispersiveModel>& model = {});

// Two oscillators. Levels (l1, l2) are grouped by (l1 mod n1, l2 mod n2).
struct MultiPunchCard {
  int n1 = 1, n2 = 1;
  int L1 = 0, L2 = 0;
  std::vector<std::vector<bool>> occupancy;   // [l1][l2], (L1+1) x (L2+1)
  std::vector<std::vector<int>> h;            // n1 x n2, oscillator-1 climbs
  std::vector<std::vector<int>> hh;           // (L1+1) x n2, oscillator-2 climbs
  std::vector<std::vector<bool>> base;        // n1 x n2, base levels needed

  // Linear card over the base block.
  MultiPunchCard base_card() const;
  int climb_steps() const;
};

MultiPunchCard multi_punch_card(const TargetState& target, int n1, int n2, double tol = kOccupancyTol);
MultiPunchCard multi_punch_card(const std::vector<std::vector<bool>>& occupancy, int n1, int n2);

// Total steps: linear base steps plus both climbing stages.
int steps_two_oscillator(const MultiPunchCard& card);
// J + n2 (L1 - (n1 - 1)) + (L1 + 1)(L2 - (n2 - 1)).
int k_arb_two_oscillator(int J, int n1, int L1, int n2, int L2);

// Literal upper bound over H_{0,n1} x H_{0,n2} with L1, L2 step counts.
double time_two_oscillator(int L1, int n1, int L2, int n2, const CouplingBudget& b);
// T_b + T_c1 + T_c2 with T_b from the linear base card.
double time_ftp_two_oscillator(const MultiPunchCard& card, const CouplingBudget& b);

struct ScalingRow {
  int K = 0;
  int n = 1;
  double omega = 0;
  double g = 0;
  double T_ns = 0;
};

struct CouplingVariant {
  int n;
  double g;
};

// Every (omega, variant) pair for K = 0..floor(max_linear_steps / n).
std::vector<ScalingRow> scaling_table(const std::vector<double>& omegas, const std::vector<CouplingVariant>& variants,
                                      int max_linear_steps);
// Omega in {25, 200} MHz; n = 1 at g1, n = 2 at g1/4 and g1/8.
std::vector<ScalingRow> figure2_table(int max_linear_steps = 40);
// Same omegas; n = 1, n = 3 at g1/20 and g1/40, n = 4 at g1/200 and g1/400.
std::vector<ScalingRow> figure5_table(int max_linear_steps = 40);
std::string scaling_csv(const std::vector<ScalingRow>& rows);

// Rows top to bottom, a dashed line above the base row.
std::string render_punch_card(const PunchCard& card);

}  // namespace bosonic
