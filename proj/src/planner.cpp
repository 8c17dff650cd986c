#include "bosonic/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "bosonic/format.hpp"

namespace bosonic {

namespace {

constexpr double kPi = std::numbers::pi;

double climb_time(int dest, int n, const CouplingBudget& b) {
  auto it = b.g.find(n);
  if (it == b.g.end()) throw ConfigError("budget has no coupling for order " + std::to_string(n));
  return kPi / b.omega + kPi / (it->second * xi(dest, n));
}

}  // namespace

bool PunchCard::occupied(int level) const {
  int j = level / n, k = level % n;
  return j < static_cast<int>(occupancy.size()) && occupancy[j][k];
}

int PunchCard::total_height() const {
  int s = 0;
  for (int h : heights) s += h;
  return s;
}

PunchCard punch_card_from_levels(const std::vector<int>& levels, int n) {
  if (n < 1) throw OrderError("punch card order must be >= 1");
  PunchCard c;
  c.n = n;
  c.heights.assign(n, 0);
  for (int l : levels) {
    if (l < 0) throw DimensionError("negative Fock level");
    c.max_level = std::max(c.max_level, l);
  }
  int rows = c.max_level / n + 1;
  c.occupancy.assign(rows, std::vector<bool>(n, false));
  for (int l : levels) {
    c.occupancy[l / n][l % n] = true;
    c.heights[l % n] = std::max(c.heights[l % n], l / n);
  }
  c.base = c.occupancy[0];
  return c;
}

PunchCard punch_card(const TargetState& target, int n, double tol) {
  if (target.num_oscillators() != 1) throw DimensionError("punch_card needs a single-oscillator target");
  std::vector<int> levels;
  for (int l = 0; l < target.amps.size(); ++l)
    if (std::abs(target.amps[l]) > tol) levels.push_back(l);
  return punch_card_from_levels(levels, n);
}

int greedy_base_steps(int n, const std::vector<int>& orders) {
  std::vector<int> ord = orders;
  std::sort(ord.rbegin(), ord.rend());
  std::set<int> reached{0};
  int steps = 0;
  while (static_cast<int>(reached.size()) < n) {
    bool grew = false;
    for (int m : ord) {
      std::set<int> next = reached;
      for (int s : reached)
        if (s + m < n) next.insert(s + m);
      if (next.size() > reached.size()) {
        reached = std::move(next);
        grew = true;
        break;
      }
    }
    if (!grew) throw OrderError("listed orders cannot reach every base level");
    ++steps;
  }
  return steps;
}

StepCounts steps_arbitrary(const PunchCard& card, int J) {
  StepCounts s;
  s.n_arb = J + card.total_height();
  s.k_arb = J + card.max_level - (card.n - 1);
  return s;
}

double time_symmetric(int K, int n, const CouplingBudget& b) {
  if (K < 0) throw Error("negative step count");
  auto it = b.g.find(n);
  if (K > 0 && it == b.g.end()) throw ConfigError("budget has no coupling for order " + std::to_string(n));
  double t = K * kPi / b.omega;
  for (int j = 1; j <= K; ++j) t += kPi / (it->second * xi(j * n, n));
  return t;
}

double time_le(int L, const CouplingBudget& b, LeConvention conv) {
  if (L < 0) throw Error("negative support");
  if (L == 0) return 0;
  double g1 = b.g.at(1);
  double t = 0;
  int lo = conv == LeConvention::worked_example ? 2 : 1;
  for (int j = lo; j < lo + L; ++j) t += kPi / (g1 * std::sqrt(static_cast<double>(j)));
  if (conv != LeConvention::printed_no_drive) t += L * kPi / b.omega;
  return t;
}

double base_time(int n, const CouplingBudget& b, BaseTimeConvention conv) {
  if (n == 1) return 0;  // the base is |0> already
  return time_symmetric(conv == BaseTimeConvention::worked_example ? n : n - 1, 1, b);
}

double time_ftp(const PunchCard& card, const CouplingBudget& b, double tb, const std::optional<DispersiveModel>& model) {
  if (model && b.omega >= std::abs(model->chi())) {
    warn("drive rate does not satisfy Omega < |chi|; selective rotations will not resolve Fock levels");
  }
  double t = tb;
  for (int k = 0; k < card.n; ++k)
    for (int j = 1; j <= card.heights[k]; ++j) t += climb_time(j * card.n + k, card.n, b);
  return t;
}

MultiPunchCard multi_punch_card(const std::vector<std::vector<bool>>& occ, int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw OrderError("punch card orders must be >= 1");
  MultiPunchCard c;
  c.n1 = n1;
  c.n2 = n2;
  for (int l1 = 0; l1 < static_cast<int>(occ.size()); ++l1)
    for (int l2 = 0; l2 < static_cast<int>(occ[l1].size()); ++l2)
      if (occ[l1][l2]) {
        c.L1 = std::max(c.L1, l1);
        c.L2 = std::max(c.L2, l2);
      }
  c.occupancy.assign(c.L1 + 1, std::vector<bool>(c.L2 + 1, false));
  for (int l1 = 0; l1 <= c.L1 && l1 < static_cast<int>(occ.size()); ++l1)
    for (int l2 = 0; l2 <= c.L2 && l2 < static_cast<int>(occ[l1].size()); ++l2) c.occupancy[l1][l2] = occ[l1][l2];
  c.h.assign(n1, std::vector<int>(n2, 0));
  c.hh.assign(c.L1 + 1, std::vector<int>(n2, 0));
  c.base.assign(n1, std::vector<bool>(n2, false));
  for (int l1 = 0; l1 <= c.L1; ++l1)
    for (int l2 = 0; l2 <= c.L2; ++l2) {
      if (!c.occupancy[l1][l2]) continue;
      int k1 = l1 % n1, k2 = l2 % n2;
      c.h[k1][k2] = std::max(c.h[k1][k2], l1 / n1);
      c.hh[l1][k2] = std::max(c.hh[l1][k2], l2 / n2);
      c.base[k1][k2] = true;
    }
  return c;
}

MultiPunchCard multi_punch_card(const TargetState& target, int n1, int n2, double tol) {
  if (target.num_oscillators() != 2) throw DimensionError("multi_punch_card needs a two-oscillator target");
  int D1 = target.cutoffs[0], D2 = target.cutoffs[1];
  std::vector<std::vector<bool>> occ(D1, std::vector<bool>(D2, false));
  for (int l1 = 0; l1 < D1; ++l1)
    for (int l2 = 0; l2 < D2; ++l2) occ[l1][l2] = std::abs(target.amps[l1 * D2 + l2]) > tol;
  return multi_punch_card(occ, n1, n2);
}

MultiPunchCard MultiPunchCard::base_card() const { return multi_punch_card(base, 1, 1); }

int MultiPunchCard::climb_steps() const {
  int s = 0;
  for (const auto& r : h)
    for (int v : r) s += v;
  for (const auto& r : hh)
    for (int v : r) s += v;
  return s;
}

int steps_two_oscillator(const MultiPunchCard& card) {
  int s = card.climb_steps();
  if (card.n1 > 1 || card.n2 > 1) s += card.base_card().climb_steps();
  return s;
}

int k_arb_two_oscillator(int J, int n1, int L1, int n2, int L2) {
  return J + n2 * (L1 - (n1 - 1)) + (L1 + 1) * (L2 - (n2 - 1));
}

double time_two_oscillator(int L1, int n1, int L2, int n2, const CouplingBudget& b) {
  double t = (L1 + (L1 + 1.0) * L2) * kPi / b.omega;
  for (int j = 1; j <= L1; ++j) t += kPi / (b.g.at(n1) * xi(j * n1, n1));
  double s2 = 0;
  for (int j = 1; j <= L2; ++j) s2 += kPi / (b.g.at(n2) * xi(j * n2, n2));
  return t + (L1 + 1) * s2;
}

double time_ftp_two_oscillator(const MultiPunchCard& card, const CouplingBudget& b) {
  double t = 0;
  if (card.n1 > 1 || card.n2 > 1) t = time_ftp_two_oscillator(card.base_card(), b);
  for (int k1 = 0; k1 < card.n1; ++k1)
    for (int k2 = 0; k2 < card.n2; ++k2)
      for (int j = 1; j <= card.h[k1][k2]; ++j) t += climb_time(j * card.n1 + k1, card.n1, b);
  for (int m = 0; m <= card.L1; ++m)
    for (int k2 = 0; k2 < card.n2; ++k2)
      for (int j = 1; j <= card.hh[m][k2]; ++j) t += climb_time(j * card.n2 + k2, card.n2, b);
  return t;
}

std::vector<ScalingRow> scaling_table(const std::vector<double>& omegas, const std::vector<CouplingVariant>& variants,
                                      int max_linear_steps) {
  std::vector<ScalingRow> rows;
  for (double om : omegas)
    for (const auto& v : variants) {
      CouplingBudget b;
      b.omega = om;
      b.g[v.n] = v.g;
      for (int K = 0; K * v.n <= max_linear_steps; ++K) rows.push_back({K, v.n, om, v.g, time_symmetric(K, v.n, b) * 1e9});
    }
  return rows;
}

std::vector<ScalingRow> figure2_table(int max_linear_steps) {
  const double tp = 2 * kPi, g1 = tp * 100e6;
  return scaling_table({tp * 25e6, tp * 200e6}, {{1, g1}, {2, g1 / 4}, {2, g1 / 8}}, max_linear_steps);
}

std::vector<ScalingRow> figure5_table(int max_linear_steps) {
  const double tp = 2 * kPi, g1 = tp * 100e6;
  return scaling_table({tp * 25e6, tp * 200e6},
                       {{1, g1}, {3, g1 / 20}, {3, g1 / 40}, {4, g1 / 200}, {4, g1 / 400}}, max_linear_steps);
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream os;
  os << "K,n,omega_radps,g_radps,T_ns\n";
  for (const auto& r : rows)
    os << r.K << ',' << r.n << ',' << fmt_num(r.omega) << ',' << fmt_num(r.g) << ',' << fmt_num(r.T_ns) << '\n';
  return os.str();
}

std::string render_punch_card(const PunchCard& card) {
  std::ostringstream os;
  int rows = static_cast<int>(card.occupancy.size());
  for (int j = rows - 1; j >= 0; --j) {
    if (j == 0 && rows > 1) {
      os << "     ";
      for (int k = 0; k < card.n; ++k) os << (k ? "--" : "-");
      os << '\n';
    }
    std::string lbl = std::to_string(j * card.n);
    os << std::string(lbl.size() < 4 ? 4 - lbl.size() : 0, ' ') << lbl << ' ';
    for (int k = 0; k < card.n; ++k) os << (k ? " " : "") << (card.occupancy[j][k] ? "●" : "○");
    os << '\n';
  }
  return os.str();
}

}  // namespace bosonic
