#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <algorithm>
#include <random>

#include "bosonic/planner.hpp"

using namespace bosonic;
constexpr double pi = std::numbers::pi;

namespace {
const CouplingBudget b = CouplingBudget::standard();
double ns(double s) { return s * 1e9; }
}  // namespace

TEST_CASE("punch card heights") {
  PunchCard a = punch_card(fock_superposition({0, 1, 7}), 2);
  CHECK(a.heights == std::vector<int>{0, 3});
  CHECK(a.base == std::vector<bool>{true, true});
  CHECK(a.occupied(7));
  CHECK_FALSE(a.occupied(5));
  PunchCard c = punch_card(fock_superposition({0, 1, 2, 5, 12}), 3);
  CHECK(c.heights == std::vector<int>{4, 0, 1});
  PunchCard z = punch_card(fock_superposition({0}), 3);
  CHECK(z.heights == std::vector<int>{0, 0, 0});
  CHECK(z.total_height() == 0);
}

TEST_CASE("step counts") {
  CHECK(steps_arbitrary(punch_card_from_levels({0, 1, 7}, 2), 1).n_arb == 4);
  CHECK(steps_arbitrary(punch_card_from_levels({0, 1, 2, 5, 12}, 3), 2).n_arb == 7);
  CHECK(greedy_base_steps(1) == 0);
  CHECK(greedy_base_steps(2) == 1);
  CHECK(greedy_base_steps(3) == 2);
  CHECK(greedy_base_steps(6) == 3);
  for (int L = 7; L < 30; ++L) {
    PunchCard card = punch_card_from_levels({0, L}, 6);
    CHECK(steps_arbitrary(card, greedy_base_steps(6)).k_arb == L - 2);
  }
  std::mt19937 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + rng() % 5, L = n + 1 + rng() % 25;
    std::vector<int> lv = {0, L};
    for (int l = 1; l < L; ++l)
      if (rng() % 2) lv.push_back(l);
    StepCounts s = steps_arbitrary(punch_card_from_levels(lv, n), n - 1);
    CHECK(s.n_arb <= s.k_arb);
  }
}

TEST_CASE("symmetric time estimate") {
  CHECK(ns(time_symmetric(10, 1, b)) == doctest::Approx(225.11).epsilon(0.01 / 225.11));
  CHECK(ns(time_symmetric(5, 2, b)) == doctest::Approx(128.35).epsilon(0.01 / 128.35));
  CHECK(time_symmetric(0, 2, b) == 0.0);
  double manual = 0;
  for (int j = 1; j <= 4; ++j) manual += pi / b.omega + pi / (b.g.at(2) * std::sqrt(2.0 * j * (2 * j - 1)));
  CHECK(time_symmetric(4, 2, b) == doctest::Approx(manual).epsilon(1e-14));
  for (int K = 1; K < 30; ++K) CHECK(time_symmetric(K, 1, b) > time_symmetric(K - 1, 1, b));
  CouplingBudget fast = b;
  fast.g[2] *= 1.5;
  CHECK(time_symmetric(6, 2, fast) < time_symmetric(6, 2, b));
  fast.omega *= 1.5;
  CHECK(time_symmetric(6, 2, fast) < time_symmetric(6, 2, b));
}

TEST_CASE("linear time estimate") {
  CHECK(ns(time_le(9, b)) == doctest::Approx(200.11).epsilon(0.01 / 200.11));
  CHECK(ns(time_le(10, b)) == doctest::Approx(221.61).epsilon(0.01 / 221.61));
  CHECK(time_le(0, b) == 0.0);
  double sum = 0;
  for (int j = 1; j <= 9; ++j) sum += pi / (b.g.at(1) * std::sqrt(double(j)));
  CHECK(time_le(9, b, LeConvention::printed_no_drive) == doctest::Approx(sum).epsilon(1e-14));
  CHECK(time_le(9, b, LeConvention::printed_with_drive) == doctest::Approx(sum + 9 * pi / b.omega).epsilon(1e-14));
}

TEST_CASE("FTP time estimate") {
  PunchCard a = punch_card_from_levels({0, 2, 5, 9}, 2);
  CHECK(a.heights == std::vector<int>{1, 4});
  CHECK(ns(time_ftp(a, b, base_time(2, b))) == doctest::Approx(180.76).epsilon(0.01 / 180.76));
  PunchCard u = punch_card_from_levels({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 2);
  CHECK(u.heights == std::vector<int>{5, 4});
  CHECK(ns(time_ftp(u, b, base_time(2, b))) == doctest::Approx(274.96).epsilon(0.01 / 274.96));
  CHECK(time_ftp(punch_card_from_levels({0}, 2), b, 0) == 0.0);
  CHECK(base_time(1, b) == 0.0);

  PunchCard col0 = punch_card_from_levels({0, 2, 4, 6, 8}, 2);
  CHECK(time_ftp(col0, b, 0) == doctest::Approx(time_symmetric(4, 2, b)).epsilon(1e-14));

  int warnings = 0;
  auto prev = set_warning_sink([&](const std::string&) { ++warnings; });
  DispersiveModel slow(2, 2 * pi * 5e9, 2 * pi * 2.4e9, 2 * pi * 1e6);
  time_ftp(a, b, 0, slow);
  set_warning_sink(prev);
  CHECK(warnings == 1);
}

TEST_CASE("two-oscillator step and time accounting") {
  for (int n1 : {1, 2, 3})
    for (int n2 : {1, 2})
      for (int L1 = n1; L1 <= 6; ++L1)
        for (int L2 = n2; L2 <= 5; ++L2) {
          MultiPunchCard c = multi_punch_card(dense_state(L1, L2), n1, n2);
          CHECK(steps_two_oscillator(c) == k_arb_two_oscillator(n1 * n2 - 1, n1, L1, n2, L2));
        }
  CHECK(steps_two_oscillator(multi_punch_card(dense_state(4, 4), 2, 2)) == 24);
  CHECK(ns(time_ftp_two_oscillator(multi_punch_card(noon_state(2), 1, 1), b)) ==
        doctest::Approx(97.07).epsilon(0.01 / 97.07));
  CHECK(ns(time_ftp_two_oscillator(multi_punch_card(noon_state(2), 2, 2), b)) ==
        doctest::Approx(68.28).epsilon(0.01 / 68.28));
  CHECK(time_two_oscillator(2, 1, 2, 1, b) >= time_ftp_two_oscillator(multi_punch_card(noon_state(2), 1, 1), b));
  MultiPunchCard d = multi_punch_card(dense_state(4, 4), 2, 2);
  CHECK(d.h.size() == 2);
  CHECK(d.hh.size() == 5);
  CHECK(d.hh[0].size() == 2);
}

TEST_CASE("scaling tables") {
  auto rows = scaling_table({b.omega}, {{1, b.g.at(1)}, {2, b.g.at(2)}}, 10);
  CHECK(rows.size() == 11 + 6);
  std::string csv = scaling_csv(rows);
  CHECK(csv.rfind("K,n,omega_radps,g_radps,T_ns\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 17);
  for (const auto& r : figure2_table(40)) CHECK(r.T_ns >= 0);
}

TEST_CASE("punch card rendering") {
  std::string s = render_punch_card(punch_card_from_levels({0, 1, 7}, 2));
  CHECK(s.find("●") != std::string::npos);
  CHECK(s.find("○") != std::string::npos);
  CHECK(s.find("-") != std::string::npos);
}

namespace {
double t_at(int K, int n, double omega, double g) {
  CouplingBudget c;
  c.omega = omega;
  c.g[n] = g;
  return time_symmetric(K, n, c);
}
const double g1 = 2 * pi * 100e6, w25 = 2 * pi * 25e6, w200 = 2 * pi * 200e6;
}  // namespace

TEST_CASE("two-photon dominance at 25 MHz") {
  for (int K = 1; K <= 20; ++K) CHECK(t_at(K, 2, w25, g1 / 4) < t_at(2 * K, 1, w25, g1));
}

TEST_CASE("crossover at 200 MHz") {
  for (double g2 : {g1 / 4, g1 / 8}) {
    CHECK(t_at(1, 2, w200, g2) > t_at(2, 1, w200, g1));
    CHECK(t_at(20, 2, w200, g2) < t_at(40, 1, w200, g1));
  }
}

TEST_SUITE("g4_ratio_example") {
  TEST_CASE("four-photon time exceeds ten linear times at g4 = g1/200") {
    double best = 0;
    for (int K = 1; K <= 10; ++K) best = std::max(best, t_at(K, 4, w200, g1 / 200) / t_at(4 * K, 1, w200, g1));
    CHECK(best > 10);
  }
}
