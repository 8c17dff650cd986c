#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "bosonic/gates.hpp"
#include "bosonic/operators.hpp"

using namespace bosonic;
constexpr double pi = std::numbers::pi;
const cplx I(0, 1);

namespace {
CVector basis(const TruncatedSpace& s, Qubit q, std::vector<int> f) {
  return StateVector::basis(s, q, f).amps();
}
double dist(const CVector& a, const CVector& b) { return (a - b).cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("drive propagator entries") {
  CHECK((drive_propagator(0, 0) - Qubit2::Identity()).norm() < 1e-15);
  Qubit2 u = drive_propagator(pi / 2, 0);
  CHECK(std::abs(u(1, 0) + I) < 1e-15);
  CHECK(std::abs(u(0, 0)) < 1e-15);
  Qubit2 q = drive_propagator(pi / 4, 0);
  CHECK(std::abs(q(0, 0) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(q(1, 0) + I / std::sqrt(2.0)) < 1e-15);
  Qubit2 t = drive_propagator(0.7, 0.4);
  CHECK(std::abs(t(1, 0) + I * std::polar(1.0, 0.4) * std::sin(0.7)) < 1e-15);
  CHECK((drive_propagator(-0.7, 0.4) - drive_propagator(0.7, 0.4 + pi)).norm() < 1e-14);
}

TEST_CASE("drive commutes with photon-number projectors") {
  TruncatedSpace s({5});
  CMatrix U = drive_propagator(s, 1.1, -0.3);
  for (int l = 0; l < 5; ++l) {
    CMatrix P = CMatrix::Zero(5, 5);
    P(l, l) = 1;
    CMatrix PP = lift_osc(s, 0, P);
    CHECK((U * PP - PP * U).norm() < 1e-14);
  }
}

TEST_CASE("selective drive acts only on the selected Fock state") {
  TruncatedSpace s({3, 3});
  CVector in = -basis(s, Qubit::g, {1, 0}) + basis(s, Qubit::g, {0, 0});
  CVector out = selective_drive_propagator(s, pi / 2, 0, {{1, 0}}) * in;
  CHECK(dist(out, I * basis(s, Qubit::e, {1, 0}) + basis(s, Qubit::g, {0, 0})) < 1e-15);

  TruncatedSpace s1({6});
  CVector v = (basis(s1, Qubit::g, {0}) + basis(s1, Qubit::e, {2})).normalized();
  CHECK(dist(selective_drive_propagator(s1, 0.9, 0.2, {{3}}) * v, v) < 1e-15);
  CHECK_THROWS_AS(selective_drive_propagator(s1, 1, 0, {{6}}), DimensionError);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int i = 0; i < 20; ++i) {
    std::vector<FockLabel> sel = {{int(rng() % 3), int(rng() % 3)}};
    CHECK(unitarity_error(selective_drive_propagator(s, u(rng), u(rng), sel)) < 1e-12);
  }
}

TEST_CASE("njc propagator examples") {
  TruncatedSpace s({6});
  CVector out = njc_propagator(s, 0, 2, pi / (2 * std::sqrt(2.0)), 0) * basis(s, Qubit::e, {0});
  CHECK(dist(out, -I * basis(s, Qubit::g, {2})) < 1e-14);

  TruncatedSpace s2({3, 3});
  CVector out2 = njc_propagator(s2, 1, 1, pi / (2 * std::sqrt(2.0)), 0) * (I * basis(s2, Qubit::e, {0, 1}));
  CHECK(dist(out2, basis(s2, Qubit::g, {0, 2})) < 1e-14);

  CHECK_THROWS_AS(njc_propagator(s, 0, 6, 1, 0), OrderError);
  CHECK_THROWS_AS(njc_pair_propagator(s, 0, 2, 1, 0, {4}), OrderError);
}

TEST_CASE("njc preserves the excitation pairs and is unitary") {
  for (int D : {3, 7, 12})
    for (int n : {1, 2, 3}) {
      if (n >= D) continue;
      TruncatedSpace s({D});
      CMatrix U = njc_propagator(s, 0, n, 0.83, 0.41);
      CHECK(unitarity_error(U) < 1e-12);
      for (int r = 0; r < s.dim(); ++r)
        for (int c = 0; c < s.dim(); ++c) {
          if (r == c || std::abs(U(r, c)) < 1e-15) continue;
          std::vector<int> fr, fc;
          Qubit qr = s.label(r, fr), qc = s.label(c, fc);
          int er = fr[0] + (qr == Qubit::e ? n : 0), ec = fc[0] + (qc == Qubit::e ? n : 0);
          CHECK(qr != qc);
          CHECK(er == ec);
        }
    }
}

TEST_CASE("ideal pair touches a single pair") {
  TruncatedSpace s({8});
  CMatrix U = njc_pair_propagator(s, 0, 2, 0.6, 0.1, {3});
  CMatrix E = njc_propagator(s, 0, 2, 0.6, 0.1);
  int e3 = s.index(Qubit::e, {3}), g5 = s.index(Qubit::g, {5});
  for (int r : {e3, g5})
    for (int c : {e3, g5}) CHECK(std::abs(U(r, c) - E(r, c)) < 1e-15);
  CMatrix rest = U;
  for (int r : {e3, g5})
    for (int c : {e3, g5}) rest(r, c) = (r == c) ? 1.0 : 0.0;
  CHECK((rest - CMatrix::Identity(s.dim(), s.dim())).norm() < 1e-15);
}

TEST_CASE("njc steps compose additively") {
  TruncatedSpace s({10});
  CMatrix a = njc_propagator(s, 0, 2, 0.3, 0.5) * njc_propagator(s, 0, 2, 0.45, 0.5);
  CHECK((a - njc_propagator(s, 0, 2, 0.75, 0.5)).norm() < 1e-13);
}

TEST_CASE("xi values") {
  CHECK(xi(2, 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(xi(1, 2) == 0.0);
  CHECK(xi(8, 2) == doctest::Approx(std::sqrt(56.0)));
  CHECK(xi(5, 0) == 1.0);
  CHECK(std::isfinite(xi(300, 3)));
}

TEST_CASE("Stirling numbers follow the recurrence") {
  long long s[15][15] = {};
  s[0][0] = 1;
  for (int n = 0; n < 13; ++n)
    for (int k = 0; k <= n + 1; ++k) s[n + 1][k] = (k ? s[n][k - 1] : 0) - n * s[n][k];
  for (int n = 0; n <= 13; ++n)
    for (int k = 0; k <= n; ++k) CHECK(stirling1(n, k) == s[n][k]);
  CHECK(stirling1(4, 2) == 11);
  CHECK_THROWS_AS(stirling1(14, 2), OrderError);
}

TEST_CASE("selective drive frequency") {
  const double wq = 2 * pi * 5e9, wo = 2 * pi * 4e9, g = 2 * pi * 50e6;
  DispersiveModel m1(1, wq, wo, g);
  CHECK(m1.chi() == doctest::Approx(g * g / (wq - wo)));
  for (int l = 0; l <= 5; ++l)
    CHECK(selective_drive_frequency({m1}, {l}) == doctest::Approx(wq + m1.chi() * (1 + 2 * l)).epsilon(1e-14));
  DispersiveModel m2(2, wq, 2 * pi * 2.2e9, g);
  CHECK(m2.chi() == doctest::Approx(g / m2.delta()));
  CHECK(selective_drive_frequency({m2}, {0}) == doctest::Approx(wq + m2.chi() * double(c_plus(2, 0))));
  DispersiveModel zero(2, wq, wo, 0);
  CHECK(selective_drive_frequency({zero}, {7}) == wq);
  CHECK(selective_drive_frequency({zero, zero}, {3, 4}) == wq);
  CHECK_THROWS_AS(selective_drive_frequency({}, {0}), ConfigError);
  CHECK_THROWS_AS(selective_drive_frequency({m1}, {0, 1}), DimensionError);
}

TEST_CASE("sideband product reproduces conditional gates") {
  set_warning_sink([](const std::string&) {});
  const int D = 30, interior = D / 2;
  TruncatedSpace sp({D});
  CHECK(unitarity_error(conditional_squeezing_via_sidebands(sp, 2, 0.3)) < 1e-10);
  CMatrix U0 = conditional_squeezing_via_sidebands(sp, 2, 0);
  cplx ph0 = U0(0, 0);
  CHECK((U0 - ph0 * CMatrix::Identity(sp.dim(), sp.dim())).norm() < 1e-12);
  for (int n : {1, 2}) {
    const double area = 5e-5;
    CMatrix U = conditional_squeezing_via_sidebands(sp, n, area);
    const cplx zeta(0, -area);
    CMatrix Pg = lift_qubit(sp, (Qubit2::Identity() - qubit::sigma_z()) / 2.0);
    CMatrix Pe = lift_qubit(sp, (Qubit2::Identity() + qubit::sigma_z()) / 2.0);
    CMatrix want = n == 1 ? CMatrix(Pg * displacement(sp, 0, zeta) + Pe * displacement(sp, 0, -zeta))
                          : CMatrix(Pg * squeezing(sp, 0, 2, zeta) + Pe * squeezing(sp, 0, 2, -zeta));
    cplx ph = (want.adjoint() * U).trace();
    ph /= std::abs(ph);
    double worst = 0;
    for (int q1 = 0; q1 < 2; ++q1)
      for (int q2 = 0; q2 < 2; ++q2)
        for (int l = 0; l < interior; ++l)
          for (int m = 0; m < interior; ++m)
            worst = std::max(worst, std::abs(U(q1 * D + l, q2 * D + m) - ph * want(q1 * D + l, q2 * D + m)));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("semantics names") {
  CHECK(parse_semantics("exact") == Semantics::exact);
  CHECK(parse_semantics("ideal") == Semantics::ideal_pair);
  CHECK_THROWS_AS(parse_semantics("fuzzy"), ConfigError);
}
