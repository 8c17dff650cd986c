#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bosonic/fidelity.hpp"
#include "bosonic/kernels.hpp"
#include "bosonic/opensystem.hpp"
#include "bosonic/synthesis.hpp"

using namespace bosonic;
constexpr double pi = std::numbers::pi;
const double root2 = std::sqrt(2.0);
const cplx I(0, 1);

namespace {
CMatrix a_op(const TruncatedSpace& s) { return ladder_power(s, 0, 1); }
CMatrix sp_op(const TruncatedSpace& s) { return lift_qubit(s, qubit::sigma_plus()); }
CMatrix sm_op(const TruncatedSpace& s) { return lift_qubit(s, qubit::sigma_minus()); }

double interior_diff(const CMatrix& x, const CMatrix& y, int D, int guard) {
  double worst = 0;
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int l = 0; l < D - guard; ++l)
        for (int m = 0; m < D - guard; ++m)
          worst = std::max(worst, std::abs(x(q1 * D + l, q2 * D + m) - y(q1 * D + l, q2 * D + m)));
  return worst;
}

CircuitParams resonant() {
  CircuitParams p = CircuitParams::defaults().without_spurious();
  p.omega_q = 2 * p.omega_o;
  return p;
}

PulseSchedule cat_schedule(CatKind kind, int dim) {
  InversionOptions o;
  o.budget = CouplingBudget::standard();
  return invert_symmetric(cat_state(dim, root2, kind), 2, o);
}
}  // namespace

TEST_CASE("parameter defaults and configuration") {
  CircuitParams p = CircuitParams::defaults();
  CHECK(p.omega_q == doctest::Approx(2 * pi * 10e9));
  CHECK(p.g_c == doctest::Approx(2 * pi * 30e6));
  CircuitParams z = p.without_spurious();
  CHECK(z.g_e4 == 0.0);
  CHECK(z.g2 == p.g2);
  CircuitParams q = CircuitParams::from_key_values({{"omega_q_ghz", "9*2pi"}, {"g_e4_mhz", "0*2pi"}});
  CHECK(q.omega_q == doctest::Approx(2 * pi * 9e9));
  CHECK(q.g_e4 == 0.0);
  CHECK(q.omega_o == p.omega_o);
  CHECK_THROWS_AS(CircuitParams::from_key_values({{"g_x_mhz", "1*2pi"}}), ConfigError);

  NoiseRates r = NoiseRates::from_key_values({{"gamma_q_r_khz", "10"}});
  CHECK(r.q_r == doctest::Approx(1e4));
  CHECK(r.o_phi == doctest::Approx(1.1e5));
  CHECK_THROWS_AS(NoiseRates::from_key_values({{"gamma_q_r_khz", "-1"}}), ConfigError);
}

TEST_CASE("interaction-picture Hamiltonian is Hermitian") {
  TruncatedSpace s({12});
  CircuitParams p = CircuitParams::defaults();
  for (double t : {0.0, 1.3e-10, 7.7e-9, 2.5e-8}) {
    CMatrix h = hamiltonian_interaction_picture(s, p, t, 0.4);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * h.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("resonant static part is the two-photon JC coupling") {
  TruncatedSpace s({10});
  CircuitParams p = resonant();
  CMatrix a = a_op(s), a2 = a * a;
  CMatrix want = p.g2 * (sp_op(s) * a2 + sm_op(s) * a2.adjoint());
  TimeDependentHamiltonian h = interaction_hamiltonian(s, p);
  CHECK((h.static_part() - want).cwiseAbs().maxCoeff() < 1e-6);
  for (double t : {0.0, 3.1e-9, 1.7e-8}) {
    CMatrix ht = h.at(t);
    cplx m = ht(s.index(Qubit::e, {0}), s.index(Qubit::g, {2}));
    CHECK(std::abs(m) == doctest::Approx(p.g2 * root2).epsilon(1e-12));
  }
}

TEST_CASE("frame identity at t = 0") {
  const int D = 14, guard = 3;
  TruncatedSpace s({D});
  CircuitParams p = CircuitParams::defaults();
  const double phi = 0.3;
  CMatrix a = a_op(s), ad = a.adjoint(), x = a + ad;
  CMatrix sz = lift_qubit(s, qubit::sigma_z());
  CMatrix drive = std::polar(1.0, phi) * sp_op(s) + std::polar(1.0, -phi) * sm_op(s);
  CMatrix want = -p.g_e4 * x * x * x - p.g_e5 * sz * x + p.g2 * drive * x * x -
                 p.g_c * (sp_op(s) - sm_op(s)) * (ad - a);
  CMatrix got = hamiltonian_interaction_picture(s, p, 0, phi);
  CHECK(interior_diff(got, want, D, guard) < 1e-6 * p.g2);
}

TEST_CASE("free evolution leaves the state unchanged") {
  TruncatedSpace s({4});
  TimeDependentHamiltonian h{s, {}};
  DensityMatrix rho = DensityMatrix::pure(
      StateVector(s, (StateVector::basis(s, Qubit::e, {1}).amps() + StateVector::basis(s, Qubit::g, {2}).amps()) /
                         root2));
  DensityMatrix out = lindblad_evolve(rho, h, NoiseRates::zero(), 0, 1e-6);
  CHECK((out.matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("qubit decay and dephasing follow closed forms") {
  TruncatedSpace s({3});
  TimeDependentHamiltonian h{s, {}};
  NoiseRates r;
  r.q_r = 2e4;
  DensityMatrix e = DensityMatrix::pure(StateVector::basis(s, Qubit::e, {0}));
  for (double T : {5e-6, 2e-5, 6e-5}) {
    DensityMatrix out = lindblad_evolve(e, h, r, 0, T);
    int ie = s.index(Qubit::e, {0});
    CHECK(std::abs(out.matrix()(ie, ie).real() - std::exp(-r.q_r * T)) < 1e-6);
    CHECK(std::abs(out.trace() - 1) < 1e-8);
  }
  NoiseRates d;
  d.q_phi = 1.1e5;
  CVector plus = (StateVector::basis(s, Qubit::g, {0}).amps() + StateVector::basis(s, Qubit::e, {0}).amps()) / root2;
  DensityMatrix out = lindblad_evolve(DensityMatrix::pure(StateVector(s, plus)), h, d, 0, 1e-5);
  cplx coh = out.matrix()(s.index(Qubit::g, {0}), s.index(Qubit::e, {0}));
  CHECK(std::abs(std::abs(coh) - 0.5 * std::exp(-d.q_phi * 1e-5)) < 1e-6);
}

TEST_CASE("closed resonant JC evolution matches unitary replay") {
  TruncatedSpace s({8});
  const double g = 2 * pi * 25e6, phi = 0.7;
  CMatrix a2 = ladder_power(s, 0, 2);
  CMatrix op = std::polar(g, phi) * sp_op(s) * a2;
  TimeDependentHamiltonian h{s, {{op.sparseView(), 1.0, 0.0}, {CMatrix(op.adjoint()).sparseView(), 1.0, 0.0}}};
  CVector psi0 = (StateVector::basis(s, Qubit::e, {1}).amps() + StateVector::basis(s, Qubit::g, {0}).amps() +
                  I * StateVector::basis(s, Qubit::e, {3}).amps())
                     .normalized();
  const double area = 0.9;
  DensityMatrix out = lindblad_evolve(DensityMatrix::pure(StateVector(s, psi0)), h, NoiseRates::zero(), 0, area / g);
  StateVector ideal(s, njc_propagator(s, 0, 2, area, phi) * psi0);
  CHECK(overlap_fidelity(out, ideal) >= 1 - 1e-7);
  EvolveStats st;
  IntegratorOptions o;
  o.eigen_check_each_step = true;
  lindblad_evolve(DensityMatrix::pure(StateVector(s, psi0)), h, NoiseRates::defaults(), 0, area / g, o, &st);
  CHECK(st.accepted > 0);
  CHECK(st.max_trace_error < 1e-8);
  CHECK(st.min_eigenvalue > -1e-8);
  CHECK(st.eigen_checks >= st.accepted);
}

TEST_CASE("integration failures carry a time stamp") {
  TruncatedSpace s({4});
  IntegratorOptions o;
  o.max_steps = 3;
  DensityMatrix rho = DensityMatrix::pure(StateVector::basis(s, Qubit::e, {0}));
  TimeDependentHamiltonian h = drive_hamiltonian(s, 2 * pi * 25e6, 0);
  CHECK_THROWS_AS(lindblad_evolve(rho, h, NoiseRates::zero(), 0, 1e-6, o), IntegrationError);
}

TEST_CASE("protocol preconditions") {
  PulseSchedule s;
  s.osc_cutoffs = {6};
  s.steps = {PulseStep::njc(0, 1, 0.5, 0)};
  CVector t = CVector::Unit(2, 0);
  CHECK_THROWS_AS(run_open_protocol(s, CircuitParams::defaults(), NoiseRates::zero(), t), OrderError);
  s.steps = {PulseStep::drive(0.5, 0, {{1}})};
  CHECK_THROWS_AS(run_open_protocol(s, CircuitParams::defaults(), NoiseRates::zero(), t), Error);
  s.osc_cutoffs = {3, 3};
  s.steps.clear();
  CHECK_THROWS_AS(run_open_protocol(s, CircuitParams::defaults(), NoiseRates::zero(), t), DimensionError);
}

TEST_CASE("empty schedule gives vacuum Wigner grids") {
  PulseSchedule s;
  s.osc_cutoffs = {6};
  CVector vac = CVector::Unit(1, 0);
  OpenOptions oo;
  oo.cutoff = 6;
  GridSpec g{-3, 3, 31, -3, 3, 31};
  WignerComparison w = wigner_comparison(s, CircuitParams::defaults(), NoiseRates::defaults(), vac, g, oo);
  CHECK(w.run.fidelity == doctest::Approx(1.0));
  CHECK(w.max_deviation < 1e-12);
  for (int i = 0; i < 31; ++i)
    for (int j = 0; j < 31; ++j) {
      double x = w.ideal.x_axis[i], p = w.ideal.p_axis[j];
      CHECK(std::abs(w.open.values(i, j) - std::exp(-x * x - p * p) / pi) < 1e-12);
    }
}

TEST_CASE("density matrix CSV") {
  TruncatedSpace s({2});
  std::ostringstream os;
  write_density_csv(os, DensityMatrix::pure(StateVector::basis(s, Qubit::g, {1})));
  CHECK(os.str() == "row,col,re,im\n1,1,1,0\n");
}

TEST_CASE("vector kernels agree") {
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  for (std::size_t n : {0u, 1u, 3u, 8u, 33u, 1000u}) {
    std::vector<cplx> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = {g(rng), g(rng)};
      y[i] = {g(rng), g(rng)};
    }
    cplx a(0.3, -1.7);
    std::vector<cplx> ys = y, yd = y;
    kernels::caxpy_scalar(n, a, x.data(), ys.data());
    kernels::caxpy(n, a, x.data(), yd.data());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(ys[i] - (y[i] + a * x[i])) < 1e-14);
      CHECK(std::abs(ys[i] - yd[i]) < 1e-13);
    }
#ifdef BOSONIC_HAVE_AVX2
    if (kernels::avx2_available()) {
      std::vector<cplx> yv = y;
      kernels::caxpy_avx2(n, a, x.data(), yv.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) < 1e-13);
    }
#endif
  }
  std::string k = kernels::active_kernel();
  CHECK((k == "avx2" || k == "scalar"));
}

TEST_CASE("four-component cat keeps its lobes with a visible offset") {
  PulseSchedule s = cat_schedule(CatKind::four, 9);
  TargetState t = cat_state(9, root2, CatKind::four);
  GridSpec g{-4, 4, 81, -4, 4, 81};
  WignerComparison w = wigner_comparison(s, CircuitParams::defaults(), NoiseRates::defaults(), t.amps, g);
  REQUIRE(w.open_lobes.size() == 4);
  for (const Lobe& l : w.open_lobes) CHECK(l.weight > 0);
  for (int k = 0; k < 4; ++k) {
    double ang = std::atan2(w.open_lobes[k].p, w.open_lobes[k].x);
    double d = std::remainder(ang - k * pi / 2, 2 * pi);
    CHECK(std::abs(d) < 0.3);
  }
  CHECK(w.lobe_shift > 0);
}

// Closed-system limit: no spurious couplings and no dissipation.
TEST_SUITE("closed_limit") {
  TEST_CASE("closed limit reaches the target") {
    TargetState t = cat_state(11, root2, CatKind::even2);
    OpenResult r = run_open_protocol(cat_schedule(CatKind::even2, 11), CircuitParams::defaults().without_spurious(),
                                     NoiseRates::zero(), t.amps);
    CHECK(r.fidelity >= 0.9999);
  }

  TEST_CASE("closed limit agrees with gate-level replay") {
    TargetState t = cat_state(9, root2, CatKind::four);
    PulseSchedule s = cat_schedule(CatKind::four, 9);
    OpenResult r = run_open_protocol(s, CircuitParams::defaults().without_spurious(), NoiseRates::zero(), t.amps);
    double gates = replay_fidelity_truncated(s, t, Semantics::exact);
    CHECK(std::abs(r.fidelity - gates) < 1e-6);
  }

  TEST_CASE("closed limit Wigner grids match the ideal replay") {
    TargetState t = cat_state(9, root2, CatKind::four);
    GridSpec g{-4, 4, 41, -4, 4, 41};
    WignerComparison w = wigner_comparison(cat_schedule(CatKind::four, 9), CircuitParams::defaults().without_spurious(),
                                           NoiseRates::zero(), t.amps, g);
    CHECK(w.max_deviation < 1e-6);
  }
}
