#include "bosonic/opensystem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "bosonic/config.hpp"
#include "bosonic/fidelity.hpp"
#include "bosonic/format.hpp"
#include "bosonic/kernels.hpp"
#include "bosonic/synthesis.hpp"

namespace bosonic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

using RowSparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

SparseC full(const TruncatedSpace& space, const Qubit2& q, const CMatrix& osc) {
  return kron_qubit(space, q, 0, osc).sparseView(1.0, 1e-300);
}

}  // namespace

CircuitParams CircuitParams::defaults() {
  CircuitParams p;
  p.omega_q = kTwoPi * 10e9;
  p.omega_o = kTwoPi * 5e9;
  p.g2 = kTwoPi * 25e6;
  p.g_e1 = kTwoPi * 1.08e9;
  p.g_e2 = kTwoPi * 1.34e9;
  p.g_e3 = kTwoPi * 20e6;
  p.g_e4 = kTwoPi * 10e6;
  p.g_e5 = kTwoPi * 20e6;
  p.g_c = kTwoPi * 30e6;
  return p;
}

CircuitParams CircuitParams::without_spurious() const {
  CircuitParams p = *this;
  p.g_e1 = p.g_e2 = p.g_e3 = p.g_e4 = p.g_e5 = p.g_c = 0;
  return p;
}

CircuitParams CircuitParams::from_key_values(const std::map<std::string, std::string>& kv) {
  CircuitParams p = defaults();
  const std::map<std::string, double CircuitParams::*> fields = {
      {"omega_q", &CircuitParams::omega_q}, {"omega_o", &CircuitParams::omega_o}, {"g2", &CircuitParams::g2},
      {"g_e1", &CircuitParams::g_e1},       {"g_e2", &CircuitParams::g_e2},       {"g_e3", &CircuitParams::g_e3},
      {"g_e4", &CircuitParams::g_e4},       {"g_e5", &CircuitParams::g_e5},       {"g_c", &CircuitParams::g_c},
  };
  for (const auto& [k, v] : kv) {
    auto it = fields.find(strip_unit(k));
    if (it == fields.end()) throw ConfigError("unknown circuit parameter " + k);
    double val = parse_angular(k, v);
    if (!std::isfinite(val)) throw ConfigError("non-finite value for " + k);
    p.*(it->second) = val;
  }
  return p;
}

NoiseRates NoiseRates::defaults() { return {2e4, 2e4, 1.1e5, 1.1e5}; }

NoiseRates NoiseRates::from_key_values(const std::map<std::string, std::string>& kv) {
  NoiseRates r = defaults();
  const std::map<std::string, double NoiseRates::*> fields = {
      {"gamma_q_r", &NoiseRates::q_r},
      {"gamma_o_r", &NoiseRates::o_r},
      {"gamma_q_phi", &NoiseRates::q_phi},
      {"gamma_o_phi", &NoiseRates::o_phi},
  };
  for (const auto& [k, v] : kv) {
    auto it = fields.find(strip_unit(k));
    if (it == fields.end()) throw ConfigError("unknown rate " + k);
    double val = parse_rate(k, v);
    if (!(val >= 0) || !std::isfinite(val)) throw ConfigError("rate " + k + " must be finite and >= 0");
    r.*(it->second) = val;
  }
  return r;
}

CMatrix TimeDependentHamiltonian::at(double t) const {
  CMatrix h = CMatrix::Zero(space.dim(), space.dim());
  for (const auto& term : terms) h += (term.coeff * std::exp(cplx(0, term.freq * t))) * CMatrix(term.op);
  return h;
}

CMatrix TimeDependentHamiltonian::static_part() const {
  CMatrix h = CMatrix::Zero(space.dim(), space.dim());
  for (const auto& term : terms)
    if (term.freq == 0.0) h += term.coeff * CMatrix(term.op);
  return h;
}

TimeDependentHamiltonian interaction_hamiltonian(const TruncatedSpace& space, const CircuitParams& p, double phase) {
  if (space.num_oscillators() != 1) throw DimensionError("circuit Hamiltonian is single-oscillator");
  const int D = space.cutoff(0);
  const CMatrix a = osc::lowering_power(D, 1);
  const CMatrix ad = a.adjoint();
  const CMatrix I = CMatrix::Identity(D, D);
  const Qubit2 Iq = Qubit2::Identity();
  const Qubit2 sp = qubit::sigma_plus(), sm = qubit::sigma_minus(), sz = qubit::sigma_z();
  const double w = p.omega_o, wq = p.omega_q;

  TimeDependentHamiltonian h;
  h.space = space;
  auto add = [&](const Qubit2& q, const CMatrix& o, cplx c, double f) {
    if (c != 0.0) h.terms.push_back({full(space, q, o), c, f});
  };
  // -g_e4 (a^dag + a)^3, normal ordered
  add(Iq, ad * ad * ad, -p.g_e4, 3 * w);
  add(Iq, 3.0 * ad * ad * a, -p.g_e4, w);
  add(Iq, 3.0 * ad * a * a, -p.g_e4, -w);
  add(Iq, a * a * a, -p.g_e4, -3 * w);
  add(Iq, 3.0 * ad, -p.g_e4, w);
  add(Iq, 3.0 * a, -p.g_e4, -w);
  // -g_e5 sigma_z (a^dag + a)
  add(sz, ad, -p.g_e5, w);
  add(sz, a, -p.g_e5, -w);
  // g2 (e^{i phase} sigma_+ + h.c.)(a^dag + a)^2
  const cplx ep = std::exp(cplx(0, phase));
  const CMatrix mid = 2.0 * ad * a + I;
  add(sp, ad * ad, p.g2 * ep, wq + 2 * w);
  add(sp, a * a, p.g2 * ep, wq - 2 * w);
  add(sp, mid, p.g2 * ep, wq);
  add(sm, a * a, p.g2 * std::conj(ep), -wq - 2 * w);
  add(sm, ad * ad, p.g2 * std::conj(ep), -wq + 2 * w);
  add(sm, mid, p.g2 * std::conj(ep), -wq);
  // -g_c (sigma_+ - sigma_-)(a^dag - a)
  add(sp, ad, -p.g_c, wq + w);
  add(sp, a, p.g_c, wq - w);
  add(sm, ad, p.g_c, -wq + w);
  add(sm, a, -p.g_c, -wq - w);
  return h;
}

CMatrix hamiltonian_interaction_picture(const TruncatedSpace& space, const CircuitParams& p, double t, double phase) {
  return interaction_hamiltonian(space, p, phase).at(t);
}

TimeDependentHamiltonian drive_hamiltonian(const TruncatedSpace& space, double omega, double theta) {
  TimeDependentHamiltonian h;
  h.space = space;
  const CMatrix I = CMatrix::Identity(space.osc_dim(), space.osc_dim());
  const cplx e = std::exp(cplx(0, theta));
  h.terms.push_back({lift_qubit(space, qubit::sigma_plus()).sparseView(1.0, 1e-300), omega * e, 0.0});
  h.terms.push_back({lift_qubit(space, qubit::sigma_minus()).sparseView(1.0, 1e-300), omega * std::conj(e), 0.0});
  return h;
}

void EvolveStats::merge(const EvolveStats& o) {
  accepted += o.accepted;
  rejected += o.rejected;
  max_trace_error = std::max(max_trace_error, o.max_trace_error);
  max_hermiticity_error = std::max(max_hermiticity_error, o.max_hermiticity_error);
  min_eigenvalue = std::min(min_eigenvalue, o.min_eigenvalue);
  eigen_checks += o.eigen_checks;
}

namespace {

// Jump operator with at most one nonzero per row: row i reads column src[i].
struct Jump {
  double gamma = 0;
  std::vector<int> src;
  std::vector<cplx> val;
};

Jump make_jump(const CMatrix& L, double gamma) {
  Jump j;
  j.gamma = gamma;
  j.src.assign(L.rows(), -1);
  j.val.assign(L.rows(), 0.0);
  for (int r = 0; r < L.rows(); ++r)
    for (int c = 0; c < L.cols(); ++c)
      if (L(r, c) != 0.0) {
        if (j.src[r] >= 0) throw Error("jump operator has two entries in one row");
        j.src[r] = c;
        j.val[r] = L(r, c);
      }
  return j;
}

class LindbladRhs {
 public:
  LindbladRhs(const TimeDependentHamiltonian& h, const NoiseRates& rates) : d_(h.space.dim()) {
    const TruncatedSpace& sp = h.space;
    const int D = sp.osc_dim();
    const CMatrix n = osc::number(D);
    const CMatrix I = CMatrix::Identity(D, D);
    std::vector<std::pair<CMatrix, double>> ls = {
        {lift_qubit(sp, qubit::sigma_minus()), rates.q_r},
        {lift_qubit(sp, qubit::sigma_z()), rates.q_phi / 2},
        {kron_qubit(sp, Qubit2::Identity(), 0, osc::lowering_power(D, 1)), rates.o_r},
        {kron_qubit(sp, Qubit2::Identity(), 0, n), rates.o_phi},
    };
    // -(i/2) sum gamma L^dag L
    CMatrix anti = CMatrix::Zero(d_, d_);
    for (const auto& [L, g] : ls) {
      if (g == 0.0) continue;
      jumps_.push_back(make_jump(L, g));
      anti += cplx(0, -0.5 * g) * (L.adjoint() * L);
    }

    RowSparse pattern(d_, d_);
    {
      CMatrix mask = CMatrix::Identity(d_, d_);
      for (const auto& t : h.terms) mask += CMatrix(t.op).cwiseAbs().cast<cplx>();
      mask += anti.cwiseAbs().cast<cplx>();
      pattern = mask.sparseView(1.0, 1e-300);
    }
    pattern.makeCompressed();
    row_ptr_.assign(pattern.outerIndexPtr(), pattern.outerIndexPtr() + d_ + 1);
    col_.assign(pattern.innerIndexPtr(), pattern.innerIndexPtr() + pattern.nonZeros());
    const std::size_t nnz = col_.size();
    static_vals_.assign(nnz, 0.0);
    for (const auto& t : h.terms) {
      CMatrix op(t.op);
      std::vector<cplx> v(nnz);
      for (int r = 0; r < d_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) v[k] = op(r, col_[k]);
      if (t.freq == 0.0) {
        for (std::size_t k = 0; k < nnz; ++k) static_vals_[k] += t.coeff * v[k];
      } else {
        term_vals_.push_back(std::move(v));
        coeff_.push_back(t.coeff);
        freq_.push_back(t.freq);
      }
    }
    for (int r = 0; r < d_; ++r)
      for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) static_vals_[k] += anti(r, col_[k]);
    vals_.resize(nnz);
    K_.resize(static_cast<std::size_t>(d_) * d_);
  }

  void operator()(const std::vector<double>& x, std::vector<double>& dxdt, double t) const {
    const cplx* rho = reinterpret_cast<const cplx*>(x.data());
    cplx* out = reinterpret_cast<cplx*>(dxdt.data());
    const std::size_t nnz = col_.size();
    std::copy(static_vals_.begin(), static_vals_.end(), vals_.begin());
    for (std::size_t m = 0; m < term_vals_.size(); ++m) {
      const cplx c = coeff_[m] * std::exp(cplx(0, freq_[m] * t));
      const auto& tv = term_vals_[m];
      for (std::size_t k = 0; k < nnz; ++k) vals_[k] += c * tv[k];
    }
    // K = H_eff rho, one sparse row at a time
    std::fill(K_.begin(), K_.end(), cplx(0.0));
    const std::size_t d = d_;
    for (int r = 0; r < d_; ++r)
      for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        if (vals_[k] != 0.0) kernels::caxpy(d, vals_[k], rho + col_[k] * d, K_.data() + r * d);
    // -i (K - K^dag)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        cplx a = K_[i * d + j], b = std::conj(K_[j * d + i]);
        out[i * d + j] = cplx((a - b).imag(), -(a - b).real());
      }
    for (const auto& J : jumps_)
      for (std::size_t i = 0; i < d; ++i) {
        int si = J.src[i];
        if (si < 0) continue;
        cplx li = J.gamma * J.val[i];
        const cplx* rrow = rho + si * d;
        for (std::size_t j = 0; j < d; ++j) {
          int sj = J.src[j];
          if (sj >= 0) out[i * d + j] += li * std::conj(J.val[j]) * rrow[sj];
        }
      }
  }

 private:
  int d_;
  std::vector<int> row_ptr_, col_;
  std::vector<cplx> static_vals_;
  std::vector<std::vector<cplx>> term_vals_;
  std::vector<cplx> coeff_;
  std::vector<double> freq_;
  std::vector<Jump> jumps_;
  mutable std::vector<cplx> vals_, K_;
};

double symmetrize(std::vector<double>& x, int d) {
  cplx* r = reinterpret_cast<cplx*>(x.data());
  double err = 0;
  for (int i = 0; i < d; ++i) {
    err = std::max(err, std::abs(r[i * d + i].imag()));
    r[i * d + i] = r[i * d + i].real();
    for (int j = i + 1; j < d; ++j) {
      cplx a = r[i * d + j], b = std::conj(r[j * d + i]);
      err = std::max(err, std::abs(a - b));
      cplx m = 0.5 * (a + b);
      r[i * d + j] = m;
      r[j * d + i] = std::conj(m);
    }
  }
  return err;
}

double trace_of(const std::vector<double>& x, int d) {
  double t = 0;
  for (int i = 0; i < d; ++i) t += x[2 * (i * d + i)];
  return t;
}

double min_eig(const std::vector<double>& x, int d) {
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      reinterpret_cast<const cplx*>(x.data()), d, d);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

DensityMatrix lindblad_evolve(const DensityMatrix& rho0, const TimeDependentHamiltonian& h, const NoiseRates& rates,
                              double t0, double t1, const IntegratorOptions& opt, EvolveStats* stats) {
  if (rho0.space() != h.space) throw DimensionError("density matrix and Hamiltonian spaces differ");
  if (std::abs(rho0.trace() - 1.0) > 1e-6) throw Error("initial density matrix must have unit trace");
  if (t1 < t0) throw Error("evolution end precedes start");
  const int d = h.space.dim();
  EvolveStats st;

  std::vector<double> x(2 * static_cast<std::size_t>(d) * d);
  {
    Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        reinterpret_cast<cplx*>(x.data()), d, d);
    m = rho0.matrix();
  }
  const double tr0 = trace_of(x, d);
  const bool trivial = h.terms.empty() && rates.q_r == 0 && rates.o_r == 0 && rates.q_phi == 0 && rates.o_phi == 0;

  if (!trivial && t1 > t0) {
    namespace ode = boost::numeric::odeint;
    using State = std::vector<double>;
    LindbladRhs rhs(h, rates);
    auto stepper = ode::make_controlled(opt.atol, opt.rtol, ode::runge_kutta_dopri5<State>());
    double t = t0;
    double dt = std::min(opt.initial_dt, t1 - t0);
    const double end_tol = 8 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t1), 1e-300);
    long steps = 0;
    while (t1 - t > end_tol) {
      if (t + dt > t1) dt = t1 - t;
      auto res = stepper.try_step(rhs, x, t, dt);
      if (res == ode::success) {
        ++st.accepted;
        st.max_hermiticity_error = std::max(st.max_hermiticity_error, symmetrize(x, d));
        st.max_trace_error = std::max(st.max_trace_error, std::abs(trace_of(x, d) - tr0));
        if (opt.eigen_check_each_step) {
          st.min_eigenvalue = std::min(st.min_eigenvalue, min_eig(x, d));
          ++st.eigen_checks;
        }
      } else {
        ++st.rejected;
        if (dt < opt.min_dt) throw IntegrationError("step size collapsed", t);
      }
      if (++steps > opt.max_steps) throw IntegrationError("step budget exhausted", t);
    }
  }
  st.min_eigenvalue = std::min(st.min_eigenvalue, min_eig(x, d));
  ++st.eigen_checks;
  if (stats) stats->merge(st);

  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      reinterpret_cast<const cplx*>(x.data()), d, d);
  return DensityMatrix(h.space, CMatrix(m));
}

OpenResult run_open_protocol(const PulseSchedule& s, const CircuitParams& p, const NoiseRates& rates,
                             const CVector& target, const OpenOptions& opt) {
  if (s.osc_cutoffs.size() != 1) throw DimensionError("open-system replay supports one oscillator");
  TruncatedSpace space({std::max(opt.cutoff, s.osc_cutoffs[0])});
  FockLabel init = s.initial.empty() ? FockLabel{0} : s.initial;
  DensityMatrix rho = DensityMatrix::pure(StateVector::basis(space, Qubit::g, init));
  const double omega = s.budget ? s.budget->omega : CouplingBudget::standard().omega;

  OpenResult res;
  double t = 0;
  for (const auto& st : s.steps) {
    double phase = st.phase + (st.area < 0 ? kPi : 0.0);
    double dur = 0;
    TimeDependentHamiltonian h;
    if (st.kind == StepKind::drive) {
      if (st.selective()) throw Error("selective drives are not part of the circuit model");
      dur = std::abs(st.area) / omega;
      h = drive_hamiltonian(space, omega, phase);
    } else {
      if (st.order != 2) throw OrderError("circuit model implements order-2 steps only");
      dur = std::abs(st.area) / p.g2;
      h = interaction_hamiltonian(space, p, phase);
    }
    if (dur > 0) rho = lindblad_evolve(rho, h, rates, t, t + dur, opt.integrator, &res.stats);
    t += dur;
  }
  res.duration_s = t;
  res.rho = rho;
  if (target.size() == 0) throw DimensionError("empty target state");
  CVector padded = CVector::Zero(std::max<Eigen::Index>(2, target.size()));
  padded.head(target.size()) = target;
  StateVector tv = StateVector::product(TruncatedSpace({static_cast<int>(padded.size())}), Qubit::g, padded);
  res.fidelity = overlap_fidelity(rho, tv);
  res.fidelity_osc = std::sqrt(std::max(0.0, fidelity(trace_out_qubit(rho), padded)));
  return res;
}

std::vector<Lobe> lobe_centroids(const WignerGrid& w, int count, double r_min) {
  std::vector<Lobe> lobes(count);
  const double width = kTwoPi / count;
  for (int i = 0; i < w.x_axis.size(); ++i)
    for (int j = 0; j < w.p_axis.size(); ++j) {
      double x = w.x_axis[i], pp = w.p_axis[j], v = w.values(i, j);
      if (v <= 0 || std::hypot(x, pp) < r_min) continue;
      double ang = std::atan2(pp, x) + width / 2;
      ang = std::fmod(ang + kTwoPi, kTwoPi);
      int s = std::min(count - 1, static_cast<int>(ang / width));
      lobes[s].x += v * x;
      lobes[s].p += v * pp;
      lobes[s].weight += v;
    }
  for (auto& l : lobes)
    if (l.weight > 0) {
      l.x /= l.weight;
      l.p /= l.weight;
    }
  return lobes;
}

WignerComparison wigner_comparison(const PulseSchedule& s, const CircuitParams& p, const NoiseRates& rates,
                                   const CVector& target, const GridSpec& grid, const OpenOptions& opt, int lobes) {
  WignerComparison c;
  c.run = run_open_protocol(s, p, rates, target, opt);
  c.ideal = wigner(apply_schedule(s, Semantics::exact), grid);
  c.open = wigner(c.run.rho, grid);
  c.max_deviation = c.ideal.max_abs_diff(c.open);
  c.ideal_lobes = lobe_centroids(c.ideal, lobes);
  c.open_lobes = lobe_centroids(c.open, lobes);
  int used = 0;
  for (int i = 0; i < lobes; ++i) {
    const Lobe &a = c.ideal_lobes[i], &b = c.open_lobes[i];
    if (a.weight <= 0 || b.weight <= 0) continue;
    c.lobe_shift += std::hypot(b.x - a.x, b.p - a.p);
    c.lobe_rotation += wrap_phase(std::atan2(b.p, b.x) - std::atan2(a.p, a.x));
    ++used;
  }
  if (used) {
    c.lobe_shift /= used;
    c.lobe_rotation /= used;
  }
  return c;
}

void write_density_csv(std::ostream& os, const DensityMatrix& rho) {
  os << "row,col,re,im\n";
  const CMatrix& m = rho.matrix();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > 1e-14) os << i << ',' << j << ',' << fmt_num(m(i, j).real()) << ',' << fmt_num(m(i, j).imag()) << '\n';
}

}  // namespace bosonic
