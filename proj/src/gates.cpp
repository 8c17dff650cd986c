#include "bosonic/gates.hpp"

#include <cmath>
#include <numbers>

namespace bosonic {

const char* to_string(Semantics s) { return s == Semantics::exact ? "exact" : "ideal"; }

Semantics parse_semantics(const std::string& s) {
  if (s == "exact") return Semantics::exact;
  if (s == "ideal" || s == "ideal-pair" || s == "ideal_pair") return Semantics::ideal_pair;
  throw ConfigError("unknown semantics '" + s + "'");
}

PulseStep PulseStep::drive(double area, double phase, std::vector<FockLabel> select) {
  PulseStep s;
  s.kind = StepKind::drive;
  s.area = area;
  s.phase = phase;
  s.select = std::move(select);
  return s;
}

PulseStep PulseStep::njc(int osc, int order, double area, double phase) {
  PulseStep s;
  s.kind = StepKind::njc;
  s.osc = osc;
  s.order = order;
  s.area = area;
  s.phase = phase;
  return s;
}

double xi(int a, int b) {
  if (a < b || b < 0) return 0.0;
  double p = 1.0;
  for (int j = 0; j < b; ++j) p *= static_cast<double>(a - j);
  return std::sqrt(p);
}

Qubit2 drive_propagator(double area, double phase) {
  const cplx I(0, 1);
  double c = std::cos(area), s = std::sin(area);
  Qubit2 m;
  m(0, 0) = c;
  m(1, 1) = c;
  m(1, 0) = -I * std::polar(1.0, phase) * s;   // <e|C|g>
  m(0, 1) = -I * std::polar(1.0, -phase) * s;  // <g|C|e>
  return m;
}

CMatrix drive_propagator(const TruncatedSpace& space, double area, double phase) {
  return lift_qubit(space, drive_propagator(area, phase));
}

CMatrix selective_drive_propagator(const TruncatedSpace& space, double area, double phase,
                                   const std::vector<FockLabel>& selected) {
  CMatrix u = CMatrix::Identity(space.dim(), space.dim());
  Qubit2 c = drive_propagator(area, phase);
  std::vector<int> seen;
  for (const auto& lab : selected) {
    int og = space.index(Qubit::g, lab);
    int oe = space.index(Qubit::e, lab);
    for (int s : seen)
      if (s == og) throw DimensionError("duplicate selected Fock label");
    seen.push_back(og);
    u(og, og) = c(0, 0);
    u(og, oe) = c(0, 1);
    u(oe, og) = c(1, 0);
    u(oe, oe) = c(1, 1);
  }
  return u;
}

namespace {

void set_pair(CMatrix& u, int ie, int ig, double angle, double phase) {
  const cplx I(0, 1);
  double c = std::cos(angle), s = std::sin(angle);
  u(ie, ie) = c;
  u(ig, ig) = c;
  u(ie, ig) = -I * std::polar(1.0, phase) * s;
  u(ig, ie) = -I * std::polar(1.0, -phase) * s;
}

void check_order(const TruncatedSpace& space, int osc, int n) {
  if (osc < 0 || osc >= space.num_oscillators()) throw DimensionError("oscillator index out of range");
  if (n < 1 || n >= space.cutoff(osc)) throw OrderError("njc order must satisfy 1 <= n < cutoff");
}

}  // namespace

CMatrix njc_propagator(const TruncatedSpace& space, int osc, int n, double area, double phase) {
  check_order(space, osc, n);
  CMatrix u = CMatrix::Identity(space.dim(), space.dim());
  const int D = space.cutoff(osc);
  const int st = space.stride(osc);
  for (int o = 0; o < space.osc_dim(); ++o) {
    int l = (o / st) % D;
    if (l + n >= D) continue;
    int ie = space.osc_dim() + o;
    int ig = o + n * st;
    set_pair(u, ie, ig, area * xi(l + n, n), phase);
  }
  return u;
}

CMatrix njc_pair_propagator(const TruncatedSpace& space, int osc, int n, double area, double phase,
                            const FockLabel& source) {
  check_order(space, osc, n);
  if (source.at(osc) + n >= space.cutoff(osc)) {
    throw OrderError("ideal pair target level beyond cutoff");
  }
  FockLabel dest = source;
  dest[osc] += n;
  CMatrix u = CMatrix::Identity(space.dim(), space.dim());
  set_pair(u, space.index(Qubit::e, source), space.index(Qubit::g, dest), area * xi(dest[osc], n), phase);
  return u;
}

CMatrix step_propagator(const TruncatedSpace& space, const PulseStep& step, Semantics sem,
                        const std::optional<FockLabel>& pair_source) {
  if (step.kind == StepKind::drive) {
    if (step.select.empty()) return drive_propagator(space, step.area, step.phase);
    return selective_drive_propagator(space, step.area, step.phase, step.select);
  }
  if (sem == Semantics::ideal_pair && pair_source) {
    return njc_pair_propagator(space, step.osc, step.order, step.area, step.phase, *pair_source);
  }
  return njc_propagator(space, step.osc, step.order, step.area, step.phase);
}

long long stirling1(int n, int k) {
  if (n < 0 || k < 0) return 0;
  if (n > 13) throw OrderError("Stirling numbers supported up to n = 13");
  // s(m+1, j) = s(m, j-1) - m s(m, j)
  std::vector<long long> row(n + 2, 0);
  row[0] = 1;
  for (int m = 0; m < n; ++m) {
    std::vector<long long> next(n + 2, 0);
    for (int j = 1; j <= m + 1; ++j) next[j] = row[j - 1] - static_cast<long long>(m) * row[j];
    row = std::move(next);
  }
  return k <= n ? row[k] : 0;
}

long long c_plus(int n, int k) {
  if (n > 12) throw OrderError("interaction orders above 12 are not supported");
  long long sign = ((n + k) % 2 == 0) ? 1 : -1;
  return sign * stirling1(n + 1, k + 1) + stirling1(n, k);
}

DispersiveModel::DispersiveModel(int order_, double omega_q_, double omega_o_, double g_)
    : order(order_), omega_q(omega_q_), omega_o(omega_o_), g(g_) {
  if (order < 1) throw OrderError("dispersive model order must be >= 1");
  double d = delta();
  if (d == 0.0 || std::abs(g) / std::abs(d) > 0.1) {
    warn("dispersive model of order " + std::to_string(order) + " has |g/Delta| > 0.1");
  }
}

double DispersiveModel::chi() const {
  double d = delta();
  return order == 1 ? g * g / d : g / d;
}

double selective_drive_frequency(const std::vector<DispersiveModel>& models, const FockLabel& fock) {
  if (models.empty()) throw ConfigError("no dispersive model given");
  if (models.size() != fock.size()) throw DimensionError("one dispersive model per oscillator required");
  double w = models[0].omega_q;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& m = models[i];
    double chi = m.chi();
    if (chi == 0.0) continue;
    double poly = 0, lk = 1;
    for (int k = 0; k <= m.order; ++k) {
      poly += static_cast<double>(c_plus(m.order, k)) * lk;
      lk *= fock[i];
    }
    w += chi * poly;
  }
  return w;
}

CMatrix conditional_squeezing_via_sidebands(const TruncatedSpace& space, int n, double area) {
  const cplx I(0, 1);
  CMatrix h = lift_qubit(space, qubit::hadamard());
  CMatrix rx = lift_qubit(space, Qubit2(-I * qubit::sigma_x()));
  CMatrix q = njc_propagator(space, 0, n, area, 0.0);
  return h * rx * q * rx * q * h;
}

}  // namespace bosonic
