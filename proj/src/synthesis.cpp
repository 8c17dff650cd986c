#include "bosonic/synthesis.hpp"

#include <cmath>
#include <numbers>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "bosonic/fidelity.hpp"
#include "bosonic/planner.hpp"

namespace bosonic {

namespace {

constexpr double kZeroAmp = 1e-13;
constexpr double kRealPhase = 1e-9;
constexpr double kPi = std::numbers::pi;

AngleSolution canonical_solution(double angle, double phase) {
  phase = wrap_phase(phase);
  if (std::abs(phase) < kRealPhase) return {angle, 0.0};
  if (std::abs(phase) > kPi - kRealPhase) return {-angle, 0.0};
  return {angle, phase};
}

int locate_offset(const TargetState& t, int n) {
  int k = -1;
  for (int l = 0; l < t.amps.size(); ++l) {
    if (std::abs(t.amps[l]) <= 1e-12) continue;
    if (k < 0) k = l % n;
    if (l % n != k) throw SymmetryError("target support is not confined to one class modulo " + std::to_string(n));
  }
  return k < 0 ? 0 : k;
}

}  // namespace

AngleSolution solve_njc_constraint(cplx cg, cplx ce, int branch) {
  AngleSolution s;
  if (std::abs(cg) <= kZeroAmp) {
    s = {0.0, 0.0};
  } else if (std::abs(ce) <= kZeroAmp) {
    s = {kPi / 2, 0.0};
  } else {
    cplx r = cplx(0, 1) * cg / ce;
    s = canonical_solution(std::atan(std::abs(r)), -std::arg(r));
  }
  s.angle += branch * kPi;
  return s;
}

AngleSolution solve_drive_constraint(cplx cg, cplx ce, int branch) {
  AngleSolution s;
  if (std::abs(ce) <= kZeroAmp) {
    s = {0.0, 0.0};
  } else if (std::abs(cg) <= kZeroAmp) {
    s = {kPi / 2, 0.0};
  } else {
    cplx r = cplx(0, 1) * ce / cg;
    s = canonical_solution(std::atan(std::abs(r)), std::arg(r));
  }
  s.angle += branch * kPi;
  return s;
}

StateVector target_vector(const TargetState& t, const TruncatedSpace& space) {
  if (t.num_oscillators() != space.num_oscillators()) throw DimensionError("target/space oscillator count mismatch");
  CVector osc = CVector::Zero(space.osc_dim());
  if (t.num_oscillators() == 1) {
    for (int l = 0; l < t.amps.size(); ++l) {
      if (l < space.cutoff(0)) {
        osc[l] = t.amps[l];
      } else if (std::abs(t.amps[l]) > 1e-12) {
        throw DimensionError("target level " + std::to_string(l) + " exceeds the working cutoff");
      }
    }
  } else {
    for (int l1 = 0; l1 < t.cutoffs[0]; ++l1)
      for (int l2 = 0; l2 < t.cutoffs[1]; ++l2) {
        cplx a = t.amps[l1 * t.cutoffs[1] + l2];
        if (l1 < space.cutoff(0) && l2 < space.cutoff(1)) {
          osc[space.osc_index({l1, l2})] = a;
        } else if (std::abs(a) > 1e-12) {
          throw DimensionError("target label exceeds the working cutoff");
        }
      }
  }
  return StateVector::product(space, Qubit::g, osc);
}

namespace {

StateVector reference_vector(const TargetState& t) {
  TargetState r = t;
  if (t.reference.size() > 0) {
    r.amps = t.reference;
    r.cutoffs = t.reference_cutoffs;
  }
  std::vector<int> c = r.cutoffs;
  for (int& d : c) d = std::max(d, 2);
  return target_vector(r, TruncatedSpace(c));
}

// Pair source for each njc step under ideal semantics.
std::vector<std::optional<FockLabel>> pair_sources(const PulseSchedule& s) {
  std::vector<std::optional<FockLabel>> out(s.steps.size());
  std::optional<FockLabel> last;
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const auto& st = s.steps[i];
    if (st.kind == StepKind::drive) {
      last = st.select.size() == 1 ? std::optional<FockLabel>(st.select[0]) : std::nullopt;
    } else {
      out[i] = last;
    }
  }
  return out;
}

void attach_metadata(PulseSchedule& s, const TargetState& t) {
  s.target = t.label;
  s.fidelity = replay_fidelity(s, t, s.semantics);
  if (s.budget) s.duration_s = schedule_duration(s, *s.budget);
}

}  // namespace

InversionResult invert_symmetric_traced(const TargetState& target, int n, const InversionOptions& opt) {
  if (target.num_oscillators() != 1) throw DimensionError("invert_symmetric needs a single-oscillator target");
  if (n < 1) throw OrderError("interaction order must be >= 1");
  const int k = locate_offset(target, n);
  const int top = target.max_index();
  int M = (top - k) / n;
  if (opt.steps) {
    if (*opt.steps < M) throw Error("forced step count below the target's support");
    M = *opt.steps;
  }
  const int D = opt.cutoff.value_or(std::max(2, M * n + k + n));
  if (D < M * n + k + 1 || D < 2) throw DimensionError("working cutoff too small for the target");

  TruncatedSpace space({D});
  StateVector psi = target_vector(target, space);
  InversionResult res;
  std::vector<PulseStep> drives(M), njcs(M);
  res.njc_angles.assign(M, 0);
  res.drive_angles.assign(M, 0);

  for (int j = M - 1; j >= 0; --j) {
    const int topj = (j + 1) * n + k;
    const int src = topj - n;
    CVector& v = psi.amps();
    AngleSolution q = solve_njc_constraint(v[space.index(Qubit::g, {topj})], v[space.index(Qubit::e, {src})],
                                           opt.branches.njc_at(j));
    double area = q.angle / xi(topj, n);
    CMatrix Q = opt.semantics == Semantics::exact ? njc_propagator(space, 0, n, area, q.phase)
                                                  : njc_pair_propagator(space, 0, n, area, q.phase, {src});
    v = Q.adjoint() * v;
    res.cleared_residuals.push_back(std::abs(v[space.index(Qubit::g, {topj})]));

    AngleSolution c = solve_drive_constraint(v[space.index(Qubit::g, {src})], v[space.index(Qubit::e, {src})],
                                             opt.branches.drive_at(j));
    v = drive_propagator(space, c.angle, c.phase).adjoint() * v;
    res.cleared_residuals.push_back(std::abs(v[space.index(Qubit::e, {src})]));

    drives[j] = PulseStep::drive(c.angle, c.phase);
    njcs[j] = PulseStep::njc(0, n, area, q.phase);
    res.njc_angles[j] = q.angle;
    res.drive_angles[j] = c.angle;
  }
  CVector rest = psi.amps();
  rest[space.index(Qubit::g, {k})] = 0;
  res.final_residual = rest.norm();

  PulseSchedule& s = res.schedule;
  s.osc_cutoffs = {D};
  s.semantics = opt.semantics;
  s.initial = {k};
  s.budget = opt.budget;
  for (int j = 0; j < M; ++j) {
    s.steps.push_back(drives[j]);
    s.steps.push_back(njcs[j]);
  }
  attach_metadata(s, target);
  return res;
}

PulseSchedule invert_symmetric(const TargetState& target, int n, const InversionOptions& opt) {
  return invert_symmetric_traced(target, n, opt).schedule;
}

std::optional<BranchPolicy> classify_branches(const TargetState& target, int n, const std::vector<double>& njc_areas,
                                              const std::vector<double>& drive_areas, double tol, int max_offset) {
  const int k = locate_offset(target, n);
  const int top = target.max_index();
  const int M = (top - k) / n;
  if (static_cast<int>(njc_areas.size()) != M || static_cast<int>(drive_areas.size()) != M) return std::nullopt;
  TruncatedSpace space({M * n + k + n});
  StateVector psi = target_vector(target, space);
  BranchPolicy pol;
  pol.njc.assign(M, 0);
  pol.drive.assign(M, 0);
  for (int j = M - 1; j >= 0; --j) {
    const int topj = (j + 1) * n + k;
    const int src = topj - n;
    CVector& v = psi.amps();
    cplx cg = v[space.index(Qubit::g, {topj})], ce = v[space.index(Qubit::e, {src})];
    std::optional<AngleSolution> pick;
    for (int m = 0; m <= max_offset && !pick; ++m) {
      for (int sgn : {1, -1}) {
        int off = m * sgn;
        AngleSolution q = solve_njc_constraint(cg, ce, off);
        PulseStep cand = PulseStep::njc(0, n, q.angle / xi(topj, n), q.phase);
        if (equivalent(cand, PulseStep::njc(0, n, njc_areas[j], 0.0), tol)) {
          pick = q;
          pol.njc[j] = off;
          break;
        }
        if (m == 0) break;
      }
    }
    if (!pick) return std::nullopt;
    v = njc_propagator(space, 0, n, pick->angle / xi(topj, n), pick->phase).adjoint() * v;

    cg = v[space.index(Qubit::g, {src})];
    ce = v[space.index(Qubit::e, {src})];
    std::optional<AngleSolution> dpick;
    for (int m = 0; m <= max_offset && !dpick; ++m) {
      for (int sgn : {1, -1}) {
        int off = m * sgn;
        AngleSolution c = solve_drive_constraint(cg, ce, off);
        if (equivalent(PulseStep::drive(c.angle, c.phase), PulseStep::drive(drive_areas[j], 0.0), tol)) {
          dpick = c;
          pol.drive[j] = off;
          break;
        }
        if (m == 0) break;
      }
    }
    if (!dpick) return std::nullopt;
    v = drive_propagator(space, dpick->angle, dpick->phase).adjoint() * v;
  }
  return pol;
}

StateVector apply_schedule(const PulseSchedule& s, const StateVector& initial, Semantics sem) {
  TruncatedSpace space = s.space();
  if (initial.space() != space) throw DimensionError("initial state space does not match the schedule");
  auto sources = pair_sources(s);
  CVector v = initial.amps();
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    CVector next = step_propagator(space, s.steps[i], sem, sources[i]) * v;
    v = std::move(next);
  }
  return StateVector(space, v);
}

StateVector apply_schedule(const PulseSchedule& s, Semantics sem) {
  TruncatedSpace space = s.space();
  FockLabel init = s.initial.empty() ? FockLabel(space.num_oscillators(), 0) : s.initial;
  return apply_schedule(s, StateVector::basis(space, Qubit::g, init), sem);
}

std::vector<StateVector> replay_trace(const PulseSchedule& s, Semantics sem) {
  TruncatedSpace space = s.space();
  FockLabel init = s.initial.empty() ? FockLabel(space.num_oscillators(), 0) : s.initial;
  std::vector<StateVector> out{StateVector::basis(space, Qubit::g, init)};
  auto sources = pair_sources(s);
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    CVector next = step_propagator(space, s.steps[i], sem, sources[i]) * out.back().amps();
    out.emplace_back(space, next);
  }
  return out;
}

StateVector apply_inverse_schedule(const PulseSchedule& s, const StateVector& state, Semantics sem) {
  TruncatedSpace space = s.space();
  if (state.space() != space) throw DimensionError("state space does not match the schedule");
  auto sources = pair_sources(s);
  CVector v = state.amps();
  for (std::size_t i = s.steps.size(); i-- > 0;) {
    CVector next = step_propagator(space, s.steps[i], sem, sources[i]).adjoint() * v;
    v = std::move(next);
  }
  return StateVector(space, v);
}

CMatrix schedule_unitary(const PulseSchedule& s, Semantics sem) {
  TruncatedSpace space = s.space();
  auto sources = pair_sources(s);
  CMatrix u = CMatrix::Identity(space.dim(), space.dim());
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    CMatrix next = step_propagator(space, s.steps[i], sem, sources[i]) * u;
    u = std::move(next);
  }
  return u;
}

double replay_fidelity(const PulseSchedule& s, const TargetState& t, Semantics sem) {
  return overlap_fidelity(apply_schedule(s, sem), reference_vector(t));
}

double replay_fidelity_truncated(const PulseSchedule& s, const TargetState& t, Semantics sem) {
  StateVector out = apply_schedule(s, sem);
  return overlap_fidelity(out, target_vector(t, out.space()));
}

std::vector<PulseStep> invert_climbs(StateVector& state, const std::vector<ClimbStep>& climbs, Semantics sem) {
  const TruncatedSpace& space = state.space();
  std::vector<PulseStep> out(2 * climbs.size());
  CVector& v = state.amps();
  for (std::size_t i = climbs.size(); i-- > 0;) {
    const ClimbStep& c = climbs[i];
    FockLabel dest = c.source;
    dest.at(c.osc) += c.order;
    AngleSolution q = solve_njc_constraint(v[space.index(Qubit::g, dest)], v[space.index(Qubit::e, c.source)]);
    double area = q.angle / xi(dest[c.osc], c.order);
    CMatrix Q = sem == Semantics::exact ? njc_propagator(space, c.osc, c.order, area, q.phase)
                                        : njc_pair_propagator(space, c.osc, c.order, area, q.phase, c.source);
    v = Q.adjoint() * v;
    AngleSolution d = solve_drive_constraint(v[space.index(Qubit::g, c.source)], v[space.index(Qubit::e, c.source)]);
    v = selective_drive_propagator(space, d.angle, d.phase, {c.source}).adjoint() * v;
    out[2 * i] = PulseStep::drive(d.angle, d.phase, {c.source});
    out[2 * i + 1] = PulseStep::njc(c.osc, c.order, area, q.phase);
  }
  return out;
}

FtpResult ftp_schedule_traced(const TargetState& target, int n, const std::optional<CouplingBudget>& budget,
                              Semantics sem, std::optional<int> cutoff) {
  if (target.num_oscillators() != 1) throw DimensionError("ftp_schedule needs a single-oscillator target");
  if (n < 1) throw OrderError("interaction order must be >= 1");
  FtpResult res;
  const int top = target.max_index();
  if (has_symmetry(target, n, 0)) {
    InversionOptions opt;
    opt.budget = budget;
    opt.cutoff = cutoff;
    res.schedule = invert_symmetric(target, n, opt);
    res.delegated = true;
    res.climb_steps = res.schedule.num_njc();
  } else {
    PunchCard card = punch_card(target, n);
    const int D = cutoff.value_or(top + n);
    if (D < top + 1) throw DimensionError("working cutoff too small for the target");
    TruncatedSpace space({D});

    std::vector<ClimbStep> climbs;
    int rows = 0;
    for (int h : card.heights) rows = std::max(rows, h);
    for (int j = 1; j <= rows; ++j)
      for (int k = 0; k < n; ++k)
        if (j <= card.heights[k]) climbs.push_back({0, n, {(j - 1) * n + k}});

    StateVector psi = target_vector(target, space);
    std::vector<PulseStep> climb_steps = invert_climbs(psi, climbs, sem);

    CVector base = CVector::Zero(n);
    for (int l = 0; l < n && l < D; ++l) base[l] = psi.amps()[space.index(Qubit::g, {l})];
    if (base.norm() == 0.0) throw Error("collapsed base state vanished");
    TargetState bt = from_amplitudes(base, "base");
    InversionOptions bopt;
    bopt.steps = n - 1;
    bopt.cutoff = D;
    PulseSchedule bs = invert_symmetric(bt, 1, bopt);

    PulseSchedule& s = res.schedule;
    s.osc_cutoffs = {D};
    s.semantics = sem;
    s.initial = {0};
    s.budget = budget;
    s.steps = bs.steps;
    s.steps.insert(s.steps.end(), climb_steps.begin(), climb_steps.end());
    res.base_steps = n - 1;
    res.climb_steps = static_cast<int>(climbs.size());
    attach_metadata(s, target);
  }
  res.fidelity_ideal = replay_fidelity_truncated(res.schedule, target, Semantics::ideal_pair);
  res.fidelity_exact = replay_fidelity_truncated(res.schedule, target, Semantics::exact);
  if (res.delegated) res.schedule.target = target.label;
  return res;
}

PulseSchedule ftp_schedule(const TargetState& target, int n, const std::optional<CouplingBudget>& budget,
                           Semantics sem) {
  return ftp_schedule_traced(target, n, budget, sem).schedule;
}

namespace {

struct RefineProblem {
  PulseSchedule base;
  StateVector target;
  Semantics sem;
  StateVector initial;
};

void load_params(PulseSchedule& s, const gsl_vector* x) {
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    s.steps[i].area = gsl_vector_get(x, 2 * i);
    s.steps[i].phase = gsl_vector_get(x, 2 * i + 1);
  }
}

double infidelity(const gsl_vector* x, void* ctx) {
  auto* p = static_cast<RefineProblem*>(ctx);
  PulseSchedule s = p->base;
  load_params(s, x);
  double ov = std::abs(p->target.amps().dot(apply_schedule(s, p->initial, p->sem).amps()));
  return 1.0 - ov * ov;
}

void infidelity_grad(const gsl_vector* x, void* ctx, gsl_vector* g) {
  const double h = 1e-6;
  gsl_vector* y = gsl_vector_alloc(x->size);
  gsl_vector_memcpy(y, x);
  for (std::size_t i = 0; i < x->size; ++i) {
    double x0 = gsl_vector_get(x, i);
    gsl_vector_set(y, i, x0 + h);
    double fp = infidelity(y, ctx);
    gsl_vector_set(y, i, x0 - h);
    double fm = infidelity(y, ctx);
    gsl_vector_set(y, i, x0);
    gsl_vector_set(g, i, (fp - fm) / (2 * h));
  }
  gsl_vector_free(y);
}

void infidelity_fdf(const gsl_vector* x, void* ctx, double* f, gsl_vector* g) {
  *f = infidelity(x, ctx);
  infidelity_grad(x, ctx, g);
}

}  // namespace

RefineResult refine_schedule(const PulseSchedule& s, const StateVector& target, Semantics sem, int max_iter) {
  TruncatedSpace space = s.space();
  RefineProblem prob{s, embed(target, space), sem, {}};
  FockLabel init = s.initial.empty() ? FockLabel(space.num_oscillators(), 0) : s.initial;
  prob.initial = StateVector::basis(space, Qubit::g, init);

  RefineResult res;
  res.schedule = s;
  const std::size_t np = 2 * s.steps.size();
  if (np == 0) {
    double ov = std::abs(prob.target.amps().dot(prob.initial.amps()));
    res.initial_infidelity = res.final_infidelity = 1.0 - ov * ov;
    return res;
  }
  gsl_vector* x = gsl_vector_alloc(np);
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    gsl_vector_set(x, 2 * i, s.steps[i].area);
    gsl_vector_set(x, 2 * i + 1, s.steps[i].phase);
  }
  res.initial_infidelity = infidelity(x, &prob);
  res.final_infidelity = res.initial_infidelity;

  gsl_multimin_function_fdf fn;
  fn.n = np;
  fn.f = &infidelity;
  fn.df = &infidelity_grad;
  fn.fdf = &infidelity_fdf;
  fn.params = &prob;

  gsl_error_handler_t* old = gsl_set_error_handler_off();
  gsl_multimin_fdfminimizer* m = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, np);
  gsl_multimin_fdfminimizer_set(m, &fn, x, 1e-3, 0.1);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(m) != GSL_SUCCESS) break;
    if (gsl_multimin_test_gradient(m->gradient, 1e-11) == GSL_SUCCESS) break;
  }
  res.iterations = it;
  double f = m->f;
  if (f < res.initial_infidelity) {
    load_params(res.schedule, m->x);
    for (auto& st : res.schedule.steps) st.phase = wrap_phase(st.phase);
    res.final_infidelity = f;
    res.improved = true;
  }
  gsl_multimin_fdfminimizer_free(m);
  gsl_vector_free(x);
  gsl_set_error_handler(old);
  if (res.improved) {
    res.schedule.semantics = sem;
    res.schedule.fidelity = std::sqrt(std::max(0.0, 1.0 - res.final_infidelity));
  }
  return res;
}

}  // namespace bosonic
