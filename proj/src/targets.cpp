#include "bosonic/targets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "bosonic/fidelity.hpp"
#include "bosonic/operators.hpp"

namespace bosonic {

namespace {

constexpr double kSupportTol = 1e-12;

}  // namespace

cplx TargetState::amp(const std::vector<int>& fock) const {
  if (fock.size() != cutoffs.size()) throw DimensionError("label has wrong oscillator count");
  int idx = 0;
  for (std::size_t i = 0; i < fock.size(); ++i) {
    if (fock[i] < 0 || fock[i] >= cutoffs[i]) return 0.0;
    idx = idx * cutoffs[i] + fock[i];
  }
  return amps[idx];
}

std::vector<int> TargetState::max_indices(double tol) const {
  std::vector<int> m(cutoffs.size(), 0);
  int D2 = cutoffs.size() == 2 ? cutoffs[1] : 1;
  for (int i = 0; i < amps.size(); ++i) {
    if (std::abs(amps[i]) <= tol) continue;
    if (cutoffs.size() == 1) {
      m[0] = std::max(m[0], i);
    } else {
      m[0] = std::max(m[0], i / D2);
      m[1] = std::max(m[1], i % D2);
    }
  }
  return m;
}

double TargetState::truncation_fidelity() const {
  if (reference.size() == 0 || reference_cutoffs == cutoffs) return 1.0;
  if (cutoffs.size() == 1) return overlap_fidelity(amps, reference);
  // Two oscillators: compare label by label.
  cplx ov = 0;
  for (int l1 = 0; l1 < cutoffs[0]; ++l1)
    for (int l2 = 0; l2 < cutoffs[1]; ++l2) {
      if (l1 >= reference_cutoffs[0] || l2 >= reference_cutoffs[1]) continue;
      ov += std::conj(reference[l1 * reference_cutoffs[1] + l2]) * amps[l1 * cutoffs[1] + l2];
    }
  return std::abs(ov);
}

CVector cat_amplitudes(int dim, cplx alpha, CatKind kind) {
  CVector c = osc::coherent(dim, alpha);
  for (int l = 0; l < dim; ++l) {
    double w = 0;
    switch (kind) {
      case CatKind::even2: w = (l % 2 == 0) ? 2.0 : 0.0; break;
      case CatKind::odd2: w = (l % 2 == 1) ? 2.0 : 0.0; break;
      case CatKind::four: w = (l % 4 == 0) ? 4.0 : 0.0; break;
    }
    c[l] *= w;
  }
  double n = c.norm();
  if (n == 0.0) throw Error("cat state has zero norm");
  return c / n;
}

TargetState cat_state(int dim, cplx alpha, CatKind kind) {
  if (dim < 1) throw DimensionError("cat state needs at least one level");
  if (std::norm(alpha) > dim / 3.0) {
    warn("cat state |alpha|^2 exceeds cutoff/3 for " + std::to_string(dim) + " levels");
  }
  TargetState t;
  t.cutoffs = {dim};
  t.amps = cat_amplitudes(dim, alpha, kind);
  t.reference_cutoffs = {4 * dim};
  t.reference = cat_amplitudes(4 * dim, alpha, kind);
  switch (kind) {
    case CatKind::even2: t.n = 2; t.k = 0; break;
    case CatKind::odd2: t.n = 2; t.k = 1; break;
    case CatKind::four: t.n = 4; t.k = 0; break;
  }
  return t;
}

CVector gkp_amplitudes(int dim, double kappa, double r, int P, GkpEnvelope env) {
  const int N = std::max(600, 2 * dim);
  const double s2p = std::sqrt(2 * std::numbers::pi);
  CVector vac = CVector::Zero(N);
  vac[0] = 1.0;
  // x-squeezed vacuum exp(r (a^2 - a^dag^2) / 2)
  CVector sq = expm_action(osc::squeezing_generator(N, 2, -r / 2), vac);
  CVector psi = CVector::Zero(N);
  for (int k = -P; k <= P; ++k) {
    double a = k * s2p;
    double w = env == GkpEnvelope::literal ? std::exp(-std::numbers::pi * kappa * kappa * a * a / s2p)
                                           : std::exp(-kappa * kappa * a * a / 2);
    psi += w * (k == 0 ? sq : expm_action(osc::displacement_generator(N, a), sq));
  }
  double tail = psi.tail(N / 10).squaredNorm() / psi.squaredNorm();
  if (tail > 1e-10) warn("GKP construction reaches the internal cutoff (tail weight " + std::to_string(tail) + ")");
  CVector out = psi.head(dim);
  double n = out.norm();
  if (n == 0.0) throw Error("GKP state has zero norm in the requested cutoff");
  return out / n;
}

TargetState gkp_zero(int dim, double kappa, double r, int P, GkpEnvelope env) {
  TargetState t;
  t.cutoffs = {dim};
  t.amps = gkp_amplitudes(dim, kappa, r, P, env);
  t.reference_cutoffs = {4 * dim};
  t.reference = gkp_amplitudes(4 * dim, kappa, r, P, env);
  t.n = 2;
  t.k = 0;
  return t;
}

cplx displacement_expectation(const CVector& psi, cplx beta) {
  const int D = static_cast<int>(psi.size());
  const int N = D + std::max(200, D);
  CVector v = CVector::Zero(N);
  v.head(D) = psi;
  CVector dv = expm_action(osc::displacement_generator(N, beta), v);
  return v.dot(dv);
}

double squeezing_db(double delta) { return -10.0 * std::log10(delta * delta); }

SqueezingMetrics effective_squeezing(const CVector& psi) {
  const double s2p = std::sqrt(2 * std::numbers::pi);
  auto delta = [](cplx ev) {
    double m = std::abs(ev);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::log(1.0 / (m * m)) / (2 * std::numbers::pi));
  };
  SqueezingMetrics s;
  s.dx = delta(displacement_expectation(psi, cplx(0, s2p)));
  s.dp = delta(displacement_expectation(psi, cplx(s2p, 0)));
  s.dx_db = squeezing_db(s.dx);
  s.dp_db = squeezing_db(s.dp);
  return s;
}

namespace {

TargetState two_osc(int D1, int D2, std::string label) {
  TargetState t;
  t.cutoffs = {D1, D2};
  t.amps = CVector::Zero(D1 * D2);
  t.label = std::move(label);
  return t;
}

void finish_two_osc(TargetState& t) {
  double n = t.amps.norm();
  if (n == 0.0) throw Error("two-oscillator target has zero norm");
  t.amps /= n;
  t.reference = t.amps;
  t.reference_cutoffs = t.cutoffs;
}

}  // namespace

TargetState noon_state(int N) {
  if (N < 1) throw DimensionError("NOON state needs N >= 1");
  TargetState t = two_osc(N + 1, N + 1, "noon:N=" + std::to_string(N));
  t.amps[N * (N + 1)] = 1.0;
  t.amps[N] = 1.0;
  finish_two_osc(t);
  return t;
}

TargetState bell_cat_state(cplx alpha1, cplx alpha2, int trunc) {
  if (trunc < 1) throw DimensionError("Bell-cat truncation must be >= 1");
  TargetState t = two_osc(trunc + 1, trunc + 1, "bellcat");
  CVector c1 = osc::coherent(trunc + 1, alpha1);
  CVector c2 = osc::coherent(trunc + 1, alpha2);
  for (int m = 0; m <= trunc; ++m)
    for (int n = 0; n <= trunc; ++n)
      if ((m + n) % 2 == 0) t.amps[m * (trunc + 1) + n] = 2.0 * c1[m] * c2[n];
  finish_two_osc(t);
  // Reference at 4x the working cutoff.
  int R = 4 * (trunc + 1);
  CVector r1 = osc::coherent(R, alpha1), r2 = osc::coherent(R, alpha2);
  t.reference = CVector::Zero(R * R);
  for (int m = 0; m < R; ++m)
    for (int n = 0; n < R; ++n)
      if ((m + n) % 2 == 0) t.reference[m * R + n] = 2.0 * r1[m] * r2[n];
  t.reference.normalize();
  t.reference_cutoffs = {R, R};
  return t;
}

TargetState dense_state(int L1, int L2) {
  if (L1 < 0 || L2 < 0) throw DimensionError("dense state sizes must be >= 0");
  TargetState t = two_osc(L1 + 1, L2 + 1, "dense:L1=" + std::to_string(L1) + ",L2=" + std::to_string(L2));
  t.amps.setOnes();
  finish_two_osc(t);
  return t;
}

TargetState custom_two_osc(const std::map<std::pair<int, int>, cplx>& amps, std::string label) {
  int D1 = 1, D2 = 1;
  for (const auto& [k, v] : amps) {
    if (k.first < 0 || k.second < 0) throw DimensionError("negative Fock index");
    D1 = std::max(D1, k.first + 1);
    D2 = std::max(D2, k.second + 1);
  }
  TargetState t = two_osc(std::max(D1, 2), std::max(D2, 2), std::move(label));
  for (const auto& [k, v] : amps) t.amps[k.first * t.cutoffs[1] + k.second] = v;
  finish_two_osc(t);
  return t;
}

TargetState from_amplitudes(const CVector& amps, std::string label) {
  TargetState t;
  t.cutoffs = {static_cast<int>(std::max<Eigen::Index>(amps.size(), 1))};
  t.amps = amps;
  double n = t.amps.norm();
  if (n == 0.0) throw Error("target has zero norm");
  t.amps /= n;
  t.reference = t.amps;
  t.reference_cutoffs = t.cutoffs;
  t.label = std::move(label);
  infer_symmetry(t);
  return t;
}

TargetState fock_superposition(const std::vector<int>& levels) {
  if (levels.empty()) throw Error("empty Fock level list");
  int top = *std::max_element(levels.begin(), levels.end());
  if (*std::min_element(levels.begin(), levels.end()) < 0) throw DimensionError("negative Fock index");
  CVector v = CVector::Zero(top + 1);
  for (int l : levels) v[l] += 1.0;
  return from_amplitudes(v, "fock");
}

bool has_symmetry(const TargetState& t, int n, int k, double tol) {
  if (t.num_oscillators() != 1) return false;
  for (int l = 0; l < t.amps.size(); ++l)
    if (l % n != k && std::abs(t.amps[l]) > tol) return false;
  return true;
}

void infer_symmetry(TargetState& t) {
  if (t.num_oscillators() != 1) {
    t.n = 1;
    t.k = 0;
    return;
  }
  for (int n : {4, 2}) {
    for (int k = 0; k < n; ++k) {
      if (has_symmetry(t, n, k, kSupportTol)) {
        t.n = n;
        t.k = k;
        return;
      }
    }
  }
  t.n = 1;
  t.k = 0;
}

// ---- parser ----

namespace {

double parse_real(const std::string& text, std::size_t pos) {
  if (text.empty()) throw ParseError("expected a number", pos);
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) throw ParseError("malformed number '" + text + "'", pos);
  return v;
}

int parse_int(const std::string& text, std::size_t pos) {
  if (text.empty()) throw ParseError("expected an integer", pos);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (...) {
    throw ParseError("malformed integer '" + text + "'", pos);
  }
  if (used != text.size()) throw ParseError("malformed integer '" + text + "'", pos);
  return static_cast<int>(v);
}

// Accepts "a", "bi", "a+bi", "a-bi".
cplx parse_complex(const std::string& text, std::size_t pos) {
  if (text.empty()) throw ParseError("expected a complex number", pos);
  if (text.back() != 'i' && text.back() != 'j') return parse_real(text, pos);
  std::string body = text.substr(0, text.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') split = i;
  }
  if (split == std::string::npos) {
    if (body.empty() || body == "+") return cplx(0, 1);
    if (body == "-") return cplx(0, -1);
    return cplx(0, parse_real(body, pos));
  }
  std::string im = body.substr(split);
  double imv = (im == "+") ? 1.0 : (im == "-") ? -1.0 : parse_real(im, pos + split);
  return cplx(parse_real(body.substr(0, split), pos), imv);
}

struct Params {
  std::map<std::string, std::pair<std::string, std::size_t>> kv;

  bool has(const std::string& k) const { return kv.count(k) != 0; }
  const std::pair<std::string, std::size_t>& get(const std::string& k, std::size_t pos) const {
    auto it = kv.find(k);
    if (it == kv.end()) throw ParseError("missing parameter '" + k + "'", pos);
    return it->second;
  }
};

Params parse_params(const std::string& body, std::size_t base, const std::vector<std::string>& allowed) {
  Params p;
  std::size_t i = 0;
  while (i <= body.size()) {
    std::size_t comma = body.find(',', i);
    if (comma == std::string::npos) comma = body.size();
    std::string item = body.substr(i, comma - i);
    std::size_t eq = item.find('=');
    if (item.empty()) throw ParseError("empty parameter", base + i);
    if (eq == std::string::npos) throw ParseError("expected key=value", base + i);
    std::string key = item.substr(0, eq);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError("unknown parameter '" + key + "'", base + i);
    }
    if (p.kv.count(key)) throw ParseError("duplicate parameter '" + key + "'", base + i);
    p.kv[key] = {item.substr(eq + 1), base + i + eq + 1};
    i = comma + 1;
    if (comma == body.size()) break;
  }
  return p;
}

// Smallest level count on the symmetry grid within which the overlap
// infidelity against a ref_dim-level construction is at most 1e-5.
template <class Make>
int default_dim(int step, int offset, int ref_dim, Make make) {
  // Undersized candidates are expected here; keep their warnings quiet.
  struct Quiet {
    WarningSink prev = set_warning_sink([](const std::string&) {});
    ~Quiet() { set_warning_sink(prev); }
  } quiet;
  CVector ref = make(ref_dim).amps;
  for (int top = offset; top + 1 < ref_dim; top += step) {
    if (1.0 - overlap_fidelity(make(top + 1).amps, ref) <= 1e-5) return top + 1;
  }
  throw Error("no truncation below the reference size reaches the default fidelity");
}

TargetState parse_amps_file(const std::string& path, std::size_t pos) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open amplitude file '" + path + "'", pos);
  std::map<int, cplx> m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected index,re,im", pos);
    }
    int idx = parse_int(a, pos);
    if (idx < 0) throw ParseError(path + ":" + std::to_string(lineno) + ": negative index", pos);
    m[idx] += cplx(parse_real(b, pos), parse_real(c, pos));
  }
  if (m.empty()) throw ParseError("amplitude file '" + path + "' has no entries", pos);
  CVector v = CVector::Zero(m.rbegin()->first + 1);
  for (auto [k, a] : m) v[k] = a;
  return from_amplitudes(v, "amps:" + path);
}

}  // namespace

TargetState parse_target(const std::string& spec) {
  std::size_t colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("expected <family>:<parameters>", 0);
  std::string fam = spec.substr(0, colon);
  std::string body = spec.substr(colon + 1);
  std::size_t base = colon + 1;
  TargetState t;

  if (fam == "cat2" || fam == "cat4") {
    Params p = parse_params(body, base, {"alpha", "trunc", "parity"});
    auto [as, apos] = p.get("alpha", base);
    cplx alpha = parse_complex(as, apos);
    CatKind kind = fam == "cat4" ? CatKind::four : CatKind::even2;
    if (p.has("parity")) {
      auto [ps, ppos] = p.get("parity", base);
      if (fam == "cat4" || (ps != "even" && ps != "odd")) throw ParseError("bad parity '" + ps + "'", ppos);
      if (ps == "odd") kind = CatKind::odd2;
    }
    int step = kind == CatKind::four ? 4 : 2;
    int offset = kind == CatKind::odd2 ? 1 : 0;
    int dim = 0;
    if (p.has("trunc")) {
      auto [ts, tpos] = p.get("trunc", base);
      dim = parse_int(ts, tpos) + 1;
      if (dim < 1) throw ParseError("trunc must be >= 0", tpos);
    } else {
      int ref = std::max(60, static_cast<int>(std::ceil(12 * std::norm(alpha))));
      dim = default_dim(step, offset, ref, [&](int d) { return cat_state(d, alpha, kind); });
    }
    t = cat_state(dim, alpha, kind);
  } else if (fam == "gkp") {
    Params p = parse_params(body, base, {"kappa", "r", "P", "trunc", "envelope"});
    auto [ks, kpos] = p.get("kappa", base);
    auto [rs, rpos] = p.get("r", base);
    auto [Ps, Ppos] = p.get("P", base);
    double kappa = parse_real(ks, kpos), r = parse_real(rs, rpos);
    int P = parse_int(Ps, Ppos);
    if (P < 0) throw ParseError("P must be >= 0", Ppos);
    GkpEnvelope env = GkpEnvelope::literal;
    if (p.has("envelope")) {
      auto [es, epos] = p.get("envelope", base);
      if (es == "gaussian-half") env = GkpEnvelope::gaussian_half;
      else if (es != "literal") throw ParseError("unknown envelope '" + es + "'", epos);
    }
    int dim = 0;
    if (p.has("trunc")) {
      auto [ts, tpos] = p.get("trunc", base);
      dim = parse_int(ts, tpos) + 1;
      if (dim < 1) throw ParseError("trunc must be >= 0", tpos);
    } else {
      // Truncations of one 300-level build equal direct builds at any d <= 300.
      CVector full = gkp_amplitudes(300, kappa, r, P, env);
      dim = default_dim(2, 0, 300, [&](int d) {
        TargetState c;
        c.amps = full.head(d).normalized();
        return c;
      });
    }
    t = gkp_zero(dim, kappa, r, P, env);
  } else if (fam == "fock") {
    std::vector<int> levels;
    std::size_t i = 0;
    while (true) {
      std::size_t comma = body.find(',', i);
      if (comma == std::string::npos) comma = body.size();
      std::string item = body.substr(i, comma - i);
      int l = parse_int(item, base + i);
      if (l < 0) throw ParseError("negative Fock index", base + i);
      levels.push_back(l);
      if (comma == body.size()) break;
      i = comma + 1;
    }
    t = fock_superposition(levels);
  } else if (fam == "amps") {
    if (body.empty()) throw ParseError("expected a file name", base);
    t = parse_amps_file(body, base);
  } else if (fam == "noon") {
    Params p = parse_params(body, base, {"N"});
    auto [ns, npos] = p.get("N", base);
    int N = parse_int(ns, npos);
    if (N < 1) throw ParseError("N must be >= 1", npos);
    t = noon_state(N);
  } else if (fam == "bellcat") {
    Params p = parse_params(body, base, {"alpha1", "alpha2", "trunc"});
    auto [a1, p1] = p.get("alpha1", base);
    auto [a2, p2] = p.get("alpha2", base);
    int trunc = 10;
    if (p.has("trunc")) {
      auto [ts, tpos] = p.get("trunc", base);
      trunc = parse_int(ts, tpos);
      if (trunc < 1) throw ParseError("trunc must be >= 1", tpos);
    }
    t = bell_cat_state(parse_complex(a1, p1), parse_complex(a2, p2), trunc);
  } else if (fam == "dense") {
    Params p = parse_params(body, base, {"L1", "L2"});
    auto [l1, p1] = p.get("L1", base);
    auto [l2, p2] = p.get("L2", base);
    int L1 = parse_int(l1, p1), L2 = parse_int(l2, p2);
    if (L1 < 0) throw ParseError("L1 must be >= 0", p1);
    if (L2 < 0) throw ParseError("L2 must be >= 0", p2);
    t = dense_state(L1, L2);
  } else {
    throw ParseError("unknown target family '" + fam + "'", 0);
  }
  t.label = spec;
  return t;
}

}  // namespace bosonic
