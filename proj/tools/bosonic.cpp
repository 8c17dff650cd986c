#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "bosonic/config.hpp"
#include "bosonic/format.hpp"
#include "bosonic/multiosc.hpp"
#include "bosonic/opensystem.hpp"
#include "bosonic/planner.hpp"
#include "bosonic/synthesis.hpp"
#include "bosonic/targets.hpp"
#include "bosonic/wigner.hpp"

#ifndef BOSONIC_VERSION
#define BOSONIC_VERSION "0.0.0"
#endif

using namespace bosonic;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kInput = 1, kThreshold = 2, kIntegration = 3 };

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

struct Manifest {
  std::string command;
  json arguments = json::object();
  json inputs = json::object();
  json outputs = json::array();
  json results = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void input(const std::string& path) { inputs[path] = sha256_file(path); }

  void write(const std::string& path, int exit_code) const {
    json m;
    m["command"] = command;
    m["arguments"] = arguments;
    m["inputs"] = inputs;
    m["version"] = BOSONIC_VERSION;
    m["outputs"] = outputs;
    m["results"] = results;
    m["exit_code"] = exit_code;
    m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write manifest " + path);
    out << m.dump(2) << '\n';
  }
};

void record_arguments(const CLI::App& sub, Manifest& m) {
  for (const CLI::Option* o : sub.get_options()) {
    if (o->count() == 0 || o->get_name() == "--help") continue;
    const auto& r = o->results();
    std::string name = o->get_name();
    if (name.rfind("--", 0) == 0) name = name.substr(2);
    if (r.empty() || (o->get_expected_max() == 0)) m.arguments[name] = true;
    else if (r.size() == 1) m.arguments[name] = r[0];
    else m.arguments[name] = r;
  }
}

// "<hz>*2pi" or "<value>radps".
double parse_frequency(const std::string& v) {
  const std::string rad = "radps";
  if (v.size() > rad.size() && v.compare(v.size() - rad.size(), rad.size(), rad) == 0) {
    std::string num = v.substr(0, v.size() - rad.size());
    if (!num.empty() && num.back() == '_') num.pop_back();
    return parse_angular("f_radps", num);
  }
  return parse_angular("f_hz", v);
}

CouplingBudget load_budget(const std::string& path, Manifest& m) {
  if (path.empty()) return CouplingBudget::standard();
  m.input(path);
  CouplingBudget b = CouplingBudget::from_key_values(read_key_value_file(path));
  b.validate();
  return b;
}

void emit(const std::string& path, const std::string& text, Manifest& m) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  m.outputs.push_back(path);
}

std::string manifest_path(const std::string& given, const std::string& out, const std::string& cmd) {
  if (!given.empty()) return given;
  if (!out.empty()) return out + ".manifest.json";
  return "bosonic-" + cmd + ".manifest.json";
}

Semantics parse_semantics(const std::string& s) {
  if (s == "exact") return Semantics::exact;
  if (s == "ideal") return Semantics::ideal_pair;
  throw ConfigError("semantics must be exact or ideal");
}

struct SynthArgs {
  std::string target, budget, semantics, out, manifest;
  int order = 1;
  int order2 = 0;
  int cutoff = 0;
  bool ftp = false, refine = false;
  double threshold = 0.999;
};

int cmd_synthesize(const SynthArgs& a, Manifest& m) {
  TargetState t = parse_target(a.target);
  CouplingBudget b = load_budget(a.budget, m);
  PulseSchedule s;
  if (t.num_oscillators() == 2) {
    TwoOscOptions o;
    o.budget = b;
    o.semantics = a.semantics.empty() ? Semantics::ideal_pair : parse_semantics(a.semantics);
    if (a.cutoff > 0) o.cutoffs = std::vector<int>{a.cutoff, a.cutoff};
    int n2 = a.order2 > 0 ? a.order2 : a.order;
    TwoOscResult r = a.ftp ? ftp_two_oscillator_traced(t, a.order, n2, o) : invert_two_oscillator_traced(t, a.order, n2, o);
    s = r.schedule;
    m.results["fidelity_ideal"] = r.fidelity_ideal;
    m.results["fidelity_exact"] = r.fidelity_exact;
  } else if (a.ftp) {
    Semantics sem = a.semantics.empty() ? Semantics::ideal_pair : parse_semantics(a.semantics);
    FtpResult r = ftp_schedule_traced(t, a.order, b, sem, a.cutoff > 0 ? std::optional<int>(a.cutoff) : std::nullopt);
    s = r.schedule;
    m.results["fidelity_ideal"] = r.fidelity_ideal;
    m.results["fidelity_exact"] = r.fidelity_exact;
  } else {
    InversionOptions o;
    o.budget = b;
    o.semantics = a.semantics.empty() ? Semantics::exact : parse_semantics(a.semantics);
    if (a.cutoff > 0) o.cutoff = a.cutoff;
    s = invert_symmetric(t, a.order, o);
  }
  if (a.refine) {
    RefineResult r = refine_schedule(s, target_vector(t, s.space()), s.semantics);
    s = r.schedule;
    s.fidelity = replay_fidelity(s, t, s.semantics);
    m.results["refined"] = r.improved;
  }
  double f = s.fidelity.value_or(0.0);
  m.results["operations"] = s.steps.size();
  m.results["fidelity"] = f;
  if (s.duration_s) m.results["duration_s"] = *s.duration_s;
  emit(a.out, to_json(s), m);
  std::cerr << "operations " << s.steps.size() << ", fidelity " << fmt_num(f);
  if (s.duration_s) std::cerr << ", duration " << fmt_num(*s.duration_s * 1e9) << " ns";
  std::cerr << '\n';
  return f >= a.threshold ? kOk : kThreshold;
}

struct PlanArgs {
  std::string target, budget, manifest;
  int order = 1, order2 = 0;
  bool two_osc = false, csv = false;
};

int cmd_plan(const PlanArgs& a, Manifest& m) {
  TargetState t = parse_target(a.target);
  CouplingBudget b = load_budget(a.budget, m);
  std::ostringstream os;
  if (a.two_osc || t.num_oscillators() == 2) {
    if (t.num_oscillators() != 2) throw DimensionError("--two-osc needs a two-oscillator target");
    int n2 = a.order2 > 0 ? a.order2 : a.order;
    MultiPunchCard card = multi_punch_card(t, a.order, n2);
    MultiPunchCard lin = multi_punch_card(t, 1, 1);
    int sf = steps_two_oscillator(card), sl = steps_two_oscillator(lin);
    double tf = time_ftp_two_oscillator(card, b), tl = time_ftp_two_oscillator(lin, b);
    m.results = {{"steps_ftp", sf}, {"steps_linear", sl}, {"T_ftp_ns", tf * 1e9}, {"T_linear_ns", tl * 1e9}};
    if (a.csv) {
      os << "key,value\nL1," << card.L1 << "\nL2," << card.L2 << "\nsteps_ftp," << sf << "\nsteps_linear," << sl
         << "\nT_ftp_ns," << fmt_num(tf * 1e9) << "\nT_linear_ns," << fmt_num(tl * 1e9) << '\n';
    } else {
      os << "L1 = " << card.L1 << ", L2 = " << card.L2 << ", orders (" << a.order << ", " << n2 << ")\n";
      os << "steps: " << sf << " (ftp) vs " << sl << " (linear)\n";
      os << "T_FTP = " << fmt_num(tf * 1e9) << " ns, T_linear = " << fmt_num(tl * 1e9) << " ns\n";
    }
  } else {
    PunchCard card = punch_card(t, a.order);
    int J = greedy_base_steps(a.order);
    StepCounts sc = steps_arbitrary(card, J);
    double tf = time_ftp(card, b, base_time(a.order, b));
    double tl = time_le(card.max_level, b);
    json h = card.heights;
    m.results = {{"heights", h}, {"J", J}, {"N_arb", sc.n_arb}, {"K_arb", sc.k_arb},
                 {"T_ftp_ns", tf * 1e9}, {"T_le_ns", tl * 1e9}};
    std::ostringstream hs;
    for (std::size_t i = 0; i < card.heights.size(); ++i) hs << (i ? "," : "") << card.heights[i];
    if (a.csv) {
      os << "key,value\nL," << card.max_level << "\nheights,\"" << hs.str() << "\"\nJ," << J << "\nN_arb," << sc.n_arb
         << "\nK_arb," << sc.k_arb << "\nT_ftp_ns," << fmt_num(tf * 1e9) << "\nT_le_ns," << fmt_num(tl * 1e9) << '\n';
    } else {
      os << render_punch_card(card);
      os << "heights = (" << hs.str() << ")\n";
      os << "steps = " << J << " + " << card.total_height() << " (N_arb = " << sc.n_arb << ", K_arb = " << sc.k_arb
         << ")\n";
      os << "T_FTP = " << fmt_num(tf * 1e9) << " ns, T_LE = " << fmt_num(tl * 1e9) << " ns\n";
    }
  }
  std::cout << os.str();
  return kOk;
}

struct EstimateArgs {
  std::string mode = "symmetric", omega, g, out, manifest;
  int n = 1, K = 0, max_linear = 40;
};

int cmd_estimate(const EstimateArgs& a, Manifest& m) {
  std::vector<ScalingRow> rows;
  if (a.mode == "symmetric") {
    const CouplingBudget std_b = CouplingBudget::standard();
    if (a.g.empty() && !std_b.g.count(a.n)) throw ConfigError("--g is required for order " + std::to_string(a.n));
    double om = a.omega.empty() ? std_b.omega : parse_frequency(a.omega);
    double g = a.g.empty() ? std_b.g.at(a.n) : parse_frequency(a.g);
    CouplingBudget b;
    b.omega = om;
    b.g[a.n] = g;
    rows.push_back({a.K, a.n, om, g, time_symmetric(a.K, a.n, b) * 1e9});
    m.results["T_ns"] = rows[0].T_ns;
    std::cerr << "T = " << fmt_num(rows[0].T_ns) << " ns\n";
  } else if (a.mode == "figure2") {
    rows = figure2_table(a.max_linear);
  } else if (a.mode == "figure5") {
    rows = figure5_table(a.max_linear);
  } else {
    throw ConfigError("unknown mode " + a.mode);
  }
  m.results["rows"] = rows.size();
  emit(a.out, scaling_csv(rows), m);
  return kOk;
}

struct OpenArgs {
  std::string schedule, params, rates, target, out, wigner, manifest;
  int cutoff = 30;
  double rtol = 1e-8, atol = 1e-10, threshold = 0;
  bool no_spurious = false;
};

int cmd_open_sim(const OpenArgs& a, Manifest& m) {
  m.input(a.schedule);
  PulseSchedule s = read_schedule(a.schedule);
  CircuitParams p = CircuitParams::defaults();
  if (!a.params.empty()) {
    m.input(a.params);
    p = CircuitParams::from_key_values(read_key_value_file(a.params));
  }
  if (a.no_spurious) p = p.without_spurious();
  NoiseRates r = NoiseRates::defaults();
  if (!a.rates.empty()) {
    m.input(a.rates);
    r = NoiseRates::from_key_values(read_key_value_file(a.rates));
  }
  std::string spec = a.target.empty() ? s.target : a.target;
  if (spec.empty()) throw ConfigError("schedule has no target label; pass --target");
  TargetState t = parse_target(spec);
  OpenOptions o;
  o.cutoff = a.cutoff;
  o.integrator.rtol = a.rtol;
  o.integrator.atol = a.atol;
  const CVector& ref = t.reference.size() > 0 ? t.reference : t.amps;

  OpenResult res;
  if (!a.wigner.empty()) {
    WignerComparison c = wigner_comparison(s, p, r, ref, {}, o, std::max(1, t.n));
    res = c.run;
    std::ostringstream ws;
    write_wigner_csv(ws, c.open);
    emit(a.wigner, ws.str(), m);
    m.results["wigner_max_deviation"] = c.max_deviation;
    m.results["lobe_shift"] = c.lobe_shift;
    m.results["lobe_rotation"] = c.lobe_rotation;
  } else {
    res = run_open_protocol(s, p, r, ref, o);
  }
  std::ostringstream rs;
  write_density_csv(rs, res.rho);
  if (!a.out.empty()) emit(a.out, rs.str(), m);
  m.results["fidelity"] = res.fidelity;
  m.results["fidelity_osc"] = res.fidelity_osc;
  m.results["duration_s"] = res.duration_s;
  m.results["accepted_steps"] = res.stats.accepted;
  m.results["max_trace_error"] = res.stats.max_trace_error;
  m.results["min_eigenvalue"] = res.stats.min_eigenvalue;
  std::cout << "fidelity " << fmt_num(res.fidelity) << '\n';
  return res.fidelity >= a.threshold ? kOk : kThreshold;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bosonic state-preparation compiler"};
  app.set_version_flag("--version", BOSONIC_VERSION);
  app.require_subcommand(1);

  SynthArgs sa;
  auto* syn = app.add_subcommand("synthesize", "Compile a target state into a pulse schedule");
  syn->add_option("--target", sa.target, "Target spec, e.g. cat2:alpha=1.41421356")->required();
  syn->add_option("--order", sa.order, "Interaction order n (oscillator 1)")->check(CLI::PositiveNumber);
  syn->add_option("--order2", sa.order2, "Interaction order for oscillator 2")->check(CLI::PositiveNumber);
  syn->add_option("--cutoff", sa.cutoff, "Working cutoff")->check(CLI::PositiveNumber);
  syn->add_option("--budget", sa.budget, "Coupling budget file (key = value)");
  syn->add_flag("--ftp", sa.ftp, "Use the fine-tune-then-populate protocol");
  syn->add_flag("--refine", sa.refine, "Polish areas and phases with a local optimizer");
  syn->add_option("--semantics", sa.semantics, "exact | ideal")->check(CLI::IsMember({"exact", "ideal"}));
  syn->add_option("--threshold", sa.threshold, "Minimum fidelity for exit 0");
  syn->add_option("--out", sa.out, "Schedule JSON path (stdout if omitted)");
  syn->add_option("--manifest", sa.manifest, "Run manifest path");

  PlanArgs pa;
  auto* plan = app.add_subcommand("plan", "Punch card, step counts and time estimates");
  plan->add_option("--target", pa.target, "Target spec")->required();
  plan->add_option("--order", pa.order, "Interaction order n")->check(CLI::PositiveNumber);
  plan->add_option("--order2", pa.order2, "Interaction order for oscillator 2")->check(CLI::PositiveNumber);
  plan->add_option("--budget", pa.budget, "Coupling budget file");
  plan->add_flag("--two-osc", pa.two_osc, "Two-oscillator planning");
  plan->add_flag("--csv", pa.csv, "Machine-readable output");
  plan->add_option("--manifest", pa.manifest, "Run manifest path");

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Protocol time estimates");
  est->add_option("--mode", ea.mode, "symmetric | figure2 | figure5")
      ->check(CLI::IsMember({"symmetric", "figure2", "figure5"}));
  est->add_option("--n", ea.n, "Interaction order")->check(CLI::PositiveNumber);
  est->add_option("--K", ea.K, "Number of nJC steps")->check(CLI::NonNegativeNumber);
  est->add_option("--omega", ea.omega, "Drive rate, <Hz>*2pi or <value>radps (default 25e6*2pi)");
  est->add_option("--g", ea.g, "Coupling, <Hz>*2pi or <value>radps (default: standard budget)");
  est->add_option("--max-linear", ea.max_linear, "Largest n K in figure tables")->check(CLI::NonNegativeNumber);
  est->add_option("--out", ea.out, "CSV path (stdout if omitted)");
  est->add_option("--manifest", ea.manifest, "Run manifest path");

  OpenArgs oa;
  auto* open = app.add_subcommand("open-sim", "Replay a schedule with circuit Hamiltonian and dissipation");
  open->add_option("--schedule", oa.schedule, "Schedule JSON")->required();
  open->add_option("--params", oa.params, "Circuit parameter file");
  open->add_option("--rates", oa.rates, "Noise rate file");
  open->add_option("--target", oa.target, "Target spec (default: schedule target)");
  open->add_option("--cutoff", oa.cutoff, "Simulation cutoff")->check(CLI::PositiveNumber);
  open->add_option("--rtol", oa.rtol, "Relative tolerance");
  open->add_option("--atol", oa.atol, "Absolute tolerance");
  open->add_flag("--no-spurious", oa.no_spurious, "Zero every spurious coupling");
  open->add_option("--threshold", oa.threshold, "Minimum fidelity for exit 0");
  open->add_option("--out", oa.out, "Density matrix CSV");
  open->add_option("--wigner", oa.wigner, "Open-system Wigner grid CSV");
  open->add_option("--manifest", oa.manifest, "Run manifest path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }

  Manifest m;
  std::string mpath;
  int code = kOk;
  CLI::App* sub = app.get_subcommands().front();
  m.command = sub->get_name();
  record_arguments(*sub, m);
  try {
    if (sub == syn) {
      mpath = manifest_path(sa.manifest, sa.out, "synthesize");
      code = cmd_synthesize(sa, m);
    } else if (sub == plan) {
      mpath = manifest_path(pa.manifest, "", "plan");
      code = cmd_plan(pa, m);
    } else if (sub == est) {
      mpath = manifest_path(ea.manifest, ea.out, "estimate");
      code = cmd_estimate(ea, m);
    } else {
      mpath = manifest_path(oa.manifest, oa.out, "open-sim");
      code = cmd_open_sim(oa, m);
    }
  } catch (const IntegrationError& e) {
    std::cerr << "integration failure: " << e.what() << '\n';
    code = kIntegration;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kInput;
  }
  try {
    m.write(mpath, code);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (code == kOk) code = kInput;
  }
  return code;
}
