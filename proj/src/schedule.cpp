#include "bosonic/schedule.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "bosonic/config.hpp"
#include "bosonic/format.hpp"

namespace bosonic {

using ojson = nlohmann::ordered_json;

CouplingBudget CouplingBudget::standard() {
  const double tp = 2 * std::numbers::pi;
  CouplingBudget b;
  b.omega = tp * 25e6;
  b.g = {{1, tp * 100e6}, {2, tp * 25e6}};
  return b;
}

double CouplingBudget::magnitude(const PulseStep& s) const {
  if (s.kind == StepKind::drive) {
    if (!(omega > 0)) throw ConfigError("budget has no drive rate");
    return omega;
  }
  auto it = g.find(s.order);
  if (it == g.end() || !(it->second > 0)) {
    throw ConfigError("budget has no coupling for order " + std::to_string(s.order));
  }
  return it->second;
}

void CouplingBudget::validate() const {
  if (!(omega > 0)) throw ConfigError("budget omega must be > 0");
  for (auto [n, v] : g)
    if (!(v > 0)) throw ConfigError("budget g" + std::to_string(n) + " must be > 0");
}

CouplingBudget CouplingBudget::from_key_values(const std::map<std::string, std::string>& kv) {
  CouplingBudget b;
  b.omega = 0;
  for (const auto& [k, v] : kv) {
    std::string base = strip_unit(k);
    if (base == "omega") {
      b.omega = parse_angular(k, v);
    } else if (base.size() == 2 && base[0] == 'g' && base[1] >= '1' && base[1] <= '9') {
      b.g[base[1] - '0'] = parse_angular(k, v);
    } else {
      throw ConfigError("unknown budget key " + k);
    }
  }
  b.validate();
  return b;
}

int PulseSchedule::num_njc() const {
  int n = 0;
  for (const auto& s : steps) n += s.kind == StepKind::njc;
  return n;
}

double schedule_duration(const PulseSchedule& s, const CouplingBudget& b) {
  double t = 0;
  for (const auto& st : s.steps) t += std::abs(st.area) / b.magnitude(st);
  return t;
}

double schedule_duration(const PulseSchedule& s) {
  if (!s.budget) throw ConfigError("schedule has no budget attached");
  return schedule_duration(s, *s.budget);
}

double wrap_phase(double phi) {
  const double tp = 2 * std::numbers::pi;
  double w = std::fmod(phi, tp);
  if (w <= -std::numbers::pi) w += tp;
  if (w > std::numbers::pi) w -= tp;
  return w;
}

PulseStep canonical(const PulseStep& s) {
  PulseStep c = s;
  if (c.area < 0) {
    c.area = -c.area;
    c.phase += std::numbers::pi;
  }
  c.phase = wrap_phase(c.phase);
  return c;
}

bool equivalent(const PulseStep& a, const PulseStep& b, double tol) {
  if (a.kind != b.kind || a.select != b.select) return false;
  if (a.kind == StepKind::njc && (a.osc != b.osc || a.order != b.order)) return false;
  PulseStep ca = canonical(a), cb = canonical(b);
  if (std::abs(ca.area - cb.area) > tol) return false;
  if (ca.area <= tol) return true;
  return std::abs(wrap_phase(ca.phase - cb.phase)) <= tol;
}

std::string to_json(const PulseSchedule& s) {
  ojson j;
  j["version"] = 1;
  j["space"]["osc_cutoffs"] = s.osc_cutoffs;
  if (s.budget) {
    j["budget"]["omega_radps"] = round12(s.budget->omega);
    ojson g = ojson::object();
    for (auto [n, v] : s.budget->g) g[std::to_string(n)] = round12(v);
    j["budget"]["g_radps"] = g;
  } else {
    j["budget"] = nullptr;
  }
  ojson steps = ojson::array();
  for (const auto& st : s.steps) {
    ojson o;
    bool drive = st.kind == StepKind::drive;
    o["kind"] = drive ? "drive" : "njc";
    o["osc"] = drive ? ojson(nullptr) : ojson(st.osc + 1);
    o["order"] = drive ? ojson(nullptr) : ojson(st.order);
    o["area"] = round12(st.area);
    o["phase"] = round12(st.phase);
    o["select"] = st.select.empty() ? ojson(nullptr) : ojson(st.select);
    steps.push_back(o);
  }
  j["steps"] = steps;
  ojson meta;
  meta["target"] = s.target;
  meta["fidelity"] = s.fidelity ? ojson(round12(*s.fidelity)) : ojson(nullptr);
  meta["duration_s"] = s.duration_s ? ojson(round12(*s.duration_s)) : ojson(nullptr);
  meta["semantics"] = to_string(s.semantics);
  meta["initial"] = s.initial;
  if (!s.drive_freqs.empty()) {
    ojson f = ojson::array();
    for (const auto& v : s.drive_freqs) f.push_back(v ? ojson(round12(*v)) : ojson(nullptr));
    meta["drive_freqs_radps"] = f;
  }
  j["meta"] = meta;
  return j.dump(2) + "\n";
}

PulseSchedule schedule_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("schedule JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != 1) throw ConfigError("unsupported schedule version");
    PulseSchedule s;
    s.osc_cutoffs = j.at("space").at("osc_cutoffs").get<std::vector<int>>();
    TruncatedSpace check(s.osc_cutoffs);
    if (j.contains("budget") && !j["budget"].is_null()) {
      CouplingBudget b;
      b.omega = j["budget"].at("omega_radps").get<double>();
      for (auto& [k, v] : j["budget"].at("g_radps").items()) b.g[std::stoi(k)] = v.get<double>();
      b.validate();
      s.budget = b;
    }
    for (const auto& o : j.at("steps")) {
      PulseStep st;
      std::string kind = o.at("kind").get<std::string>();
      st.area = o.at("area").get<double>();
      st.phase = o.at("phase").get<double>();
      if (!std::isfinite(st.area) || !std::isfinite(st.phase)) throw ConfigError("non-finite step value");
      if (kind == "drive") {
        st.kind = StepKind::drive;
        if (o.contains("select") && !o["select"].is_null()) {
          st.select = o["select"].get<std::vector<FockLabel>>();
        }
      } else if (kind == "njc") {
        st.kind = StepKind::njc;
        st.osc = o.at("osc").get<int>() - 1;
        st.order = o.at("order").get<int>();
        if (o.contains("select") && !o["select"].is_null()) throw ConfigError("njc steps carry no selectivity");
        if (st.osc < 0 || st.osc >= static_cast<int>(s.osc_cutoffs.size())) {
          throw ConfigError("njc oscillator index out of range");
        }
      } else {
        throw ConfigError("unknown step kind '" + kind + "'");
      }
      s.steps.push_back(st);
    }
    if (j.contains("meta")) {
      const auto& m = j["meta"];
      if (m.contains("target")) s.target = m["target"].get<std::string>();
      if (m.contains("fidelity") && !m["fidelity"].is_null()) s.fidelity = m["fidelity"].get<double>();
      if (m.contains("duration_s") && !m["duration_s"].is_null()) s.duration_s = m["duration_s"].get<double>();
      if (m.contains("semantics")) s.semantics = parse_semantics(m["semantics"].get<std::string>());
      if (m.contains("initial")) s.initial = m["initial"].get<FockLabel>();
      if (m.contains("drive_freqs_radps")) {
        for (const auto& v : m["drive_freqs_radps"]) {
          s.drive_freqs.push_back(v.is_null() ? std::optional<double>() : v.get<double>());
        }
      }
    }
    if (s.initial.empty()) s.initial.assign(s.osc_cutoffs.size(), 0);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schedule JSON: ") + e.what());
  }
}

PulseSchedule read_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schedule " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return schedule_from_json(ss.str());
}

void write_schedule(const std::string& path, const PulseSchedule& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << to_json(s);
}

}  // namespace bosonic
