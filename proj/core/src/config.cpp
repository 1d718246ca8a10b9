#include "vposc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "vposc/errors.hpp"

namespace vposc {

using nlohmann::json;

namespace {

// Typed access to a JSON object that rejects keys nobody asked for.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InvalidArgument(path_ + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    seen_.insert(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!j_.at(key).is_number()) throw InvalidArgument("");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        const json& v = j_.at(key);
        if (!v.is_number_integer() && !v.is_number_unsigned()) throw InvalidArgument("");
      }
      out = j_.at(key).get<T>();
    } catch (const std::exception&) {
      throw InvalidArgument(path_ + "." + key + " has the wrong type");
    }
  }

  Obj child(const std::string& key) {
    seen_.insert(key);
    return Obj(j_.at(key), path_ + "." + key);
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.contains(item.key())) {
        throw InvalidArgument("unknown key " + path_ + "." + item.key());
      }
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class E, class F>
E enum_field(Obj& o, const std::string& key, E fallback, F&& from_string) {
  if (!o.has(key)) return fallback;
  std::string name;
  o.get(key, name);
  try {
    return from_string(name);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(o.path() + "." + key + ": " + e.what());
  }
}

PushScheme scheme_from_string(std::string_view s) {
  if (s == "symplectic_euler") return PushScheme::SymplecticEuler;
  if (s == "forward_euler") return PushScheme::ForwardEuler;
  throw InvalidArgument("unknown scheme '" + std::string(s) + "'");
}

std::string_view to_string(PushScheme s) {
  return s == PushScheme::SymplecticEuler ? "symplectic_euler" : "forward_euler";
}

PushFrame frame_from_string(std::string_view s) {
  if (s == "planar") return PushFrame::Planar;
  if (s == "hybrid") return PushFrame::Hybrid;
  throw InvalidArgument("unknown frame '" + std::string(s) + "'");
}

std::string_view to_string(PushFrame f) { return f == PushFrame::Planar ? "planar" : "hybrid"; }

KurthTypeMode kurth_mode_from_string(std::string_view s) {
  if (s == "coordinate_update") return KurthTypeMode::CoordinateUpdate;
  if (s == "resample") return KurthTypeMode::Resample;
  throw InvalidArgument("unknown kurth_mode '" + std::string(s) + "'");
}

std::string_view to_string(KurthTypeMode m) {
  return m == KurthTypeMode::CoordinateUpdate ? "coordinate_update" : "resample";
}

void read_range(Obj& o, const std::string& key, double& lo, double& hi) {
  if (!o.has(key)) return;
  const json& v = o.raw(key);
  if (v.is_number()) {
    lo = hi = v.get<double>();
  } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    lo = v[0].get<double>();
    hi = v[1].get<double>();
  } else {
    throw InvalidArgument(o.path() + "." + key + " must be a number or [lo, hi]");
  }
}

json range_json(double lo, double hi) {
  if (lo == hi) return lo;
  return json::array({lo, hi});
}

RunConfig run_from_json(const json& j, const std::string& path, bool check_schema) {
  Obj root(j, path);
  if (check_schema) {
    std::string schema;
    root.get("schema", schema);
    if (schema != kRunSchema) {
      throw InvalidArgument(path + ".schema must be '" + std::string(kRunSchema) + "'");
    }
  }
  RunConfig c;
  root.get("id", c.id);

  if (root.has("steady_state")) {
    Obj s = root.child("steady_state");
    SteadyStateBlock b;
    b.family = enum_field(s, "family", b.family, family_from_string);
    s.get("k", b.k);
    s.get("l", b.l);
    s.get("L0", b.L0);
    s.get("y0", b.y0);
    s.get("cells", b.cells);
    s.get("r_max", b.r_max);
    s.get("max_doublings", b.max_doublings);
    s.finish();
    c.steady_state = b;
  }
  if (root.has("kurth")) {
    Obj k = root.child("kurth");
    KurthBlock b;
    k.get("eps", b.eps);
    k.finish();
    c.kurth = b;
  }
  if (root.has("perturbation")) {
    Obj p = root.child("perturbation");
    PerturbationSpec& s = c.perturbation;
    s.kind = enum_field(p, "kind", s.kind, perturbation_kind_from_string);
    p.get("eps", s.eps);
    p.get("t_pert", s.t_pert);
    s.kurth_mode = enum_field(p, "kurth_mode", s.kurth_mode, kurth_mode_from_string);
    if (p.has("shift")) {
      Obj sh = p.child("shift");
      sh.get("dr", s.shift.dr);
      sh.get("dw", s.shift.dw);
      sh.get("dL", s.shift.dL);
      sh.finish();
    }
    if (p.has("external_field")) {
      Obj ef = p.child("external_field");
      ef.get("r", s.external_field.r);
      ef.get("value", s.external_field.value);
      ef.finish();
    }
    p.finish();
  }
  if (root.has("engine")) {
    Obj e = root.child("engine");
    SimulationConfig& s = c.engine;
    e.get("dt", s.dt);
    e.get("t_end", s.t_end);
    e.get("particles", s.particles);
    e.get("grid_cells", s.grid_cells);
    e.get("origin_switch_radius", s.origin_switch_radius);
    e.get("output_stride", s.output_stride);
    e.get("seed", s.seed);
    e.get("workers", s.workers);
    s.scheme = enum_field(e, "scheme", s.scheme, scheme_from_string);
    s.frame = enum_field(e, "frame", s.frame, frame_from_string);
    e.get("jitter", s.jitter);
    e.get("snapshots", s.snapshots);
    e.get("histograms", s.histograms);
    if (e.has("hist_bins")) {
      std::vector<int> bins;
      e.get("hist_bins", bins);
      if (bins.size() != 3) throw InvalidArgument(path + ".engine.hist_bins must be [nr, nw, nL]");
      s.hist_nr = bins[0];
      s.hist_nw = bins[1];
      s.hist_nL = bins[2];
    }
    e.finish();
  }
  if (root.has("outputs")) {
    Obj o = root.child("outputs");
    o.get("dir", c.outputs.dir);
    o.get("name", c.outputs.name);
    o.get("series", c.outputs.series);
    o.get("final_snapshot", c.outputs.final_snapshot);
    o.get("snapshots", c.outputs.snapshots);
    o.finish();
  }
  if (root.has("analysis")) {
    Obj a = root.child("analysis");
    AnalysisBlock& b = c.analysis;
    b.observable = enum_field(a, "observable", b.observable, observable_from_string);
    a.get("window_start", b.window_start);
    if (a.has("window_end")) {
      if (a.raw("window_end").is_null()) {
        b.window_end = std::numeric_limits<double>::infinity();
      } else {
        a.get("window_end", b.window_end);
      }
    }
    a.get("noise_floor", b.noise_floor);
    a.get("min_cycles", b.min_cycles);
    a.get("damping", b.damping);
    a.finish();
  }
  if (root.has("units")) {
    Obj u = root.child("units");
    UnitsBlock b;
    u.get("period", b.period);
    read_range(u, "R_kpc", b.R_kpc_lo, b.R_kpc_hi);
    read_range(u, "M_sun", b.M_sun_lo, b.M_sun_hi);
    u.get("scan_points", b.scan_points);
    u.get("target_years", b.target_years);
    u.finish();
    c.units = b;
  }
  if (!check_schema) {
    // A sweep base may carry its own run schema id.
    std::string ignored;
    root.get("schema", ignored);
  }
  root.finish();
  return c;
}

json run_to_json(const RunConfig& c, bool with_schema) {
  json j;
  if (with_schema) j["schema"] = kRunSchema;
  j["id"] = c.id;
  if (c.steady_state) {
    const auto& b = *c.steady_state;
    j["steady_state"] = {{"family", to_string(b.family)}, {"k", b.k}, {"l", b.l},
                         {"L0", b.L0},  {"y0", b.y0},  {"cells", b.cells},
                         {"r_max", b.r_max}, {"max_doublings", b.max_doublings}};
  }
  if (c.kurth) j["kurth"] = {{"eps", c.kurth->eps}};
  const PerturbationSpec& p = c.perturbation;
  j["perturbation"] = {{"kind", to_string(p.kind)},
                       {"eps", p.eps},
                       {"t_pert", p.t_pert},
                       {"kurth_mode", to_string(p.kurth_mode)},
                       {"shift", {{"dr", p.shift.dr}, {"dw", p.shift.dw}, {"dL", p.shift.dL}}}};
  if (!p.external_field.empty()) {
    j["perturbation"]["external_field"] = {{"r", p.external_field.r},
                                           {"value", p.external_field.value}};
  }
  const SimulationConfig& e = c.engine;
  j["engine"] = {{"dt", e.dt},
                 {"t_end", e.t_end},
                 {"particles", e.particles},
                 {"grid_cells", e.grid_cells},
                 {"origin_switch_radius", e.origin_switch_radius},
                 {"output_stride", e.output_stride},
                 {"seed", e.seed},
                 {"workers", e.workers},
                 {"scheme", to_string(e.scheme)},
                 {"frame", to_string(e.frame)},
                 {"jitter", e.jitter},
                 {"snapshots", e.snapshots},
                 {"histograms", e.histograms},
                 {"hist_bins", {e.hist_nr, e.hist_nw, e.hist_nL}}};
  j["outputs"] = {{"dir", c.outputs.dir},
                  {"name", c.outputs.name},
                  {"series", c.outputs.series},
                  {"final_snapshot", c.outputs.final_snapshot},
                  {"snapshots", c.outputs.snapshots}};
  const AnalysisBlock& a = c.analysis;
  j["analysis"] = {{"observable", to_string(a.observable)},
                   {"window_start", a.window_start},
                   {"window_end", std::isinf(a.window_end) ? json(nullptr) : json(a.window_end)},
                   {"noise_floor", a.noise_floor},
                   {"min_cycles", a.min_cycles},
                   {"damping", a.damping}};
  if (c.units) {
    const UnitsBlock& u = *c.units;
    j["units"] = {{"period", u.period},
                  {"R_kpc", range_json(u.R_kpc_lo, u.R_kpc_hi)},
                  {"M_sun", range_json(u.M_sun_lo, u.M_sun_hi)},
                  {"scan_points", u.scan_points},
                  {"target_years", u.target_years}};
  }
  return j;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_string(Observable o) {
  return o == Observable::KineticEnergy ? "e_kin" : "e_pot";
}

Observable observable_from_string(std::string_view s) {
  if (s == "e_kin") return Observable::KineticEnergy;
  if (s == "e_pot") return Observable::PotentialEnergy;
  throw InvalidArgument("unknown observable '" + std::string(s) + "'");
}

void RunConfig::validate() const {
  if (steady_state.has_value() == kurth.has_value()) {
    throw InvalidArgument("config needs exactly one of steady_state or kurth");
  }
  if (id.empty()) throw InvalidArgument("config id must be nonempty");
  if (steady_state) {
    const auto& b = *steady_state;
    build_ansatz(b.family, b.k, b.l, b.L0);
    if (!(b.y0 > 0.0)) throw InvalidArgument("steady_state.y0 must be positive");
    if (b.cells < 16) throw InvalidArgument("steady_state.cells must be at least 16");
    if (!(b.r_max > 0.0)) throw InvalidArgument("steady_state.r_max must be positive");
    if (b.max_doublings < 0) throw InvalidArgument("steady_state.max_doublings must be non-negative");
  }
  if (kurth && !(std::abs(kurth->eps) < 1.0)) {
    throw InvalidArgument("kurth.eps must satisfy |eps| < 1");
  }
  engine.validate();
  perturbation.validate();
  if (analysis.noise_floor < 0.0) throw InvalidArgument("analysis.noise_floor must be >= 0");
  if (analysis.min_cycles < 2) throw InvalidArgument("analysis.min_cycles must be >= 2");
  if (!(analysis.window_end > analysis.window_start)) {
    throw InvalidArgument("analysis window is empty");
  }
  if (engine.histograms && engine.snapshots < 1) {
    throw InvalidArgument("engine.histograms requires engine.snapshots >= 1");
  }
  if (units) {
    const auto& u = *units;
    if (!(u.R_kpc_lo > 0.0 && u.R_kpc_hi >= u.R_kpc_lo && u.M_sun_lo > 0.0 &&
          u.M_sun_hi >= u.M_sun_lo)) {
      throw InvalidArgument("units ranges must be positive and ordered");
    }
    if (u.scan_points < 2) throw InvalidArgument("units.scan_points must be >= 2");
  }
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Y0: return "y0";
    case SweepParam::K: return "k";
    case SweepParam::L: return "l";
    case SweepParam::L0: return "L0";
    case SweepParam::KurthEps: return "kurth.eps";
    case SweepParam::PerturbationEps: return "perturbation.eps";
    case SweepParam::Particles: return "particles";
    case SweepParam::ShiftDr: return "shift.dr";
    case SweepParam::ShiftDw: return "shift.dw";
    case SweepParam::ShiftDL: return "shift.dL";
  }
  return "unknown";
}

SweepParam sweep_param_from_string(std::string_view s) {
  for (auto p : {SweepParam::Y0, SweepParam::K, SweepParam::L, SweepParam::L0,
                 SweepParam::KurthEps, SweepParam::PerturbationEps, SweepParam::Particles,
                 SweepParam::ShiftDr, SweepParam::ShiftDw, SweepParam::ShiftDL}) {
    if (to_string(p) == s) return p;
  }
  throw InvalidArgument("unknown sweep parameter '" + std::string(s) + "'");
}

RunConfig SweepConfig::row(std::size_t index) const {
  if (index >= values.size()) throw InvalidArgument("sweep row out of range");
  RunConfig c = base;
  const double v = values[index];
  const bool steady_axis = param == SweepParam::Y0 || param == SweepParam::K ||
                           param == SweepParam::L || param == SweepParam::L0;
  if (steady_axis && !c.steady_state) {
    throw InvalidArgument("sweep over " + std::string(to_string(param)) + " needs a steady_state base");
  }
  switch (param) {
    case SweepParam::Y0: c.steady_state->y0 = v; break;
    case SweepParam::K: c.steady_state->k = v; break;
    case SweepParam::L: c.steady_state->l = v; break;
    case SweepParam::L0: c.steady_state->L0 = v; break;
    case SweepParam::KurthEps:
      if (!c.kurth) throw InvalidArgument("sweep over kurth.eps needs a kurth base");
      c.kurth->eps = v;
      break;
    case SweepParam::PerturbationEps: c.perturbation.eps = v; break;
    case SweepParam::Particles:
      if (!(v >= 1.0)) throw InvalidArgument("sweep particle count must be >= 1");
      c.engine.particles = static_cast<std::size_t>(std::llround(v));
      break;
    case SweepParam::ShiftDr: c.perturbation.shift.dr = v; break;
    case SweepParam::ShiftDw: c.perturbation.shift.dw = v; break;
    case SweepParam::ShiftDL: c.perturbation.shift.dL = v; break;
  }
  c.id = base.id + "_" + std::to_string(index);
  if (!c.outputs.name.empty()) c.outputs.name += "_" + std::to_string(index);
  return c;
}

void SweepConfig::validate() const {
  if (values.empty()) throw InvalidArgument("sweep axis must be nonempty");
  if (parallel_runs < 1) throw InvalidArgument("sweep parallel_runs must be >= 1");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw InvalidArgument("sweep values must be finite");
    row(i).validate();
  }
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig c = run_from_json(parse_json(text), "config", true);
  c.validate();
  return c;
}

SweepConfig parse_sweep_config(std::string_view text) {
  const json j = parse_json(text);
  Obj root(j, "sweep");
  std::string schema;
  root.get("schema", schema);
  if (schema != kSweepSchema) {
    throw InvalidArgument("sweep.schema must be '" + std::string(kSweepSchema) + "'");
  }
  SweepConfig s;
  if (!root.has("base")) throw InvalidArgument("sweep.base is required");
  s.base = run_from_json(root.raw("base"), "sweep.base", false);
  if (!root.has("axis")) throw InvalidArgument("sweep.axis is required");
  Obj axis = root.child("axis");
  s.param = enum_field(axis, "param", s.param, sweep_param_from_string);
  axis.get("values", s.values);
  axis.finish();
  root.get("er_constant", s.er_constant);
  root.get("parallel_runs", s.parallel_runs);
  root.finish();
  s.validate();
  return s;
}

std::string serialize(const RunConfig& c) { return run_to_json(c, true).dump(2) + "\n"; }

std::string serialize(const SweepConfig& s) {
  json j;
  j["schema"] = kSweepSchema;
  j["base"] = run_to_json(s.base, false);
  j["axis"] = {{"param", to_string(s.param)}, {"values", s.values}};
  j["er_constant"] = s.er_constant;
  j["parallel_runs"] = s.parallel_runs;
  return j.dump(2) + "\n";
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path));
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  return parse_sweep_config(read_file(path));
}

std::string config_schema(const std::filesystem::path& path) {
  const json j = parse_json(read_file(path));
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string()) {
    throw InvalidArgument(path.string() + " has no schema id");
  }
  return j["schema"].get<std::string>();
}

}  // namespace vposc
