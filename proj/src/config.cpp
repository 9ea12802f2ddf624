#include "fantone/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "fantone/error.hpp"

namespace fantone {

namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

// View of one JSON object that records which keys were read so leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(ErrorKind::config, path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  template <class T>
  void get(const std::string& key, T& out, bool required = false) {
    seen_.insert(key);
    if (!node_.contains(key)) {
      if (required) fail(ErrorKind::config, "missing required key '" + name(key) + "'");
      return;
    }
    const json& v = node_.at(key);
    if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_integer()) fail(ErrorKind::config, name(key) + ": expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(ErrorKind::config, name(key) + ": expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(ErrorKind::config, name(key) + ": expected a string");
    }
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
        fail(ErrorKind::config, name(key) + ": expected a non-negative integer");
    }
    out = v.get<T>();
  }

  Section child(const std::string& key, const json& empty) {
    seen_.insert(key);
    return Section(node_.contains(key) ? node_.at(key) : empty, name(key));
  }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) ? &node_.at(key) : nullptr;
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!seen_.count(key)) fail(ErrorKind::config, "unknown key '" + name(key) + "'");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

Vec3 parse_vec3(const json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
    fail(ErrorKind::config, name + ": expected [x, y, z]");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

SourceKind source_kind_from_string(const std::string& text) {
  if (text == "baseline") return SourceKind::baseline;
  if (text == "modulated") return SourceKind::modulated;
  if (text == "ingest") return SourceKind::ingest;
  fail(ErrorKind::config, "source.kind: unknown source '" + text + "' (expected baseline, modulated or ingest)");
}

}  // namespace

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::baseline: return "baseline";
    case SourceKind::modulated: return "modulated";
    case SourceKind::ingest: return "ingest";
  }
  return "baseline";
}

PsdOptions RunConfig::psd_options() const {
  PsdOptions o = spectra.psd;
  o.reference_pressure = medium.reference_pressure;
  return o;
}

void RunConfig::validate() const {
  geometry.validate();
  medium.validate();
  source.baseline.validate();
  source.modulation.validate();
  if (!(plan.solver_dt > 0.0) || plan.record_stride < 1 || !(plan.record_duration > 0.0))
    fail(ErrorKind::config, "plan: solver_dt and record_duration must be > 0, record_stride >= 1");
  if (spectra.psd.n_segments < 1) fail(ErrorKind::config, "spectra.n_segments must be >= 1");
  if (!(spectra.psd.overlap >= 0.0 && spectra.psd.overlap < 1.0))
    fail(ErrorKind::config, "spectra.overlap must lie in [0, 1)");
  if (spectra.grid_divisor < 1) fail(ErrorKind::config, "spectra.grid_divisor must be >= 1");
  if (solver.substeps < 1) fail(ErrorKind::config, "solver.substeps must be >= 1");
  if (observers.observers.empty()) fail(ErrorKind::config, "observers.microphones must not be empty");
  std::set<std::string> names;
  for (const Observer& o : observers.observers) {
    if (o.name.empty() || o.name.find_first_of("/\\ ") != std::string::npos)
      fail(ErrorKind::config, "observer name '" + o.name + "' must be non-empty without spaces or slashes");
    if (!names.insert(o.name).second) fail(ErrorKind::config, "duplicate observer name '" + o.name + "'");
  }
}

// Enum lookups report the key they came from.
template <class F>
auto keyed(const std::string& key, F&& lookup) {
  try {
    return lookup();
  } catch (const Error& e) {
    fail(ErrorKind::config, key + ": " + e.what());
  }
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, origin + ": " + e.what());
  }
  const json empty = json::object();
  RunConfig c;
  Section root(doc, "");

  if (!root.has("geometry")) fail(ErrorKind::config, "missing required section 'geometry'");
  Section g = root.child("geometry", empty);
  FanParams& p = c.geometry;
  g.get("intake_diameter_d1", p.intake_diameter_d1, true);
  g.get("fan_diameter_d2", p.fan_diameter_d2, true);
  g.get("fan_width_b2", p.fan_width_b2, true);
  g.get("blade_count_z", p.blade_count_z, true);
  g.get("rotation_speed_n", p.rotation_speed_n, true);
  g.get("gap_width_w", p.gap_width_w);
  std::string sense = to_string(p.rotation_sense);
  g.get("rotation_sense", sense);
  p.rotation_sense = keyed("geometry.rotation_sense", [&] { return rotation_sense_from_string(sense); });
  g.get("blade_inlet_angle", p.blade_inlet_angle);
  g.get("blade_outlet_angle", p.blade_outlet_angle);
  g.get("blade_inlet_height", p.blade_inlet_height);
  g.get("chordwise_panels", p.chordwise_panels);
  g.get("spanwise_panels", p.spanwise_panels);
  g.get("azimuthal_panels", p.azimuthal_panels);
  g.finish();

  Section m = root.child("medium", empty);
  m.get("density", c.medium.density);
  m.get("sound_speed", c.medium.sound_speed);
  m.get("reference_pressure", c.medium.reference_pressure);
  m.finish();

  c.observers = ObserverSetup::defaults(c.geometry);
  Section o = root.child("observers", empty);
  if (const json* mics = o.raw("microphones")) {
    if (!mics->is_array()) fail(ErrorKind::config, "observers.microphones: expected an array");
    c.observers.observers.clear();
    for (std::size_t i = 0; i < mics->size(); ++i) {
      Section mic((*mics)[i], "observers.microphones[" + std::to_string(i) + "]");
      Observer ob;
      mic.get("name", ob.name, true);
      const json* pos = mic.raw("position");
      if (!pos) fail(ErrorKind::config, "missing required key '" + mic.name("position") + "'");
      ob.position = parse_vec3(*pos, mic.name("position"));
      mic.finish();
      c.observers.observers.push_back(ob);
    }
  }
  Section ch = o.child("chamber", empty);
  ch.get("inlet_diameter_d3", c.observers.chamber.inlet_diameter_d3);
  ch.get("outlet_diameter_d4", c.observers.chamber.outlet_diameter_d4);
  ch.get("inlet_distance_h1", c.observers.chamber.inlet_distance_h1);
  ch.get("outlet_distance_h2", c.observers.chamber.outlet_distance_h2);
  ch.finish();
  o.finish();

  Section s = root.child("source", empty);
  std::string kind = to_string(c.source.kind);
  s.get("kind", kind);
  c.source.kind = keyed("source.kind", [&] { return source_kind_from_string(kind); });
  Section b = s.child("baseline", empty);
  BaselineLoadingModel& bl = c.source.baseline;
  b.get("peak_pressure", bl.peak_pressure);
  b.get("pressure_side_le", bl.pressure_side_le);
  b.get("pressure_side_te", bl.pressure_side_te);
  b.get("suction_side_le", bl.suction_side_le);
  b.get("suction_side_te", bl.suction_side_te);
  b.get("spanwise_slope", bl.spanwise_slope);
  b.get("shroud_pressure", bl.shroud_pressure);
  b.get("backplate_pressure", bl.backplate_pressure);
  b.get("jitter_amplitude", bl.jitter_amplitude);
  b.get("seed", bl.seed);
  b.finish();
  Section md = s.child("modulation", empty);
  RecirculationModulation& mod = c.source.modulation;
  md.get("depth", mod.depth);
  md.get("period_multiplier", mod.period_multiplier);
  md.get("direction", mod.direction);
  md.get("q_s", mod.q_s);
  md.get("q_eta", mod.q_eta);
  md.get("phase", mod.phase);
  md.get("sharpness", mod.sharpness);
  md.finish();
  s.finish();

  Section pl = root.child("plan", empty);
  pl.get("solver_dt", c.plan.solver_dt);
  pl.get("record_stride", c.plan.record_stride);
  pl.get("record_duration", c.plan.record_duration);
  pl.finish();

  Section sp = root.child("spectra", empty);
  sp.get("n_segments", c.spectra.psd.n_segments);
  std::string window = to_string(c.spectra.psd.window);
  sp.get("window", window);
  c.spectra.psd.window = keyed("spectra.window", [&] { return parse_window(window); });
  sp.get("overlap", c.spectra.psd.overlap);
  sp.get("segment_length", c.spectra.psd.segment_length);
  sp.get("threshold_db", c.spectra.threshold_db);
  sp.get("grid_divisor", c.spectra.grid_divisor);
  sp.finish();

  Section so = root.child("solver", empty);
  so.get("substeps", c.solver.substeps);
  so.get("transient_cut", c.solver.transient_cut);
  so.finish();

  root.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open config '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path);
}

std::string to_json(const RunConfig& c) {
  ordered doc;
  const FanParams& p = c.geometry;
  doc["geometry"] = {{"intake_diameter_d1", p.intake_diameter_d1},
                     {"fan_diameter_d2", p.fan_diameter_d2},
                     {"fan_width_b2", p.fan_width_b2},
                     {"gap_width_w", p.gap_width_w},
                     {"blade_count_z", p.blade_count_z},
                     {"rotation_speed_n", p.rotation_speed_n},
                     {"rotation_sense", to_string(p.rotation_sense)},
                     {"blade_inlet_angle", p.blade_inlet_angle},
                     {"blade_outlet_angle", p.blade_outlet_angle},
                     {"blade_inlet_height", p.blade_inlet_height},
                     {"chordwise_panels", p.chordwise_panels},
                     {"spanwise_panels", p.spanwise_panels},
                     {"azimuthal_panels", p.azimuthal_panels}};
  doc["medium"] = {{"density", c.medium.density},
                   {"sound_speed", c.medium.sound_speed},
                   {"reference_pressure", c.medium.reference_pressure}};
  ordered mics = ordered::array();
  for (const Observer& o : c.observers.observers)
    mics.push_back({{"name", o.name}, {"position", {o.position.x, o.position.y, o.position.z}}});
  const ChamberDimensions& ch = c.observers.chamber;
  doc["observers"] = {{"microphones", mics},
                      {"chamber",
                       {{"inlet_diameter_d3", ch.inlet_diameter_d3},
                        {"outlet_diameter_d4", ch.outlet_diameter_d4},
                        {"inlet_distance_h1", ch.inlet_distance_h1},
                        {"outlet_distance_h2", ch.outlet_distance_h2}}}};
  const BaselineLoadingModel& bl = c.source.baseline;
  const RecirculationModulation& mod = c.source.modulation;
  doc["source"] = {{"kind", to_string(c.source.kind)},
                   {"baseline",
                    {{"peak_pressure", bl.peak_pressure},
                     {"pressure_side_le", bl.pressure_side_le},
                     {"pressure_side_te", bl.pressure_side_te},
                     {"suction_side_le", bl.suction_side_le},
                     {"suction_side_te", bl.suction_side_te},
                     {"spanwise_slope", bl.spanwise_slope},
                     {"shroud_pressure", bl.shroud_pressure},
                     {"backplate_pressure", bl.backplate_pressure},
                     {"jitter_amplitude", bl.jitter_amplitude},
                     {"seed", bl.seed}}},
                   {"modulation",
                    {{"depth", mod.depth},
                     {"period_multiplier", mod.period_multiplier},
                     {"direction", mod.direction},
                     {"q_s", mod.q_s},
                     {"q_eta", mod.q_eta},
                     {"phase", mod.phase},
                     {"sharpness", mod.sharpness}}}};
  doc["plan"] = {{"solver_dt", c.plan.solver_dt},
                 {"record_stride", c.plan.record_stride},
                 {"record_duration", c.plan.record_duration}};
  doc["spectra"] = {{"n_segments", c.spectra.psd.n_segments},
                    {"window", to_string(c.spectra.psd.window)},
                    {"overlap", c.spectra.psd.overlap},
                    {"segment_length", c.spectra.psd.segment_length},
                    {"threshold_db", c.spectra.threshold_db},
                    {"grid_divisor", c.spectra.grid_divisor}};
  doc["solver"] = {{"substeps", c.solver.substeps}, {"transient_cut", c.solver.transient_cut}};
  return doc.dump(2) + "\n";
}

}  // namespace fantone
