#include "fantone/csv_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fantone/error.hpp"

namespace fantone {

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) fail(ErrorKind::io, "error while writing '" + path + "'");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Line-oriented reader that collects "# key=value" comments and reports
// errors with file and line.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) fail(ErrorKind::io, "cannot open '" + path + "'");
  }

  // Next non-comment, non-empty line split on commas; false at end of file.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == '#') {
        const std::size_t eq = line.find('=');
        if (eq != std::string::npos) {
          std::size_t k = 1;
          while (k < eq && line[k] == ' ') ++k;
          meta_[line.substr(k, eq - k)] = line.substr(eq + 1);
        }
        continue;
      }
      fields = split(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void error(const std::string& message) const { error_at(line_, message); }
  [[noreturn]] void error_at(int line, const std::string& message) const {
    fail(ErrorKind::parse, path_ + ":" + std::to_string(line) + ": " + message);
  }

  double number(const std::string& text) const {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) error("invalid number '" + text + "'");
    return v;
  }

  int integer(const std::string& text) const {
    int v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) error("invalid integer '" + text + "'");
    return v;
  }

  void expect_header(const std::vector<std::string>& want) {
    std::vector<std::string> got;
    if (!next(got)) error("missing header line");
    if (got != want) {
      std::string joined;
      for (const auto& w : want) joined += (joined.empty() ? "" : ",") + w;
      error("expected header '" + joined + "'");
    }
  }

  const std::map<std::string, std::string>& meta() const { return meta_; }
  const std::string* find(const std::string& key) const {
    auto it = meta_.find(key);
    return it == meta_.end() ? nullptr : &it->second;
  }
  int line() const { return line_; }

 private:
  std::string path_;
  std::ifstream in_;
  int line_ = 0;
  std::map<std::string, std::string> meta_;
};

std::string optional_field(const std::optional<double>& v) { return v ? format_exact(*v) : "-"; }

// Sample rate from a "# sample_rate=" comment, else from the time column.
// `lines` holds the file line of each sample for error reporting.
double uniform_rate(const CsvReader& reader, const std::vector<double>& times, const std::vector<int>& lines) {
  if (times.size() < 2) reader.error("need at least two samples");
  double fs = (times.size() - 1) / (times.back() - times.front());
  if (const std::string* text = reader.find("sample_rate")) fs = reader.number(*text);
  if (!(fs > 0.0) || !std::isfinite(fs)) reader.error("time column is not increasing");
  const double tol = 1e-6 / fs;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - (times.front() + static_cast<double>(i) / fs)) > tol)
      reader.error_at(lines[i], "time column is not uniformly spaced at sample " + std::to_string(i));
  return fs;
}

}  // namespace

std::string format_exact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_geometry_csv(const std::string& path, const SurfaceMesh& mesh) {
  const FanParams& p = mesh.params;
  std::ostringstream os;
  os << "# intake_diameter_d1=" << format_exact(p.intake_diameter_d1) << '\n'
     << "# fan_diameter_d2=" << format_exact(p.fan_diameter_d2) << '\n'
     << "# fan_width_b2=" << format_exact(p.fan_width_b2) << '\n'
     << "# gap_width_w=" << format_exact(p.gap_width_w) << '\n'
     << "# blade_count_z=" << p.blade_count_z << '\n'
     << "# rotation_speed_n=" << format_exact(p.rotation_speed_n) << '\n'
     << "# rotation_sense=" << to_string(p.rotation_sense) << '\n'
     << "# blade_inlet_angle=" << format_exact(p.blade_inlet_angle) << '\n'
     << "# blade_outlet_angle=" << format_exact(p.blade_outlet_angle) << '\n'
     << "# blade_inlet_height=" << format_exact(p.blade_inlet_height) << '\n'
     << "# chordwise_panels=" << p.chordwise_panels << '\n'
     << "# spanwise_panels=" << p.spanwise_panels << '\n'
     << "# azimuthal_panels=" << p.azimuthal_panels << '\n'
     << "panel_id,patch,blade_index,cx,cy,cz,nx,ny,nz,area,s,eta\n";
  for (const Panel& q : mesh.panels) {
    os << q.panel_id << ',' << to_string(q.patch) << ','
       << (q.blade_index >= 0 ? std::to_string(q.blade_index) : "-");
    for (double v : {q.center.x, q.center.y, q.center.z, q.normal.x, q.normal.y, q.normal.z, q.area})
      os << ',' << format_exact(v);
    os << ',' << optional_field(q.chord_fraction) << ',' << optional_field(q.span_fraction) << '\n';
  }
  write_file(path, os.str());
}

SurfaceMesh read_geometry_csv(const std::string& path) {
  CsvReader reader(path);
  reader.expect_header({"panel_id", "patch", "blade_index", "cx", "cy", "cz", "nx", "ny", "nz", "area", "s", "eta"});

  SurfaceMesh mesh;
  FanParams& p = mesh.params;
  const std::map<std::string, double*> reals{
      {"intake_diameter_d1", &p.intake_diameter_d1}, {"fan_diameter_d2", &p.fan_diameter_d2},
      {"fan_width_b2", &p.fan_width_b2},             {"gap_width_w", &p.gap_width_w},
      {"rotation_speed_n", &p.rotation_speed_n},     {"blade_inlet_angle", &p.blade_inlet_angle},
      {"blade_outlet_angle", &p.blade_outlet_angle}, {"blade_inlet_height", &p.blade_inlet_height}};
  const std::map<std::string, int*> ints{{"blade_count_z", &p.blade_count_z},
                                         {"chordwise_panels", &p.chordwise_panels},
                                         {"spanwise_panels", &p.spanwise_panels},
                                         {"azimuthal_panels", &p.azimuthal_panels}};
  for (const auto& [key, value] : reader.meta()) {
    if (auto r = reals.find(key); r != reals.end())
      *r->second = reader.number(value);
    else if (auto i = ints.find(key); i != ints.end())
      *i->second = reader.integer(value);
    else if (key == "rotation_sense")
      p.rotation_sense = rotation_sense_from_string(value);
    else
      reader.error("unknown geometry parameter '" + key + "'");
  }

  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 12) reader.error("expected 12 fields, found " + std::to_string(f.size()));
    Panel q;
    q.panel_id = reader.integer(f[0]);
    try {
      q.patch = patch_from_string(f[1]);
    } catch (const Error& e) {
      reader.error(e.what());
    }
    q.blade_index = f[2] == "-" ? -1 : reader.integer(f[2]);
    q.center = {reader.number(f[3]), reader.number(f[4]), reader.number(f[5])};
    q.normal = {reader.number(f[6]), reader.number(f[7]), reader.number(f[8])};
    q.area = reader.number(f[9]);
    if (f[10] != "-") q.chord_fraction = reader.number(f[10]);
    if (f[11] != "-") q.span_fraction = reader.number(f[11]);
    if (q.patch == Patch::blade && (q.blade_index < 0 || !q.chord_fraction || !q.span_fraction))
      reader.error("blade panel needs blade_index, s and eta");
    mesh.panels.push_back(q);
  }
  if (mesh.panels.empty()) reader.error("geometry has no panels");
  try {
    mesh.validate();
  } catch (const Error& e) {
    fail(ErrorKind::parse, path + ": " + e.what());
  }
  assign_blade_sides(mesh);
  return mesh;
}

void write_pressure_csv(const std::string& path, const SurfacePressureField& field, const SurfaceMesh& mesh) {
  field.check_bound_to(mesh);
  std::ostringstream os;
  os << "# sample_rate=" << format_exact(field.sample_rate()) << '\n' << "time_s";
  for (const Panel& q : mesh.panels) os << ",p_" << q.panel_id;
  os << '\n';
  for (std::size_t i = 0; i < field.samples(); ++i) {
    os << format_exact(field.time(i));
    for (std::size_t j = 0; j < field.panels(); ++j) os << ',' << format_exact(field.at(i, j));
    os << '\n';
  }
  write_file(path, os.str());
}

SurfacePressureField read_pressure_csv(const std::string& path, const SurfaceMesh& mesh) {
  CsvReader reader(path);
  std::vector<std::string> want{"time_s"};
  for (const Panel& q : mesh.panels) want.push_back("p_" + std::to_string(q.panel_id));
  reader.expect_header(want);

  std::vector<double> times, values;
  std::vector<int> lines;
  std::vector<std::string> f;
  while (reader.next(f)) {
    lines.push_back(reader.line());
    if (f.size() != want.size())
      reader.error("expected " + std::to_string(want.size()) + " fields, found " + std::to_string(f.size()));
    times.push_back(reader.number(f[0]));
    for (std::size_t j = 1; j < f.size(); ++j) values.push_back(reader.number(f[j]));
  }
  const double fs = uniform_rate(reader, times, lines);
  SurfacePressureField field(fs, times.front(), times.size(), mesh.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t j = 0; j < mesh.size(); ++j) field.at(i, j) = values[i * mesh.size() + j];
  return field;
}

void write_signal_csv(const std::string& path, const AcousticSignal& signal, const SignalMetadata& meta) {
  std::ostringstream os;
  os << "# observer=" << meta.observer << '\n'
     << "# observer_position_m=" << format_g9(meta.position.x) << ' ' << format_g9(meta.position.y) << ' '
     << format_g9(meta.position.z) << '\n'
     << "# density=" << format_g9(meta.medium.density) << '\n'
     << "# sound_speed=" << format_g9(meta.medium.sound_speed) << '\n'
     << "# reference_pressure=" << format_g9(meta.medium.reference_pressure) << '\n'
     << "# sample_rate=" << format_exact(signal.sample_rate) << '\n'
     << "# transient_cut_s=" << format_exact(signal.transient_cut) << '\n'
     << "time_s,p_pa\n";
  for (std::size_t i = 0; i < signal.pressure.size(); ++i)
    os << format_g9(signal.time(i)) << ',' << format_exact(signal.pressure[i]) << '\n';
  write_file(path, os.str());
}

AcousticSignal read_signal_csv(const std::string& path) {
  CsvReader reader(path);
  reader.expect_header({"time_s", "p_pa"});
  std::vector<double> times;
  std::vector<int> lines;
  AcousticSignal sig;
  std::vector<std::string> f;
  while (reader.next(f)) {
    lines.push_back(reader.line());
    if (f.size() != 2) reader.error("expected 2 fields, found " + std::to_string(f.size()));
    times.push_back(reader.number(f[0]));
    sig.pressure.push_back(reader.number(f[1]));
  }
  sig.sample_rate = uniform_rate(reader, times, lines);
  sig.t0 = times.front();
  if (const std::string* cut = reader.find("transient_cut_s")) sig.transient_cut = reader.number(*cut);
  return sig;
}

void write_spectrum_csv(const std::string& path, const Spectrum& s) {
  std::ostringstream os;
  os << "# window=" << to_string(s.window) << '\n'
     << "# n_segments=" << s.n_segments << '\n'
     << "# overlap=" << format_g9(s.overlap) << '\n'
     << "# segment_length=" << s.segment_length << '\n'
     << "# bin_width_hz=" << format_exact(s.bin_width) << '\n'
     << "# reference_pressure=" << format_g9(s.reference_pressure) << '\n'
     << "# spl_db=10*log10(psd*bin_width/reference_pressure^2), floored at -400\n"
     << "freq_hz,psd_pa2_per_hz,spl_db\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    os << format_g9(s.frequency[i]) << ',' << format_g9(s.psd[i]) << ',' << format_g9(s.spl[i]) << '\n';
  write_file(path, os.str());
}

Spectrum read_spectrum_csv(const std::string& path) {
  CsvReader reader(path);
  reader.expect_header({"freq_hz", "psd_pa2_per_hz", "spl_db"});
  Spectrum s;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 3) reader.error("expected 3 fields, found " + std::to_string(f.size()));
    s.frequency.push_back(reader.number(f[0]));
    s.psd.push_back(reader.number(f[1]));
    s.spl.push_back(reader.number(f[2]));
  }
  if (s.frequency.size() < 2) reader.error("spectrum needs at least two bins");
  s.bin_width = s.frequency[1] - s.frequency[0];
  if (const std::string* v = reader.find("bin_width_hz")) s.bin_width = reader.number(*v);
  if (const std::string* v = reader.find("window")) {
    try {
      s.window = parse_window(*v);
    } catch (const Error& e) {
      reader.error(e.what());
    }
  }
  if (const std::string* v = reader.find("n_segments")) s.n_segments = reader.integer(*v);
  if (const std::string* v = reader.find("overlap")) s.overlap = reader.number(*v);
  if (const std::string* v = reader.find("segment_length")) s.segment_length = reader.integer(*v);
  if (const std::string* v = reader.find("reference_pressure")) s.reference_pressure = reader.number(*v);
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorKind::parse, path + ": " + e.what());
  }
  return s;
}

void write_tones_csv(const std::string& path, const ToneReport& report) {
  std::ostringstream os;
  os << "# threshold_db=" << format_g9(report.threshold_db) << '\n' << "freq_hz,spl_db,grid_index,label\n";
  for (const Tone& t : report.tones)
    os << format_g9(t.frequency) << ',' << format_g9(t.spl) << ',' << t.grid_index << ',' << t.label << '\n';
  write_file(path, os.str());
}

void write_tones_json(const std::string& path, const ToneReport& report) {
  nlohmann::ordered_json doc;
  doc["tones"] = nlohmann::ordered_json::array();
  for (const Tone& t : report.tones)
    doc["tones"].push_back(
        {{"freq_hz", t.frequency}, {"spl_db", t.spl}, {"grid_index", t.grid_index}, {"label", t.label}});
  doc["threshold_db"] = report.threshold_db;
  write_file(path, doc.dump(2) + "\n");
}

void write_band_map_csv(const std::string& path, const SurfaceBandMap& map) {
  std::ostringstream os;
  os << "# band_center_hz=" << format_g9(map.center) << '\n'
     << "# band_width_hz=" << format_g9(map.width) << '\n'
     << "panel_id,spl_db\n";
  for (std::size_t j = 0; j < map.size(); ++j) os << map.panel_id[j] << ',' << format_g9(map.spl[j]) << '\n';
  write_file(path, os.str());
}

}  // namespace fantone
