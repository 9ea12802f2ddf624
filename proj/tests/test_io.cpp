#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fantone/config.hpp"
#include "fantone/csv_io.hpp"
#include "fantone/error.hpp"

using namespace fantone;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "geometry": {"intake_diameter_d1": 0.165, "fan_diameter_d2": 0.268, "fan_width_b2": 0.053,
               "blade_count_z": 7, "rotation_speed_n": 2800}
})";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fantone_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config takes the defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.geometry.blade_count_z == 7);
  CHECK(c.geometry.bpf() == Approx(326.6667).epsilon(1e-6));
  CHECK(c.source.kind == SourceKind::baseline);
  CHECK(c.source.baseline.jitter_amplitude == 0.0);
  CHECK(c.observers.observers.size() == 2);
  CHECK(c.spectra.psd.n_segments == 3);
  CHECK(c.spectra.psd.window == WindowKind::hann);
  CHECK(c.spectra.psd.overlap == 0.0);
  CHECK(c.spectra.grid_divisor == 4);
}

TEST_CASE("canonical JSON round trip") {
  const RunConfig a = parse_config(kMinimal);
  const std::string once = to_json(a);
  const std::string twice = to_json(parse_config(once));
  CHECK(once == twice);

  for (const char* name : {"baseline.json", "modulated.json"}) {
    const std::string path = std::string(FANTONE_CONFIG_DIR) + "/" + name;
    const std::string canon = to_json(load_config(path));
    CHECK(to_json(parse_config(canon)) == canon);
    // Every value given in the file survives.
    const auto file = nlohmann::json::parse(slurp(path));
    const auto back = nlohmann::json::parse(canon);
    for (const auto& [section, body] : file.items())
      for (const auto& [key, value] : body.items())
        if (!value.is_object()) CHECK(back.at(section).at(key) == value);
  }
}

TEST_CASE("config errors name the key") {
  nlohmann::json doc = nlohmann::json::parse(kMinimal);
  doc["geometry"].erase("blade_count_z");
  CHECK(error_of(doc.dump()).find("geometry.blade_count_z") != std::string::npos);

  doc = nlohmann::json::parse(kMinimal);
  doc["geometry"]["blade_cont_z"] = 7;
  CHECK(error_of(doc.dump()).find("blade_cont_z") != std::string::npos);

  doc = nlohmann::json::parse(kMinimal);
  doc["spectra"]["window"] = 3;
  CHECK(error_of(doc.dump()).find("spectra.window") != std::string::npos);

  doc = nlohmann::json::parse(kMinimal);
  doc["extra"] = {{"a", 1}};
  CHECK(error_of(doc.dump()).find("extra") != std::string::npos);

  doc = nlohmann::json::parse(kMinimal);
  doc["observers"]["microphones"] = {{{"name", "A"}, {"position", {1, 0, 1}}}, {{"name", "A"}, {"position", {2, 0, 1}}}};
  CHECK(error_of(doc.dump()).find("duplicate") != std::string::npos);

  CHECK(!error_of("{ not json").empty());
}

TEST_CASE("seed and overrides parse") {
  nlohmann::json doc = nlohmann::json::parse(kMinimal);
  doc["source"] = {{"kind", "modulated"}, {"baseline", {{"seed", 12}, {"jitter_amplitude", 0.5}}},
                   {"modulation", {{"direction", -1}, {"sharpness", 0}}}};
  const RunConfig c = parse_config(doc.dump());
  CHECK(c.source.kind == SourceKind::modulated);
  CHECK(c.source.baseline.seed == 12);
  CHECK(c.source.modulation.direction == -1);
  CHECK(c.source.modulation.sharpness == 0.0);
}

TEST_CASE("geometry CSV round trip") {
  FanParams p;
  p.chordwise_panels = 3;
  p.spanwise_panels = 2;
  p.azimuthal_panels = 7;
  const SurfaceMesh mesh = build_fan_geometry(p);
  const fs::path path = scratch("geom_rt.csv");
  write_geometry_csv(path.string(), mesh);
  const SurfaceMesh back = read_geometry_csv(path.string());
  REQUIRE(back.size() == mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const Panel &a = mesh.panels[i], &b = back.panels[i];
    CHECK(a.panel_id == b.panel_id);
    CHECK(a.patch == b.patch);
    CHECK(a.blade_index == b.blade_index);
    CHECK(a.side == b.side);
    CHECK(a.center == b.center);
    CHECK(a.normal == b.normal);
    CHECK(a.area == b.area);
    CHECK(a.chord_fraction == b.chord_fraction);
    CHECK(a.span_fraction == b.span_fraction);
  }
  CHECK(back.params.blade_count_z == p.blade_count_z);
  CHECK(back.params.fan_diameter_d2 == p.fan_diameter_d2);
  // Writing again is byte-identical.
  const fs::path again = scratch("geom_rt2.csv");
  write_geometry_csv(again.string(), back);
  CHECK(slurp(path) == slurp(again));
}

TEST_CASE("signal and spectrum CSV round trip") {
  AcousticSignal s;
  s.sample_rate = 1680.0;
  s.t0 = 0.0125;
  s.transient_cut = 0.02;
  for (int i = 0; i < 300; ++i) s.pressure.push_back(std::sin(0.1 * i) * 1e-3 + 1e-12 * i);
  const fs::path sp = scratch("sig_rt.csv");
  write_signal_csv(sp.string(), s, {"M1", {1, 0, 1.07}, Medium{}});
  const AcousticSignal b = read_signal_csv(sp.string());
  CHECK(b.pressure == s.pressure);
  CHECK(b.sample_rate == s.sample_rate);
  CHECK(b.transient_cut == s.transient_cut);
  CHECK(b.t0 == Approx(s.t0).epsilon(1e-9));

  const Spectrum spec = psd(s);
  const fs::path pp = scratch("spec_rt.csv");
  write_spectrum_csv(pp.string(), spec);
  const Spectrum c = read_spectrum_csv(pp.string());
  REQUIRE(c.size() == spec.size());
  CHECK(c.bin_width == spec.bin_width);
  CHECK(c.window == spec.window);
  CHECK(c.segment_length == spec.segment_length);
  for (std::size_t k = 0; k < c.size(); ++k) {
    CHECK(c.frequency[k] == Approx(spec.frequency[k]).epsilon(1e-8));
    CHECK(c.psd[k] == Approx(spec.psd[k]).epsilon(1e-8));
  }
}

TEST_CASE("tone reports") {
  ToneReport r;
  r.threshold_db = 10.0;
  r.tones.push_back({326.6666666666, 71.25, 28, "BPF0"});
  r.tones.push_back({11.6666666666, 30.5, 1, "nf/4"});
  const fs::path c = scratch("tones.csv"), j = scratch("tones.json");
  write_tones_csv(c.string(), r);
  write_tones_json(j.string(), r);
  const std::string csv = slurp(c);
  CHECK(csv.find("freq_hz,spl_db,grid_index,label\n") != std::string::npos);
  CHECK(csv.find("326.666667,71.25,28,BPF0\n") != std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(j));
  REQUIRE(doc.at("tones").size() == 2);
  CHECK(doc["tones"][1]["label"] == "nf/4");
  CHECK(doc["tones"][0]["grid_index"] == 28);
}

TEST_CASE("malformed CSV errors carry file and line") {
  const fs::path p = scratch("bad_signal.csv");
  {
    std::ofstream out(p);
    out << "# sample_rate=100\ntime_s,p_pa\n0,1\n0.01,abc\n";
  }
  try {
    read_signal_csv(p.string());
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("bad_signal.csv:4:") != std::string::npos);
  }
  CHECK_THROWS_AS(read_signal_csv(scratch("does_not_exist.csv").string()), Error);
}
