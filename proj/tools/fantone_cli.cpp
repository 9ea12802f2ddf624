// Command-line front end. Every command goes through the C API in
// libfantone; the only work done here is argument handling, config
// overrides and file naming.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fantone/fantone.h"

namespace {

// Exit codes: 0 ok, 1 usage or config, 2 validation failure, 3 I/O or parse.
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code(ft_status s) {
  switch (s) {
    case FT_ERR_IO:
    case FT_ERR_PARSE: return kExitIo;
    default: return kExitUsage;
  }
}

void check(ft_status s, const std::string& context = {}) {
  if (s == FT_OK) return;
  throw Failure{exit_code(s), context.empty() ? ft_last_error() : context + ": " + ft_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Config = std::unique_ptr<ft_config, Deleter<ft_config, ft_config_free>>;
using Mesh = std::unique_ptr<ft_mesh, Deleter<ft_mesh, ft_mesh_free>>;
using Field = std::unique_ptr<ft_field, Deleter<ft_field, ft_field_free>>;
using Signal = std::unique_ptr<ft_signal, Deleter<ft_signal, ft_signal_free>>;
using Spectrum = std::unique_ptr<ft_spectrum, Deleter<ft_spectrum, ft_spectrum_free>>;
using Tones = std::unique_ptr<ft_tones, Deleter<ft_tones, ft_tones_free>>;
using BandMap = std::unique_ptr<ft_band_map, Deleter<ft_band_map, ft_band_map_free>>;

struct Globals {
  std::string config;
  std::string out;
  unsigned threads = 0;
  bool quiet = false;
  std::vector<std::string> overrides;  // section.key=value
  std::int64_t seed = -1;
};

// "a.b.c=value": value is parsed as JSON when possible, otherwise kept as a
// string, so `--set spectra.window=rectangular` works without quoting.
void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw Failure{kExitUsage, "--set expects key=value, got '" + assignment + "'"};
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  nlohmann::json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) path.push_back(part);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->is_object()) throw Failure{kExitUsage, "--set " + key + ": '" + path[i] + "' is not a section"};
    node = &(*node)[path[i]];
  }
  if (!node->is_object() && !node->is_null())
    throw Failure{kExitUsage, "--set " + key + ": parent is not a section"};
  (*node)[path.back()] = value;
}

Config load_config(const Globals& g) {
  if (g.config.empty()) throw Failure{kExitUsage, "--config is required for this command"};
  ft_config* raw = nullptr;
  if (g.overrides.empty() && g.seed < 0) {
    check(ft_config_load(g.config.c_str(), &raw));
    return Config(raw);
  }
  std::ifstream in(g.config, std::ios::binary);
  if (!in) throw Failure{kExitIo, "cannot open config '" + g.config + "'"};
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Failure{kExitUsage, g.config + ": not valid JSON"};
  for (const auto& o : g.overrides) apply_override(doc, o);
  if (g.seed >= 0) doc["source"]["baseline"]["seed"] = g.seed;
  check(ft_config_parse(doc.dump().c_str(), &raw), g.config);
  return Config(raw);
}

Mesh read_mesh(const std::string& path) {
  ft_mesh* raw = nullptr;
  check(ft_mesh_read_csv(path.c_str(), &raw));
  return Mesh(raw);
}

Field read_field(const std::string& path, const ft_mesh* mesh) {
  ft_field* raw = nullptr;
  check(ft_field_read_csv(path.c_str(), mesh, &raw));
  return Field(raw);
}

// Creates missing parent directories of the output path.
std::string need_out(const Globals& g, const std::string& fallback) {
  const std::string out = g.out.empty() ? fallback : g.out;
  const std::filesystem::path parent = std::filesystem::path(out).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  if (ec) throw Failure{kExitIo, "cannot create directory '" + parent.string() + "': " + ec.message()};
  return out;
}

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cerr << line << '\n';
}

void cmd_geom(const Globals& g) {
  const Config config = load_config(g);
  ft_mesh* raw = nullptr;
  check(ft_mesh_build(config.get(), &raw));
  const Mesh mesh(raw);
  const std::string out = need_out(g, "geometry.csv");
  check(ft_mesh_write_csv(mesh.get(), out.c_str()));
  say(g, "wrote " + out + " (" + std::to_string(ft_mesh_panel_count(mesh.get())) + " panels)");
}

void cmd_synth(const Globals& g, const std::string& mesh_path) {
  const Config config = load_config(g);
  Mesh mesh;
  if (mesh_path.empty()) {
    ft_mesh* raw = nullptr;
    check(ft_mesh_build(config.get(), &raw));
    mesh.reset(raw);
  } else {
    mesh = read_mesh(mesh_path);
  }
  ft_field* raw = nullptr;
  check(ft_field_synth(config.get(), mesh.get(), &raw));
  const Field field(raw);
  const std::string out = need_out(g, "pressure.csv");
  check(ft_field_write_csv(field.get(), mesh.get(), out.c_str()));
  say(g, "wrote " + out + " (" + std::to_string(ft_field_sample_count(field.get())) + " samples)");
}

void cmd_solve(const Globals& g, const std::string& mesh_path, const std::string& pressure_path) {
  const Config config = load_config(g);
  const Mesh mesh = read_mesh(mesh_path);
  const Field field = read_field(pressure_path, mesh.get());
  const std::filesystem::path dir = need_out(g, ".");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure{kExitIo, "cannot create directory '" + dir.string() + "': " + ec.message()};
  for (std::size_t i = 0; i < ft_config_observer_count(config.get()); ++i) {
    const std::string name = ft_config_observer_name(config.get(), i);
    ft_signal* raw = nullptr;
    check(ft_solve(config.get(), mesh.get(), field.get(), i, &raw), "observer " + name);
    const Signal signal(raw);
    const std::string out = (dir / ("mic_" + name + ".csv")).string();
    check(ft_signal_write_csv(signal.get(), out.c_str()));
    std::ostringstream os;
    os << "wrote " << out << " (min Doppler factor " << ft_signal_min_doppler(signal.get()) << ")";
    say(g, os.str());
  }
}

void cmd_spectrum(const Globals& g, const std::string& signal_path) {
  const Config config = load_config(g);
  ft_signal* sraw = nullptr;
  check(ft_signal_read_csv(signal_path.c_str(), &sraw));
  const Signal signal(sraw);
  ft_spectrum* raw = nullptr;
  check(ft_spectrum_compute(config.get(), signal.get(), &raw));
  const Spectrum spectrum(raw);
  const std::string out = need_out(g, "spectrum.csv");
  check(ft_spectrum_write_csv(spectrum.get(), out.c_str()));
  say(g, "wrote " + out);
}

void cmd_tones(const Globals& g, const std::string& spectrum_path) {
  const Config config = load_config(g);
  ft_spectrum* sraw = nullptr;
  check(ft_spectrum_read_csv(spectrum_path.c_str(), &sraw));
  const Spectrum spectrum(sraw);
  ft_tones* raw = nullptr;
  check(ft_tones_detect(config.get(), spectrum.get(), &raw));
  const Tones tones(raw);
  const std::string out = need_out(g, "tones.json");
  check(ft_tones_write(tones.get(), out.c_str()));
  for (std::size_t i = 0; i < ft_tones_count(tones.get()); ++i) {
    double f = 0.0, spl = 0.0;
    long idx = 0;
    const char* label = nullptr;
    check(ft_tones_get(tones.get(), i, &f, &spl, &idx, &label));
    std::ostringstream os;
    os << "  " << f << " Hz  " << spl << " dB  [" << label << "]";
    say(g, os.str());
  }
  say(g, "wrote " + out);
}

void cmd_surfmap(const Globals& g, const std::string& mesh_path, const std::string& pressure_path, double center,
                 double width) {
  const Config config = load_config(g);
  const Mesh mesh = read_mesh(mesh_path);
  const Field field = read_field(pressure_path, mesh.get());
  ft_band_map* raw = nullptr;
  check(ft_band_map_compute(config.get(), mesh.get(), field.get(), center, width, &raw));
  const BandMap map(raw);
  const std::string out = need_out(g, "surfmap.csv");
  check(ft_band_map_write_csv(map.get(), out.c_str()));
  say(g, "wrote " + out);
}

int cmd_validate(const std::vector<std::string>& which, double tolerance) {
  bool all = true;
  for (const auto& name : which) {
    int passed = 0;
    double metric = 0.0, used = 0.0;
    char* detail = nullptr;
    check(ft_validate(name.c_str(), tolerance, &passed, &metric, &used, &detail), name);
    std::cout << (passed ? "PASS " : "FAIL ") << name << "  metric=" << metric << "  tol=" << used << "  ("
              << (detail ? detail : "") << ")\n";
    ft_string_free(detail);
    all = all && passed;
  }
  return all ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tonal noise prediction for small centrifugal fans"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "run configuration (JSON)");
  app.add_option("--out", g.out, "output file, or directory for solve");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.add_flag("--quiet", g.quiet, "suppress progress and warnings");
  app.add_option("--set", g.overrides, "override a config value, e.g. spectra.window=rectangular");
  app.add_option("--seed", g.seed, "baseline jitter seed (overrides source.baseline.seed)");

  std::string mesh_path, pressure_path, signal_path, spectrum_path;
  double center = 0.0, width = 0.0, tolerance = 0.0;
  std::vector<std::string> which;

  auto* geom = app.add_subcommand("geom", "build the surface mesh");
  auto* synth = app.add_subcommand("synth", "synthesise the surface pressure field");
  synth->add_option("--mesh", mesh_path, "geometry CSV (default: build from config)");
  auto* solve = app.add_subcommand("solve", "radiate to every observer");
  solve->add_option("--mesh", mesh_path, "geometry CSV")->required();
  solve->add_option("--pressure", pressure_path, "pressure CSV")->required();
  auto* spectrum = app.add_subcommand("spectrum", "Welch PSD of an observer signal");
  spectrum->add_option("--signal", signal_path, "signal CSV")->required();
  auto* tones = app.add_subcommand("tones", "detect tones in a spectrum");
  tones->add_option("--spectrum", spectrum_path, "spectrum CSV")->required();
  auto* surfmap = app.add_subcommand("surfmap", "band level of every panel");
  surfmap->add_option("--mesh", mesh_path, "geometry CSV")->required();
  surfmap->add_option("--pressure", pressure_path, "pressure CSV")->required();
  surfmap->add_option("--center", center, "band centre [Hz]")->required();
  surfmap->add_option("--width", width, "band width [Hz]")->required();
  auto* validate = app.add_subcommand("validate", "run oracle comparisons");
  validate->add_option("which", which, "dipole, rotating, parseval, decay (default: all)")
      ->check(CLI::IsMember({"dipole", "rotating", "parseval", "decay"}));
  validate->add_option("--tolerance", tolerance, "override the default tolerance");
  for (auto* sub : {geom, synth, solve, spectrum, tones, surfmap, validate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  ft_set_quiet(g.quiet ? 1 : 0);
  ft_set_threads(g.threads);
  try {
    if (*geom) cmd_geom(g);
    if (*synth) cmd_synth(g, mesh_path);
    if (*solve) cmd_solve(g, mesh_path, pressure_path);
    if (*spectrum) cmd_spectrum(g, signal_path);
    if (*tones) cmd_tones(g, spectrum_path);
    if (*surfmap) cmd_surfmap(g, mesh_path, pressure_path, center, width);
    if (*validate) {
      if (which.empty()) which = {"dipole", "rotating", "parseval", "decay"};
      return cmd_validate(which, tolerance);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  }
  return 0;
}
