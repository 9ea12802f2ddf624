#include "fantone/fantone.h"

#include <cmath>
#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "fantone/config.hpp"
#include "fantone/csv_io.hpp"
#include "fantone/error.hpp"
#include "fantone/parallel.hpp"
#include "fantone/validate.hpp"

using namespace fantone;

struct ft_config {
  RunConfig value;
};
struct ft_mesh {
  SurfaceMesh value;
};
struct ft_field {
  SurfacePressureField value;
};
struct ft_signal {
  AcousticSignal value;
  SignalMetadata meta;
  double min_doppler = 1.0;
};
struct ft_spectrum {
  Spectrum value;
};
struct ft_tones {
  ToneReport value;
};
struct ft_band_map {
  SurfaceBandMap value;
};

namespace {

thread_local std::string last_error;

ft_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return FT_ERR_CONFIG;
    case ErrorKind::invalid_argument: return FT_ERR_INVALID_ARGUMENT;
    case ErrorKind::io: return FT_ERR_IO;
    case ErrorKind::parse: return FT_ERR_PARSE;
    case ErrorKind::numeric: return FT_ERR_NUMERIC;
  }
  return FT_ERR_INTERNAL;
}

template <class F>
ft_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return FT_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return FT_ERR_INTERNAL;
}

template <class T>
void require(const T* p, const char* what) {
  if (!p) fail(ErrorKind::invalid_argument, std::string(what) + " is NULL");
}

char* duplicate(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

}  // namespace

extern "C" {

const char* ft_version(void) { return "0.1.0"; }
const char* ft_last_error(void) { return last_error.c_str(); }
void ft_set_threads(unsigned threads) { set_default_threads(threads); }

void ft_set_quiet(int quiet) {
  if (quiet)
    set_warning_sink([](const std::string&) {});
  else
    set_warning_sink([](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; });
}

void ft_string_free(char* text) { delete[] text; }

ft_status ft_config_load(const char* path, ft_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ft_config{load_config(path)};
  });
}

ft_status ft_config_parse(const char* json, ft_config** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new ft_config{parse_config(json)};
  });
}

ft_status ft_config_to_json(const ft_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = duplicate(to_json(config->value));
  });
}

size_t ft_config_observer_count(const ft_config* config) {
  return config ? config->value.observers.observers.size() : 0;
}

const char* ft_config_observer_name(const ft_config* config, size_t index) {
  if (!config || index >= config->value.observers.observers.size()) return nullptr;
  return config->value.observers.observers[index].name.c_str();
}

void ft_config_free(ft_config* config) { delete config; }

ft_status ft_mesh_build(const ft_config* config, ft_mesh** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = new ft_mesh{build_fan_geometry(config->value.geometry)};
  });
}

ft_status ft_mesh_read_csv(const char* path, ft_mesh** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ft_mesh{read_geometry_csv(path)};
  });
}

ft_status ft_mesh_write_csv(const ft_mesh* mesh, const char* path) {
  return guarded([&] {
    require(mesh, "mesh");
    require(path, "path");
    write_geometry_csv(path, mesh->value);
  });
}

size_t ft_mesh_panel_count(const ft_mesh* mesh) { return mesh ? mesh->value.size() : 0; }
void ft_mesh_free(ft_mesh* mesh) { delete mesh; }

ft_status ft_field_synth(const ft_config* config, const ft_mesh* mesh, ft_field** out) {
  return guarded([&] {
    require(config, "config");
    require(mesh, "mesh");
    require(out, "out");
    const RunConfig& c = config->value;
    const RotationKinematics kin = RotationKinematics::from_params(mesh->value.params);
    switch (c.source.kind) {
      case SourceKind::baseline:
        *out = new ft_field{synth_baseline(mesh->value, kin, c.source.baseline, c.plan)};
        break;
      case SourceKind::modulated:
        *out = new ft_field{synth_modulated(mesh->value, kin, c.source.baseline, c.source.modulation, c.plan)};
        break;
      case SourceKind::ingest:
        fail(ErrorKind::config, "source.kind is 'ingest': read the pressure CSV instead of synthesising");
    }
  });
}

ft_status ft_field_read_csv(const char* path, const ft_mesh* mesh, ft_field** out) {
  return guarded([&] {
    require(path, "path");
    require(mesh, "mesh");
    require(out, "out");
    *out = new ft_field{read_pressure_csv(path, mesh->value)};
  });
}

ft_status ft_field_write_csv(const ft_field* field, const ft_mesh* mesh, const char* path) {
  return guarded([&] {
    require(field, "field");
    require(mesh, "mesh");
    require(path, "path");
    write_pressure_csv(path, field->value, mesh->value);
  });
}

size_t ft_field_sample_count(const ft_field* field) { return field ? field->value.samples() : 0; }
void ft_field_free(ft_field* field) { delete field; }

ft_status ft_solve(const ft_config* config, const ft_mesh* mesh, const ft_field* field, size_t observer,
                   ft_signal** out) {
  return guarded([&] {
    require(config, "config");
    require(mesh, "mesh");
    require(field, "field");
    require(out, "out");
    const RunConfig& c = config->value;
    if (observer >= c.observers.observers.size()) fail(ErrorKind::invalid_argument, "observer index out of range");
    const Observer& obs = c.observers.observers[observer];
    // The plan covers the whole field when it was ingested on its own grid.
    SamplingPlan plan = c.plan;
    if (std::abs(plan.sample_rate() - field->value.sample_rate()) > 1e-6 * field->value.sample_rate() ||
        plan.sample_count() > field->value.samples()) {
      if (c.source.kind != SourceKind::ingest)
        fail(ErrorKind::invalid_argument, "pressure field does not match the configured sampling plan");
      plan = sampling_plan(1.0 / field->value.sample_rate(), 1,
                           static_cast<double>(field->value.samples()) / field->value.sample_rate());
    }
    const LoadingNoiseResult r = loading_noise(field->value, mesh->value,
                                               RotationKinematics::from_params(mesh->value.params), obs, c.medium,
                                               plan, c.solver);
    *out = new ft_signal{r.signal, {obs.name, obs.position, c.medium}, r.min_doppler};
  });
}

ft_status ft_signal_write_csv(const ft_signal* signal, const char* path) {
  return guarded([&] {
    require(signal, "signal");
    require(path, "path");
    write_signal_csv(path, signal->value, signal->meta);
  });
}

ft_status ft_signal_read_csv(const char* path, ft_signal** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ft_signal{read_signal_csv(path), {}, 1.0};
  });
}

size_t ft_signal_length(const ft_signal* signal) { return signal ? signal->value.pressure.size() : 0; }
const double* ft_signal_data(const ft_signal* signal) { return signal ? signal->value.pressure.data() : nullptr; }
double ft_signal_sample_rate(const ft_signal* signal) { return signal ? signal->value.sample_rate : 0.0; }
double ft_signal_min_doppler(const ft_signal* signal) { return signal ? signal->min_doppler : 0.0; }
void ft_signal_free(ft_signal* signal) { delete signal; }

ft_status ft_spectrum_compute(const ft_config* config, const ft_signal* signal, ft_spectrum** out) {
  return guarded([&] {
    require(config, "config");
    require(signal, "signal");
    require(out, "out");
    *out = new ft_spectrum{psd(signal->value, config->value.psd_options())};
  });
}

ft_status ft_spectrum_write_csv(const ft_spectrum* spectrum, const char* path) {
  return guarded([&] {
    require(spectrum, "spectrum");
    require(path, "path");
    write_spectrum_csv(path, spectrum->value);
  });
}

ft_status ft_spectrum_read_csv(const char* path, ft_spectrum** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ft_spectrum{read_spectrum_csv(path)};
  });
}

size_t ft_spectrum_size(const ft_spectrum* s) { return s ? s->value.size() : 0; }
const double* ft_spectrum_frequency(const ft_spectrum* s) { return s ? s->value.frequency.data() : nullptr; }
const double* ft_spectrum_psd(const ft_spectrum* s) { return s ? s->value.psd.data() : nullptr; }
const double* ft_spectrum_spl(const ft_spectrum* s) { return s ? s->value.spl.data() : nullptr; }
void ft_spectrum_free(ft_spectrum* spectrum) { delete spectrum; }

ft_status ft_tones_detect(const ft_config* config, const ft_spectrum* spectrum, ft_tones** out) {
  return guarded([&] {
    require(config, "config");
    require(spectrum, "spectrum");
    require(out, "out");
    *out = new ft_tones{detect_tones(spectrum->value, config->value.tone_grid(), config->value.spectra.threshold_db)};
  });
}

ft_status ft_tones_write(const ft_tones* tones, const char* path) {
  return guarded([&] {
    require(tones, "tones");
    require(path, "path");
    if (ends_with(path, ".json"))
      write_tones_json(path, tones->value);
    else
      write_tones_csv(path, tones->value);
  });
}

size_t ft_tones_count(const ft_tones* tones) { return tones ? tones->value.tones.size() : 0; }

ft_status ft_tones_get(const ft_tones* tones, size_t index, double* frequency, double* spl, long* grid_index,
                       const char** label) {
  return guarded([&] {
    require(tones, "tones");
    if (index >= tones->value.tones.size()) fail(ErrorKind::invalid_argument, "tone index out of range");
    const Tone& t = tones->value.tones[index];
    if (frequency) *frequency = t.frequency;
    if (spl) *spl = t.spl;
    if (grid_index) *grid_index = t.grid_index;
    if (label) *label = t.label.c_str();
  });
}

void ft_tones_free(ft_tones* tones) { delete tones; }

ft_status ft_band_map_compute(const ft_config* config, const ft_mesh* mesh, const ft_field* field, double center_hz,
                              double width_hz, ft_band_map** out) {
  return guarded([&] {
    require(config, "config");
    require(mesh, "mesh");
    require(field, "field");
    require(out, "out");
    *out = new ft_band_map{
        surface_band_map(field->value, mesh->value, center_hz, width_hz, config->value.psd_options())};
  });
}

ft_status ft_band_map_write_csv(const ft_band_map* map, const char* path) {
  return guarded([&] {
    require(map, "map");
    require(path, "path");
    write_band_map_csv(path, map->value);
  });
}

size_t ft_band_map_size(const ft_band_map* map) { return map ? map->value.size() : 0; }
const double* ft_band_map_spl(const ft_band_map* map) { return map ? map->value.spl.data() : nullptr; }
void ft_band_map_free(ft_band_map* map) { delete map; }

ft_status ft_validate(const char* which, double tolerance, int* passed, double* metric, double* used_tolerance,
                      char** detail) {
  return guarded([&] {
    require(which, "which");
    const std::string name = which;
    ValidationResult r;
    if (name == "dipole")
      r = tolerance > 0 ? validate_dipole(tolerance) : validate_dipole();
    else if (name == "rotating")
      r = tolerance > 0 ? validate_rotating(tolerance) : validate_rotating();
    else if (name == "parseval")
      r = tolerance > 0 ? validate_parseval(tolerance) : validate_parseval();
    else if (name == "decay")
      r = tolerance > 0 ? validate_decay(tolerance) : validate_decay();
    else
      fail(ErrorKind::invalid_argument, "unknown validation '" + name + "'");
    if (passed) *passed = r.passed ? 1 : 0;
    if (metric) *metric = r.metric;
    if (used_tolerance) *used_tolerance = r.tolerance;
    if (detail) *detail = duplicate(r.detail);
  });
}

}  // extern "C"
