#pragma once

// Run configuration: one JSON document with sections geometry, medium,
// observers, source, plan, spectra and solver. Unknown keys are errors;
// omitted optional keys take the library defaults.

#include <string>

#include "fantone/fwh.hpp"
#include "fantone/geom.hpp"
#include "fantone/sources.hpp"
#include "fantone/spectra.hpp"

namespace fantone {

enum class SourceKind { baseline, modulated, ingest };

std::string to_string(SourceKind kind);

struct SourceSettings {
  SourceKind kind = SourceKind::baseline;
  BaselineLoadingModel baseline;
  RecirculationModulation modulation;
};

struct SpectraSettings {
  PsdOptions psd;
  double threshold_db = 10.0;
  int grid_divisor = 4;
};

struct RunConfig {
  FanParams geometry;
  Medium medium;
  ObserverSetup observers;
  SourceSettings source;
  SamplingPlan plan;
  SpectraSettings spectra;
  LoadingNoiseOptions solver;

  RotationKinematics kinematics() const { return RotationKinematics::from_params(geometry); }
  ToneGrid tone_grid() const { return {geometry.rotation_frequency(), spectra.grid_divisor, geometry.blade_count_z}; }
  PsdOptions psd_options() const;
  void validate() const;
};

/// `origin` names the document in error messages.
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::string& path);

/// Canonical JSON: every field written, fixed key order, 2-space indent.
std::string to_json(const RunConfig& config);

}  // namespace fantone
