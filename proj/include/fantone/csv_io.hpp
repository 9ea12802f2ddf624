#pragma once

// CSV artifacts exchanged between pipeline stages. Geometry, surface
// pressure and the acoustic pressure column of signal files use shortest
// round-trip formatting so re-ingestion is exact (signal levels span far more
// than 9 digits between BPF harmonics); everything else uses 9 significant
// digits. All writers emit LF line endings and fixed column order.

#include <string>
#include <vector>

#include "fantone/fwh.hpp"
#include "fantone/geom.hpp"
#include "fantone/sources.hpp"
#include "fantone/spectra.hpp"

namespace fantone {

/// Shortest decimal form that parses back to the same double.
std::string format_exact(double v);
/// %.9g.
std::string format_g9(double v);

void write_geometry_csv(const std::string& path, const SurfaceMesh& mesh);
SurfaceMesh read_geometry_csv(const std::string& path);

void write_pressure_csv(const std::string& path, const SurfacePressureField& field, const SurfaceMesh& mesh);
/// Columns must be exactly p_<id> for the mesh panels in id order and the
/// time column must be uniformly spaced.
SurfacePressureField read_pressure_csv(const std::string& path, const SurfaceMesh& mesh);

struct SignalMetadata {
  std::string observer;
  Vec3 position;
  Medium medium;
};

void write_signal_csv(const std::string& path, const AcousticSignal& signal, const SignalMetadata& meta);
AcousticSignal read_signal_csv(const std::string& path);

void write_spectrum_csv(const std::string& path, const Spectrum& spectrum);
Spectrum read_spectrum_csv(const std::string& path);

void write_tones_csv(const std::string& path, const ToneReport& report);
void write_tones_json(const std::string& path, const ToneReport& report);

void write_band_map_csv(const std::string& path, const SurfaceBandMap& map);

}  // namespace fantone
