#pragma once

// Welch PSD estimation, tone detection on the n_f / divisor grid and
// band-filtered surface-pressure maps.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fantone/fwh.hpp"
#include "fantone/geom.hpp"
#include "fantone/sources.hpp"

namespace fantone {

enum class WindowKind { hann, rectangular };

std::string to_string(WindowKind w);
WindowKind parse_window(const std::string& name);

inline constexpr double kLevelFloorDb = -400.0;

struct PsdOptions {
  int n_segments = 3;
  WindowKind window = WindowKind::hann;
  double overlap = 0.0;
  std::size_t segment_length = 0;  // 0: as long as n_segments allows
  double reference_pressure = 2e-5;
};

/// One-sided PSD. spl is the per-bin band level 10 log10(psd * df / p_ref^2).
struct Spectrum {
  std::vector<double> frequency;
  std::vector<double> psd;
  std::vector<double> spl;
  WindowKind window = WindowKind::hann;
  int n_segments = 1;
  double overlap = 0.0;
  double bin_width = 0.0;
  std::size_t segment_length = 0;
  double reference_pressure = 2e-5;

  std::size_t size() const { return frequency.size(); }
  void validate() const;
};

double level_db(double power, double reference_pressure);

Spectrum psd(std::span<const double> x, double sample_rate, const PsdOptions& options = {});
/// PSD of the samples after the signal's transient cut.
Spectrum psd(const AcousticSignal& signal, const PsdOptions& options = {});

/// |var(x) - sum(psd) df| / var(x); 0 for a constant signal.
double parseval_error(std::span<const double> x, const Spectrum& spectrum);

struct ToneGrid {
  double rotation_frequency = 0.0;  // n_f
  int divisor = 4;
  int blade_count = 7;

  double step() const { return rotation_frequency / divisor; }
};

struct Tone {
  double frequency = 0.0;
  double spl = 0.0;
  long grid_index = -1;  // -1 when off the grid
  std::string label;     // BPF0, BPF1, nf/4, BPF0/4 or other
};

struct ToneReport {
  std::vector<Tone> tones;
  double threshold_db = 10.0;
};

std::string tone_label(long grid_index, const ToneGrid& grid);

/// Local maxima more than threshold_db above the median level (DC excluded),
/// snapped to the nearest grid multiple within half a bin.
ToneReport detect_tones(const Spectrum& spec, const ToneGrid& grid, double threshold_db = 10.0);

struct SurfaceBandMap {
  double center = 0.0;
  double width = 0.0;
  std::vector<int> panel_id;
  std::vector<double> spl;

  std::size_t size() const { return spl.size(); }
};

/// Power of one spectrum inside [center - width/2, center + width/2]; the
/// nearest bin is used when the band holds none.
double band_power(const Spectrum& spec, double center, double width);

SurfaceBandMap surface_band_map(const SurfacePressureField& field, const SurfaceMesh& mesh, double center,
                                double width, const PsdOptions& options = {}, unsigned threads = 0);

}  // namespace fantone
