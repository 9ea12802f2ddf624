#pragma once

// Impeller surface construction, rigid-rotation kinematics and closed-form
// design checks (blade passing frequency, compactness, tip Mach number,
// sampling plan, inlet turbulence boundary conditions).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fantone/vec3.hpp"

namespace fantone {

enum class RotationSense { clockwise_from_inlet, counterclockwise_from_inlet };

std::string to_string(RotationSense sense);
RotationSense rotation_sense_from_string(const std::string& text);

/// Impeller parameters. Lengths in metres, speed in rev/min, angles in
/// degrees. The defaults are the isolated fan of the reference test rig.
struct FanParams {
  double intake_diameter_d1 = 0.165;
  double fan_diameter_d2 = 0.268;
  double fan_width_b2 = 0.053;
  double gap_width_w = 0.0015;
  int blade_count_z = 7;
  double rotation_speed_n = 2800.0;
  RotationSense rotation_sense = RotationSense::clockwise_from_inlet;

  // Synthetic blade shape: circular-arc camber line between d1/2 and d2/2
  // with metal angles measured from the local tangential direction, and a
  // straight conical shroud dropping from blade_inlet_height at d1/2 to b2
  // at d2/2.
  double blade_inlet_angle = 32.0;
  double blade_outlet_angle = 38.0;
  double blade_inlet_height = 0.07;

  int chordwise_panels = 8;
  int spanwise_panels = 6;
  int azimuthal_panels = 28;

  double rotation_frequency() const { return rotation_speed_n / 60.0; }  // n_f [Hz]
  double rotation_period() const { return 60.0 / rotation_speed_n; }     // T [s]
  double bpf() const { return blade_count_z * rotation_frequency(); }    // BPF0 [Hz]

  /// Throws Error(config) naming the first violated constraint.
  void validate() const;
};

enum class Patch { blade, shroud, backplate };

std::string to_string(Patch patch);
Patch patch_from_string(const std::string& text);

enum class BladeSide { none, pressure, suction };

struct Panel {
  int panel_id = 0;
  Patch patch = Patch::blade;
  int blade_index = -1;           // -1 for shroud and backplate panels
  BladeSide side = BladeSide::none;
  Vec3 center;                    // rotating frame, t = 0
  Vec3 normal;                    // unit, pointing into the fluid
  double area = 0.0;
  std::optional<double> chord_fraction;  // s: 0 at leading edge, 1 at trailing edge
  std::optional<double> span_fraction;   // eta: 0 at backplate, 1 at shroud
};

struct SurfaceMesh {
  FanParams params;
  std::vector<Panel> panels;

  std::size_t size() const { return panels.size(); }
  const Panel& panel(int panel_id) const;
  double patch_area(Patch patch) const;

  /// Checks unit normals, positive areas and dense ids; throws Error(config).
  void validate() const;
};

struct RotationKinematics {
  Vec3 axis{0.0, 0.0, 1.0};
  double angular_speed = 0.0;  // rad/s, signed about +z

  static RotationKinematics from_params(const FanParams& params);
  /// Period of one revolution; +inf when the surface does not rotate.
  double period() const;
};

struct PanelState {
  Vec3 position;
  Vec3 velocity;
  Vec3 normal;
};

SurfaceMesh build_fan_geometry(const FanParams& params);

/// Attaches pressure/suction side labels to blade panels from the direction
/// of their normal relative to the blade motion. Used after reading a mesh
/// back from CSV, where the side is not stored.
void assign_blade_sides(SurfaceMesh& mesh);

PanelState panel_state(const SurfaceMesh& mesh, const RotationKinematics& kin, int panel_id, double t);
PanelState rotate_state(const Vec3& center, const Vec3& normal, const RotationKinematics& kin, double t);

// -- closed-form checks -----------------------------------------------------

/// (harmonic + 1) * z * n / 60.
double blade_passing_frequency(int blade_count, double rotation_speed_rpm, int harmonic = 0);

double tip_mach(const FanParams& params, double sound_speed);

struct Compactness {
  double wavelength = 0.0;
  double ratio = 0.0;  // radius / wavelength
  bool compact = false;
};

inline constexpr double kCompactnessThreshold = 0.3;

Compactness compactness(double radius, double tone_frequency, double sound_speed);

struct SamplingPlan {
  double solver_dt = 5.95e-5;
  int record_stride = 10;
  double record_duration = 0.2;

  double sample_rate() const { return 1.0 / (solver_dt * record_stride); }
  double nyquist() const { return 0.5 * sample_rate(); }
  double bin_width() const { return 1.0 / record_duration; }
  std::size_t sample_count() const;
  double sample_interval() const { return solver_dt * record_stride; }

  /// Emits a warning and returns false when `frequency` is above Nyquist.
  bool check_tone(double frequency) const;
};

SamplingPlan sampling_plan(double solver_dt, int record_stride, double record_duration);

struct TurbulenceBoundary {
  double intensity = 0.0;     // fraction
  double length_scale = 0.0;  // m
};

inline constexpr double kAirKinematicViscosity = 1.5e-5;

/// Reynolds number of a volume flow through a circular duct.
double duct_reynolds(double volume_flow, double duct_diameter, double kinematic_viscosity = kAirKinematicViscosity);

/// I = 0.16 Re^(-1/8), l = 0.7 d. When `stated_length_scale` is given and
/// disagrees with the formula by more than 1 %, a warning is emitted.
TurbulenceBoundary turbulence_bc(double reynolds, double inlet_diameter,
                                 std::optional<double> stated_length_scale = std::nullopt);

}  // namespace fantone
