#pragma once

// Surface-pressure inputs for the loading-noise solver: synthetic steady
// blade loading, the slow recirculation modulation that wanders from blade
// to blade, point-force validation sources and ingestion of exported wall
// pressure histories.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fantone/geom.hpp"
#include "fantone/vec3.hpp"

namespace fantone {

/// Per-panel gauge pressure histories sampled uniformly in time. Row-major
/// storage: value(sample, panel).
class SurfacePressureField {
 public:
  SurfacePressureField() = default;
  SurfacePressureField(double sample_rate, double t0, std::size_t samples, std::size_t panels);

  double sample_rate() const { return sample_rate_; }
  double t0() const { return t0_; }
  std::size_t samples() const { return samples_; }
  std::size_t panels() const { return panels_; }
  double time(std::size_t sample) const { return t0_ + static_cast<double>(sample) / sample_rate_; }

  double& at(std::size_t sample, std::size_t panel) { return data_[sample * panels_ + panel]; }
  double at(std::size_t sample, std::size_t panel) const { return data_[sample * panels_ + panel]; }

  std::vector<double> panel_history(std::size_t panel) const;
  const std::vector<double>& data() const { return data_; }

  /// Throws unless panel count matches and all values are finite.
  void check_bound_to(const SurfaceMesh& mesh) const;

  bool operator==(const SurfacePressureField&) const = default;

 private:
  double sample_rate_ = 1.0;
  double t0_ = 0.0;
  std::size_t samples_ = 0;
  std::size_t panels_ = 0;
  std::vector<double> data_;
};

/// Linear combination a*x + b*y of two fields on the same grid.
SurfacePressureField combine(double a, const SurfacePressureField& x, double b, const SurfacePressureField& y);

/// Steady rotating-frame blade loading. Chordwise profiles are quadratic
/// decays from the leading-edge to the trailing-edge value; suction-side
/// values are applied with negative sign.
struct BaselineLoadingModel {
  double peak_pressure = 300.0;
  double pressure_side_le = 1.0;
  double pressure_side_te = 0.4;
  double suction_side_le = 0.8;
  double suction_side_te = 0.2;
  double spanwise_slope = 0.0;   // weight(eta) = 1 + slope * (eta - 0.5)
  double shroud_pressure = 0.0;
  double backplate_pressure = 0.0;
  double jitter_amplitude = 0.0;  // Pa, Gaussian, off by default
  std::uint64_t seed = 0;

  double pressure_side(double s) const;
  double suction_side(double s) const;  // magnitude, >= 0 for defaults
  double spanwise_weight(double eta) const;
  /// Signed blade pressure for a panel (positive on the pressure side).
  double blade_pressure(BladeSide side, double s, double eta) const;

  void validate() const;
};

/// Envelope A_b(t) = 1 + depth * w(s, eta) * Phi(2 pi t / (m_p T) - dir 2 pi b / z + phase),
/// w = s^q_s * eta^q_eta. Phi is cos for sharpness 0 and a normalised
/// periodic bump with the same [-1, 1] range for sharpness > 0, which
/// concentrates the disturbance on fewer blades at a time.
struct RecirculationModulation {
  double depth = 70.0 / (2.0 * 300.0 * 0.4);  // 70 Pa peak-to-peak at the pressure-side trailing edge
  double period_multiplier = 4.0;
  int direction = 1;  // +1: pattern moves among blades in the rotation sense
  double q_s = 3.0;
  double q_eta = 3.0;
  double phase = 0.0;
  double sharpness = 32.0;

  double weight(double s, double eta) const;
  double shape(double argument) const;  // Phi
  /// Envelope for blade b at time t on a fan with z blades, period T and
  /// rotation sign `sense` (+1 counterclockwise about +z).
  double envelope(int blade, int blade_count, double t, double rotation_period, double sense,
                  double s, double eta) const;

  void validate() const;
};

/// Depth giving a peak-to-peak trailing-edge pressure swing of
/// `target_difference` on the pressure side at the shroud (s = eta = 1).
double calibrate_depth(const BaselineLoadingModel& model, const RecirculationModulation& mod,
                       double target_difference);

SurfacePressureField synth_baseline(const SurfaceMesh& mesh, const RotationKinematics& kin,
                                    const BaselineLoadingModel& model, const SamplingPlan& plan);

SurfacePressureField synth_modulated(const SurfaceMesh& mesh, const RotationKinematics& kin,
                                     const BaselineLoadingModel& model, const RecirculationModulation& mod,
                                     const SamplingPlan& plan);

/// Reads a geometry CSV and a pressure CSV, checking that the pressure
/// columns match the mesh panel ids and the timestamps are uniform.
struct IngestedField {
  SurfaceMesh mesh;
  SurfacePressureField field;
};
IngestedField ingest_pressure(const std::string& geometry_csv, const std::string& pressure_csv);

// -- point forces ------------------------------------------------------------

/// F(t) = mean + amplitude * sin(2 pi f t + phase), expressed in the frame
/// co-rotating with the source (the stationary frame for a fixed source).
struct ForceModel {
  Vec3 mean;
  Vec3 amplitude;
  double frequency = 0.0;
  double phase = 0.0;

  Vec3 local(double t) const;
  Vec3 local_rate(double t) const;
};

struct PointForceSource {
  enum class Trajectory { fixed, circular };
  Trajectory trajectory = Trajectory::fixed;
  Vec3 position;               // fixed position, or orbit start point (x, 0, z) for circular
  double angular_speed = 0.0;  // rad/s about +z, circular only
  ForceModel force;

  Vec3 position_at(double t) const;
  Vec3 velocity_at(double t) const;
  Vec3 acceleration_at(double t) const;
  Vec3 force_at(double t) const;       // stationary frame
  Vec3 force_rate_at(double t) const;  // stationary frame
  double speed() const;

  void validate(double sound_speed) const;
};

struct PointForceSamples {
  std::vector<double> time;
  std::vector<Vec3> position;
  std::vector<Vec3> force;
};

PointForceSamples point_force_signal(const PointForceSource& src, const SamplingPlan& plan,
                                     double sound_speed = 340.0);

}  // namespace fantone
