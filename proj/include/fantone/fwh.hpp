#pragma once

// Loading (dipole) noise of rotating impermeable panels, plus independent
// references used to validate it: the stationary compact dipole in closed
// form and a retarded-time point-force evaluation driven by a bisection
// emission-time solver.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fantone/geom.hpp"
#include "fantone/sources.hpp"
#include "fantone/vec3.hpp"

namespace fantone {

struct Medium {
  double density = 1.225;
  double sound_speed = 340.0;
  double reference_pressure = 2e-5;

  void validate() const;
};

struct Observer {
  std::string name;
  Vec3 position;
};

struct ChamberDimensions {
  double inlet_diameter_d3 = 0.6;
  double outlet_diameter_d4 = 1.1;
  double inlet_distance_h1 = 0.4;
  double outlet_distance_h2 = 0.5;
};

struct ObserverSetup {
  std::vector<Observer> observers;
  ChamberDimensions chamber;

  /// M1 1 m upstream of the intake plane and 1 m off the axis; M2 1 m
  /// downstream of the backplate and 0.5 m off the axis.
  static ObserverSetup defaults(const FanParams& params);
};

struct AcousticSignal {
  double sample_rate = 1.0;
  double t0 = 0.0;
  std::vector<double> pressure;
  double transient_cut = 0.0;  // seconds at the start excluded from analysis

  double time(std::size_t i) const { return t0 + static_cast<double>(i) / sample_rate; }
  std::size_t transient_samples() const;
  /// Samples after the transient cut.
  std::vector<double> analysed() const;
};

struct LoadingNoiseOptions {
  int substeps = 28;       // source-time refinement per pressure sample
  unsigned threads = 0;    // 0 = default worker count
  double transient_cut = -1.0;  // < 0: one rotation period (0 for a fixed surface)
};

struct LoadingNoiseResult {
  AcousticSignal signal;
  double min_doppler = 1.0;  // smallest 1 - M_r over all panels and source times
};

/// Acoustic pressure at `observer` from the loading term of every panel,
/// accumulated in source time and resampled to a uniform observer grid that
/// covers the common arrival window of all panels.
LoadingNoiseResult loading_noise(const SurfacePressureField& field, const SurfaceMesh& mesh,
                                 const RotationKinematics& kin, const Observer& observer, const Medium& medium,
                                 const SamplingPlan& plan, const LoadingNoiseOptions& options = {});

/// Force history F(t) and its rate at a fixed point.
struct ForceHistory {
  std::function<Vec3(double)> force;
  std::function<Vec3(double)> rate;
};

std::vector<double> compact_dipole_reference(const ForceHistory& force, const Vec3& source, const Vec3& observer,
                                             const Medium& medium, std::span<const double> observer_times);

struct Trajectory {
  std::function<Vec3(double)> position;
  double begin = -1e300;
  double end = 1e300;
};

/// Emission time tau with t = tau + |x - y(tau)| / c0, bracketed and
/// bisected until |g(tau)| < 1e-12 s.
double retarded_time_solve(const Vec3& observer, const Trajectory& trajectory, double t, double sound_speed);

std::vector<double> rotating_point_force_reference(const PointForceSource& src, const Vec3& observer,
                                                   const Medium& medium, std::span<const double> observer_times);

/// Plan-driven variant: observer times start once the first emission has
/// reached the observer.
AcousticSignal rotating_point_force_reference(const PointForceSource& src, const Observer& observer,
                                              const Medium& medium, const SamplingPlan& plan);

/// One-panel mesh carrying the constant co-rotating force of `src` as a
/// uniform pressure on an area `area`; used to cross-check loading_noise.
struct SinglePanelCase {
  SurfaceMesh mesh;
  RotationKinematics kin;
};
SinglePanelCase single_panel_mesh(const Vec3& center, const Vec3& normal, double area, double angular_speed);

}  // namespace fantone
