#pragma once

// Oracle comparisons run by `fantone validate` and the acceptance binary.

#include <string>

#include "fantone/fwh.hpp"
#include "fantone/geom.hpp"

namespace fantone {

struct ValidationResult {
  std::string name;
  double metric = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Sampling plan with one degree of rotation per solver step at the given
/// speed, so a revolution spans an integer number of samples.
SamplingPlan degree_step_plan(double rotation_speed_rpm, int record_stride, double revolutions);

/// Stationary one-panel mesh with a sinusoidal load against the closed-form
/// compact dipole; metric is the relative L2 error over at least 5 periods.
ValidationResult validate_dipole(double tolerance = 1e-3, unsigned threads = 0);

/// Point force on a 0.134 m orbit at 2800 rpm, observer 5 m away: loading_noise
/// against the bisection retarded-time reference; metric is max |dp| / peak.
ValidationResult validate_rotating(double tolerance = 1e-3, unsigned threads = 0);

/// Rectangular window, single segment, white noise plus a sine.
ValidationResult validate_parseval(double tolerance = 1e-6);

/// Baseline fan, RMS at 10 m over RMS at 5 m along one direction; metric is
/// |ratio / 0.5 - 1|.
ValidationResult validate_decay(double tolerance = 1e-2, unsigned threads = 0);

/// RMS of the analysed part of a signal after mean removal, over the largest
/// whole number of `period_samples` blocks.
double periodic_rms(const AcousticSignal& signal, std::size_t period_samples);

}  // namespace fantone
