#include "fantone/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "fantone/error.hpp"
#include "fantone/sources.hpp"
#include "fantone/spectra.hpp"

namespace fantone {

namespace {

constexpr double kPi = std::numbers::pi;

ValidationResult finish(std::string name, double metric, double tolerance, std::string detail) {
  return {std::move(name), metric, tolerance, metric <= tolerance, std::move(detail)};
}

}  // namespace

SamplingPlan degree_step_plan(double rotation_speed_rpm, int record_stride, double revolutions) {
  const double period = 60.0 / rotation_speed_rpm;
  return sampling_plan(period / 360.0, record_stride, revolutions * period);
}

double periodic_rms(const AcousticSignal& signal, std::size_t period_samples) {
  const std::vector<double> x = signal.analysed();
  const std::size_t n = period_samples ? x.size() / period_samples * period_samples : x.size();
  if (n == 0) fail(ErrorKind::invalid_argument, "signal shorter than one period");
  const double mean = std::accumulate(x.begin(), x.begin() + n, 0.0) / n;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += (x[i] - mean) * (x[i] - mean);
  return std::sqrt(sum / n);
}

ValidationResult validate_dipole(double tolerance, unsigned threads) {
  const Medium medium;
  const double f = blade_passing_frequency(7, 2800.0);
  const double area = 0.01, force = 1.0;
  const SamplingPlan plan = degree_step_plan(2800.0, 1, 3.0);
  const SinglePanelCase c = single_panel_mesh({0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, area, 0.0);

  SurfacePressureField field(plan.sample_rate(), 0.0, plan.sample_count(), 1);
  for (std::size_t i = 0; i < field.samples(); ++i) field.at(i, 0) = force / area * std::sin(2.0 * kPi * f * field.time(i));

  const Observer obs{"dipole", {3.0, 0.0, 4.0}};
  LoadingNoiseOptions opt;
  opt.threads = threads;
  const AcousticSignal sig = loading_noise(field, c.mesh, c.kin, obs, medium, plan, opt).signal;

  ForceHistory history{
      [&](double t) { return Vec3{force * std::sin(2.0 * kPi * f * t), 0.0, 0.0}; },
      [&](double t) { return Vec3{force * 2.0 * kPi * f * std::cos(2.0 * kPi * f * t), 0.0, 0.0}; }};
  std::vector<double> times(sig.pressure.size());
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = sig.time(i);
  const std::vector<double> ref = compact_dipole_reference(history, {0.0, 0.0, 0.0}, obs.position, medium, times);

  const std::size_t skip = sig.transient_samples();
  double err = 0.0, norm2 = 0.0;
  for (std::size_t i = skip; i < ref.size(); ++i) {
    err += (sig.pressure[i] - ref[i]) * (sig.pressure[i] - ref[i]);
    norm2 += ref[i] * ref[i];
  }
  const double periods = (ref.size() - skip) / sig.sample_rate * f;
  std::ostringstream os;
  os << "relative L2 over " << periods << " periods of " << f << " Hz";
  if (periods < 5.0) return {"dipole", INFINITY, tolerance, false, "record shorter than 5 periods"};
  return finish("dipole", std::sqrt(err / norm2), tolerance, os.str());
}

ValidationResult validate_rotating(double tolerance, unsigned threads) {
  const Medium medium;
  const double rpm = 2800.0, radius = 0.134;
  const double omega = -2.0 * kPi * rpm / 60.0;
  const double f = blade_passing_frequency(7, rpm);
  const Vec3 direction{0.0, 1.0, 0.5};
  const double area = 1e-3;

  PointForceSource src;
  src.trajectory = PointForceSource::Trajectory::circular;
  src.position = {radius, 0.0, 0.0};
  src.angular_speed = omega;
  src.force.mean = direction;
  src.force.amplitude = direction * 0.3;
  src.force.frequency = f;

  const SamplingPlan plan = degree_step_plan(rpm, 1, 4.0);
  const SinglePanelCase c = single_panel_mesh(src.position, direction, area, omega);
  SurfacePressureField field(plan.sample_rate(), 0.0, plan.sample_count(), 1);
  for (std::size_t i = 0; i < field.samples(); ++i) field.at(i, 0) = norm(src.force.local(field.time(i))) / area;

  const Observer obs{"rotating", {4.0, 0.0, 3.0}};
  LoadingNoiseOptions opt;
  opt.threads = threads;
  const AcousticSignal sig = loading_noise(field, c.mesh, c.kin, obs, medium, plan, opt).signal;

  std::vector<double> times;
  for (std::size_t i = sig.transient_samples(); i < sig.pressure.size(); ++i) times.push_back(sig.time(i));
  if (times.empty()) return {"rotating", INFINITY, tolerance, false, "no samples after the transient cut"};
  const std::vector<double> ref = rotating_point_force_reference(src, obs.position, medium, times);

  double peak = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    peak = std::max(peak, std::abs(ref[i]));
    worst = std::max(worst, std::abs(sig.pressure[sig.transient_samples() + i] - ref[i]));
  }
  std::ostringstream os;
  os << "max |dp| = " << worst << " Pa, peak " << peak << " Pa, " << ref.size() << " samples";
  return finish("rotating", worst / peak, tolerance, os.str());
}

ValidationResult validate_parseval(double tolerance) {
  const std::size_t n = 4096;
  const double fs = 1000.0;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = gauss(rng) + std::sin(2.0 * kPi * 100.0 * static_cast<double>(i) / n) + 0.25;
  PsdOptions opt;
  opt.n_segments = 1;
  opt.window = WindowKind::rectangular;
  const Spectrum s = psd(x, fs, opt);
  return finish("parseval", parseval_error(x, s), tolerance, "white noise + sine + offset, 4096 samples");
}

ValidationResult validate_decay(double tolerance, unsigned threads) {
  const FanParams params;
  const Medium medium;
  const SurfaceMesh mesh = build_fan_geometry(params);
  const RotationKinematics kin = RotationKinematics::from_params(params);
  const SamplingPlan plan = degree_step_plan(params.rotation_speed_n, 10, 6.0);
  const SurfacePressureField field = synth_baseline(mesh, kin, BaselineLoadingModel{}, plan);
  const Vec3 dir{1.0, 0.0, 0.0};
  const std::size_t per_rev = static_cast<std::size_t>(std::lround(plan.sample_rate() * params.rotation_period()));

  LoadingNoiseOptions opt;
  opt.threads = threads;
  const double near = periodic_rms(loading_noise(field, mesh, kin, {"5m", dir * 5.0}, medium, plan, opt).signal, per_rev);
  const double far = periodic_rms(loading_noise(field, mesh, kin, {"10m", dir * 10.0}, medium, plan, opt).signal, per_rev);
  const double ratio = far / near;
  std::ostringstream os;
  os << "RMS(10 m) / RMS(5 m) = " << ratio;
  return finish("decay", std::abs(ratio / 0.5 - 1.0), tolerance, os.str());
}

}  // namespace fantone
