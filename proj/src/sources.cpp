#include "fantone/sources.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fantone/csv_io.hpp"
#include "fantone/error.hpp"

namespace fantone {

namespace {
constexpr double kPi = std::numbers::pi;

double rotation_sign(const RotationKinematics& kin) { return kin.angular_speed < 0.0 ? -1.0 : 1.0; }

SurfacePressureField empty_field(const SurfaceMesh& mesh, const SamplingPlan& plan) {
  const std::size_t n = plan.sample_count();
  if (n < 2) fail(ErrorKind::config, "sampling plan yields fewer than 2 samples");
  return SurfacePressureField(plan.sample_rate(), 0.0, n, mesh.size());
}

// Baseline values for every sample and panel, optional jitter included.
SurfacePressureField baseline_field(const SurfaceMesh& mesh, const BaselineLoadingModel& model,
                                    const SamplingPlan& plan) {
  model.validate();
  SurfacePressureField field = empty_field(mesh, plan);
  std::vector<double> steady(mesh.size(), 0.0);
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const Panel& p = mesh.panels[j];
    switch (p.patch) {
      case Patch::blade:
        steady[j] = model.blade_pressure(p.side, p.chord_fraction.value_or(0.0), p.span_fraction.value_or(0.0));
        break;
      case Patch::shroud: steady[j] = model.shroud_pressure; break;
      case Patch::backplate: steady[j] = model.backplate_pressure; break;
    }
  }
  std::mt19937_64 rng(model.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool jitter = model.jitter_amplitude > 0.0;
  for (std::size_t i = 0; i < field.samples(); ++i)
    for (std::size_t j = 0; j < mesh.size(); ++j)
      field.at(i, j) = steady[j] + (jitter ? model.jitter_amplitude * gauss(rng) : 0.0);
  return field;
}

}  // namespace

SurfacePressureField::SurfacePressureField(double sample_rate, double t0, std::size_t samples, std::size_t panels)
    : sample_rate_(sample_rate), t0_(t0), samples_(samples), panels_(panels), data_(samples * panels, 0.0) {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    fail(ErrorKind::invalid_argument, "sample rate must be > 0");
}

std::vector<double> SurfacePressureField::panel_history(std::size_t panel) const {
  std::vector<double> h(samples_);
  for (std::size_t i = 0; i < samples_; ++i) h[i] = at(i, panel);
  return h;
}

void SurfacePressureField::check_bound_to(const SurfaceMesh& mesh) const {
  if (panels_ != mesh.size())
    fail(ErrorKind::invalid_argument, "pressure field has " + std::to_string(panels_) + " panels but mesh has " +
                                          std::to_string(mesh.size()));
  for (double v : data_)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "pressure field contains non-finite values");
}

SurfacePressureField combine(double a, const SurfacePressureField& x, double b, const SurfacePressureField& y) {
  if (x.samples() != y.samples() || x.panels() != y.panels() || x.sample_rate() != y.sample_rate() || x.t0() != y.t0())
    fail(ErrorKind::invalid_argument, "combine: fields are on different grids");
  SurfacePressureField out(x.sample_rate(), x.t0(), x.samples(), x.panels());
  for (std::size_t i = 0; i < x.samples(); ++i)
    for (std::size_t j = 0; j < x.panels(); ++j) out.at(i, j) = a * x.at(i, j) + b * y.at(i, j);
  return out;
}

double BaselineLoadingModel::pressure_side(double s) const {
  return pressure_side_te + (pressure_side_le - pressure_side_te) * (1.0 - s) * (1.0 - s);
}

double BaselineLoadingModel::suction_side(double s) const {
  return suction_side_te + (suction_side_le - suction_side_te) * (1.0 - s) * (1.0 - s);
}

double BaselineLoadingModel::spanwise_weight(double eta) const { return 1.0 + spanwise_slope * (eta - 0.5); }

double BaselineLoadingModel::blade_pressure(BladeSide side, double s, double eta) const {
  switch (side) {
    case BladeSide::pressure: return peak_pressure * pressure_side(s) * spanwise_weight(eta);
    case BladeSide::suction: return -peak_pressure * suction_side(s) * spanwise_weight(eta);
    case BladeSide::none: break;
  }
  return 0.0;
}

void BaselineLoadingModel::validate() const {
  if (!(peak_pressure >= 0.0)) fail(ErrorKind::config, "source.baseline.peak_pressure must be >= 0");
  if (!(jitter_amplitude >= 0.0)) fail(ErrorKind::config, "source.baseline.jitter_amplitude must be >= 0");
  for (double v : {pressure_side_le, pressure_side_te, suction_side_le, suction_side_te, spanwise_slope,
                   shroud_pressure, backplate_pressure})
    if (!std::isfinite(v)) fail(ErrorKind::config, "source.baseline profile values must be finite");
  if (std::abs(spanwise_slope) > 2.0) fail(ErrorKind::config, "source.baseline.spanwise_slope must lie in [-2, 2]");
}

double RecirculationModulation::weight(double s, double eta) const { return std::pow(s, q_s) * std::pow(eta, q_eta); }

double RecirculationModulation::shape(double x) const {
  if (sharpness <= 0.0) return std::cos(x);
  // Normalised von Mises bump: 1 at x = 0, -1 at x = pi, tends to cos x as sharpness -> 0.
  const double floor = std::exp(-2.0 * sharpness);
  return 2.0 * (std::exp(sharpness * (std::cos(x) - 1.0)) - floor) / (-std::expm1(-2.0 * sharpness)) - 1.0;
}

double RecirculationModulation::envelope(int blade, int blade_count, double t, double rotation_period, double sense,
                                         double s, double eta) const {
  const double dir = direction * (sense < 0.0 ? -1.0 : 1.0);
  const double arg = 2.0 * kPi * t / (period_multiplier * rotation_period) -
                     dir * 2.0 * kPi * blade / blade_count + phase;
  return 1.0 + depth * weight(s, eta) * shape(arg);
}

void RecirculationModulation::validate() const {
  if (!(depth >= 0.0)) fail(ErrorKind::config, "source.modulation.depth must be >= 0");
  if (!(period_multiplier > 0.0)) fail(ErrorKind::config, "source.modulation.period_multiplier must be > 0");
  if (direction != 1 && direction != -1) fail(ErrorKind::config, "source.modulation.direction must be +1 or -1");
  if (!(q_s >= 0.0) || !(q_eta >= 0.0)) fail(ErrorKind::config, "source.modulation exponents must be >= 0");
  if (!(sharpness >= 0.0)) fail(ErrorKind::config, "source.modulation.sharpness must be >= 0");
  if (!std::isfinite(phase)) fail(ErrorKind::config, "source.modulation.phase must be finite");
}

double calibrate_depth(const BaselineLoadingModel& model, const RecirculationModulation& mod,
                       double target_difference) {
  // Peak-to-peak of P * ps(1) * w(1,1) * depth * Phi, with Phi spanning [-1, 1].
  const double steady = model.blade_pressure(BladeSide::pressure, 1.0, 1.0) * mod.weight(1.0, 1.0);
  if (!(steady > 0.0)) fail(ErrorKind::invalid_argument, "calibrate_depth: trailing-edge loading is zero");
  return target_difference / (2.0 * steady);
}

SurfacePressureField synth_baseline(const SurfaceMesh& mesh, const RotationKinematics&,
                                    const BaselineLoadingModel& model, const SamplingPlan& plan) {
  return baseline_field(mesh, model, plan);
}

SurfacePressureField synth_modulated(const SurfaceMesh& mesh, const RotationKinematics& kin,
                                     const BaselineLoadingModel& model, const RecirculationModulation& mod,
                                     const SamplingPlan& plan) {
  mod.validate();
  SurfacePressureField field = baseline_field(mesh, model, plan);
  if (mod.depth == 0.0) return field;
  if (mod.depth > 1.0)
    warn("modulation depth " + std::to_string(mod.depth) +
         " flips the sign of the blade loading where the localisation weight is close to 1");

  const double period = kin.period();
  if (!std::isfinite(period)) fail(ErrorKind::invalid_argument, "synth_modulated needs a rotating surface");
  const double sense = rotation_sign(kin);
  const int z = mesh.params.blade_count_z;
  const bool jitter = model.jitter_amplitude > 0.0;
  // Re-derive the steady part so the jitter stays additive.
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const Panel& p = mesh.panels[j];
    if (p.patch != Patch::blade) continue;
    const double s = p.chord_fraction.value_or(0.0), eta = p.span_fraction.value_or(0.0);
    const double steady = model.blade_pressure(p.side, s, eta);
    for (std::size_t i = 0; i < field.samples(); ++i) {
      const double a = mod.envelope(p.blade_index, z, field.time(i), period, sense, s, eta);
      const double noise = jitter ? field.at(i, j) - steady : 0.0;
      field.at(i, j) = steady * a + noise;
    }
  }
  return field;
}

IngestedField ingest_pressure(const std::string& geometry_csv, const std::string& pressure_csv) {
  IngestedField out;
  out.mesh = read_geometry_csv(geometry_csv);
  out.field = read_pressure_csv(pressure_csv, out.mesh);
  return out;
}

Vec3 ForceModel::local(double t) const { return mean + amplitude * std::sin(2.0 * kPi * frequency * t + phase); }

Vec3 ForceModel::local_rate(double t) const {
  const double w = 2.0 * kPi * frequency;
  return amplitude * (w * std::cos(w * t + phase));
}

Vec3 PointForceSource::position_at(double t) const {
  if (trajectory == Trajectory::fixed) return position;
  return rotate_z(position, angular_speed * t);
}

Vec3 PointForceSource::velocity_at(double t) const {
  if (trajectory == Trajectory::fixed) return {};
  return cross(Vec3{0, 0, angular_speed}, position_at(t));
}

Vec3 PointForceSource::acceleration_at(double t) const {
  if (trajectory == Trajectory::fixed) return {};
  return cross(Vec3{0, 0, angular_speed}, velocity_at(t));
}

Vec3 PointForceSource::force_at(double t) const {
  if (trajectory == Trajectory::fixed) return force.local(t);
  return rotate_z(force.local(t), angular_speed * t);
}

Vec3 PointForceSource::force_rate_at(double t) const {
  if (trajectory == Trajectory::fixed) return force.local_rate(t);
  const Vec3 f = force_at(t);
  return rotate_z(force.local_rate(t), angular_speed * t) + cross(Vec3{0, 0, angular_speed}, f);
}

double PointForceSource::speed() const {
  if (trajectory == Trajectory::fixed) return 0.0;
  return std::abs(angular_speed) * std::hypot(position.x, position.y);
}

void PointForceSource::validate(double sound_speed) const {
  if (!(speed() < sound_speed)) {
    std::ostringstream os;
    os << "point force moves at " << speed() << " m/s, not subsonic for c0 = " << sound_speed << " m/s";
    fail(ErrorKind::invalid_argument, os.str());
  }
}

PointForceSamples point_force_signal(const PointForceSource& src, const SamplingPlan& plan, double sound_speed) {
  src.validate(sound_speed);
  PointForceSamples out;
  const std::size_t n = plan.sample_count();
  out.time.resize(n);
  out.position.resize(n);
  out.force.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * plan.sample_interval();
    out.time[i] = t;
    out.position[i] = src.position_at(t);
    out.force[i] = src.force_at(t);
  }
  return out;
}

}  // namespace fantone
