#include "fantone/geom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fantone/error.hpp"

namespace fantone {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665,
                                                 0.5688888888888889, 0.4786286704993665,
                                                 0.2369268850561891};

// Circular-arc camber line between r1 and r2. The arc meets the inner and
// outer circles at the requested metal angles (measured from the tangent).
class CamberLine {
 public:
  CamberLine(const FanParams& p, double sense) : sense_(sense) {
    r1_ = 0.5 * p.intake_diameter_d1;
    r2_ = 0.5 * p.fan_diameter_d2;
    const double c1 = std::cos(deg2rad(p.blade_inlet_angle));
    const double c2 = std::cos(deg2rad(p.blade_outlet_angle));
    const double denom = 2.0 * (r2_ * c2 - r1_ * c1);
    if (!(denom > 0.0)) fail(ErrorKind::config, "blade angles do not admit a circular-arc blade");
    arc_radius_ = (r2_ * r2_ - r1_ * r1_) / denom;
    const double rho2 = r1_ * r1_ + arc_radius_ * arc_radius_ - 2.0 * r1_ * arc_radius_ * c1;
    if (!(rho2 > 0.0)) fail(ErrorKind::config, "blade angles do not admit a circular-arc blade");
    center_distance_ = std::sqrt(rho2);
    phi1_ = polar(r1_);
  }

  double radius(double s) const { return r1_ + s * (r2_ - r1_); }

  // Point on the camber line at chord fraction s (radial parameterisation).
  Vec3 point(double s) const {
    const double r = radius(s);
    // Backward curvature: the tip trails the root against the rotation.
    const double theta = -sense_ * std::abs(polar(r) - phi1_);
    return {r * std::cos(theta), r * std::sin(theta), 0.0};
  }

  Vec3 tangent(double s) const {
    const double h = 1e-6;
    const double a = std::max(0.0, s - h), b = std::min(1.0, s + h);
    return (point(b) - point(a)) / (b - a);
  }

 private:
  double polar(double r) const {
    const double c = (r * r + center_distance_ * center_distance_ - arc_radius_ * arc_radius_) /
                     (2.0 * r * center_distance_);
    if (c < -1.0 - 1e-12 || c > 1.0 + 1e-12)
      fail(ErrorKind::config, "blade angles do not admit a circular-arc blade");
    return std::acos(std::clamp(c, -1.0, 1.0));
  }

  double sense_;
  double r1_ = 0, r2_ = 0, arc_radius_ = 0, center_distance_ = 0, phi1_ = 0;
};

double shroud_height(const FanParams& p, double r) {
  const double r1 = 0.5 * p.intake_diameter_d1, r2 = 0.5 * p.fan_diameter_d2;
  return p.blade_inlet_height + (p.fan_width_b2 - p.blade_inlet_height) * (r - r1) / (r2 - r1);
}

double sense_sign(RotationSense sense) {
  // Clockwise seen from the inlet (+z looking down) is a negative rotation about +z.
  return sense == RotationSense::clockwise_from_inlet ? -1.0 : 1.0;
}

}  // namespace

std::string to_string(RotationSense sense) {
  return sense == RotationSense::clockwise_from_inlet ? "clockwise_from_inlet" : "counterclockwise_from_inlet";
}

RotationSense rotation_sense_from_string(const std::string& text) {
  if (text == "clockwise_from_inlet") return RotationSense::clockwise_from_inlet;
  if (text == "counterclockwise_from_inlet") return RotationSense::counterclockwise_from_inlet;
  fail(ErrorKind::config, "unknown rotation sense '" + text + "'");
}

std::string to_string(Patch patch) {
  switch (patch) {
    case Patch::blade: return "blade";
    case Patch::shroud: return "shroud";
    case Patch::backplate: return "backplate";
  }
  return "blade";
}

Patch patch_from_string(const std::string& text) {
  if (text == "blade") return Patch::blade;
  if (text == "shroud") return Patch::shroud;
  if (text == "backplate") return Patch::backplate;
  fail(ErrorKind::parse, "unknown patch '" + text + "'");
}

void FanParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::config, std::string(name) + " must be > 0");
  };
  positive(intake_diameter_d1, "intake_diameter_d1");
  positive(fan_diameter_d2, "fan_diameter_d2");
  positive(fan_width_b2, "fan_width_b2");
  positive(gap_width_w, "gap_width_w");
  positive(rotation_speed_n, "rotation_speed_n");
  positive(blade_inlet_height, "blade_inlet_height");
  if (!(intake_diameter_d1 < fan_diameter_d2))
    fail(ErrorKind::config, "intake_diameter_d1 must be smaller than fan_diameter_d2");
  if (blade_count_z < 1) fail(ErrorKind::config, "blade_count_z must be >= 1");
  if (chordwise_panels < 1 || spanwise_panels < 1 || azimuthal_panels < 1)
    fail(ErrorKind::config, "panel resolution counts must be >= 1");
  if (!(blade_inlet_angle > 0.0 && blade_inlet_angle < 90.0 && blade_outlet_angle > 0.0 && blade_outlet_angle < 90.0))
    fail(ErrorKind::config, "blade angles must lie in (0, 90) degrees");
}

const Panel& SurfaceMesh::panel(int panel_id) const {
  if (panel_id < 0 || static_cast<std::size_t>(panel_id) >= panels.size())
    fail(ErrorKind::invalid_argument, "unknown panel_id " + std::to_string(panel_id));
  return panels[static_cast<std::size_t>(panel_id)];
}

double SurfaceMesh::patch_area(Patch patch) const {
  double total = 0.0;
  for (const auto& p : panels)
    if (p.patch == patch) total += p.area;
  return total;
}

void SurfaceMesh::validate() const {
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Panel& p = panels[i];
    if (p.panel_id != static_cast<int>(i))
      fail(ErrorKind::config, "panel ids must be dense from 0; found " + std::to_string(p.panel_id) +
                                  " at position " + std::to_string(i));
    if (!(p.area > 0.0)) fail(ErrorKind::config, "panel " + std::to_string(i) + " has non-positive area");
    if (std::abs(norm(p.normal) - 1.0) > 1e-9)
      fail(ErrorKind::config, "panel " + std::to_string(i) + " normal is not unit length");
  }
}

RotationKinematics RotationKinematics::from_params(const FanParams& params) {
  RotationKinematics kin;
  kin.angular_speed = sense_sign(params.rotation_sense) * 2.0 * kPi * params.rotation_speed_n / 60.0;
  return kin;
}

double RotationKinematics::period() const {
  if (angular_speed == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * kPi / std::abs(angular_speed);
}

SurfaceMesh build_fan_geometry(const FanParams& params) {
  params.validate();
  const double sense = sense_sign(params.rotation_sense);
  const CamberLine camber(params, sense);

  SurfaceMesh mesh;
  mesh.params = params;
  const int nc = params.chordwise_panels, ns = params.spanwise_panels, na = params.azimuthal_panels;
  const int z = params.blade_count_z;
  mesh.panels.reserve(static_cast<std::size_t>(2 * z * nc * ns + 2 * nc * na));

  // Reference blade (blade 0): one set of panels per chord/span cell, then
  // duplicated per side. The blade is a zero-thickness ruled surface; side
  // panels share centres and carry opposite normals.
  struct Cell {
    Vec3 center, normal;
    double area, s, eta;
  };
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(nc * ns));
  for (int i = 0; i < nc; ++i) {
    const double sa = static_cast<double>(i) / nc, sb = static_cast<double>(i + 1) / nc;
    // Length-weighted height integral over the chord interval.
    double height_integral = 0.0;
    for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
      const double s = 0.5 * (sa + sb) + 0.5 * (sb - sa) * kGaussNodes[g];
      height_integral += kGaussWeights[g] * shroud_height(params, camber.radius(s)) * norm(camber.tangent(s));
    }
    height_integral *= 0.5 * (sb - sa);

    const double sm = 0.5 * (sa + sb);
    const Vec3 pm = camber.point(sm);
    const double hm = shroud_height(params, camber.radius(sm));
    Vec3 normal = normalized(cross(Vec3{0, 0, 1}, normalized(camber.tangent(sm))));
    // Pressure side faces the direction of motion.
    const Vec3 motion = cross(Vec3{0, 0, sense}, pm);
    if (dot(normal, motion) < 0.0) normal = -normal;

    for (int j = 0; j < ns; ++j) {
      const double ea = static_cast<double>(j) / ns, eb = static_cast<double>(j + 1) / ns;
      const double em = 0.5 * (ea + eb);
      cells.push_back({Vec3{pm.x, pm.y, em * hm}, normal, (eb - ea) * height_integral, sm, em});
    }
  }

  int next_id = 0;
  for (int b = 0; b < z; ++b) {
    const double angle = 2.0 * kPi * b / z;
    for (BladeSide side : {BladeSide::pressure, BladeSide::suction}) {
      const double flip = side == BladeSide::pressure ? 1.0 : -1.0;
      for (const Cell& c : cells) {
        Panel p;
        p.panel_id = next_id++;
        p.patch = Patch::blade;
        p.blade_index = b;
        p.side = side;
        p.center = rotate_z(c.center, angle);
        p.normal = rotate_z(c.normal * flip, angle);
        p.area = c.area;
        p.chord_fraction = c.s;
        p.span_fraction = c.eta;
        mesh.panels.push_back(p);
      }
    }
  }

  const double r1 = 0.5 * params.intake_diameter_d1, r2 = 0.5 * params.fan_diameter_d2;
  const double dphi = 2.0 * kPi / na;

  // Backplate: flat annulus at z = 0 wetted from the passage side.
  for (int i = 0; i < nc; ++i) {
    const double ra = r1 + (r2 - r1) * i / nc, rb = r1 + (r2 - r1) * (i + 1) / nc;
    for (int k = 0; k < na; ++k) {
      const double phi = (k + 0.5) * dphi;
      const double rm = 0.5 * (ra + rb);
      Panel p;
      p.panel_id = next_id++;
      p.patch = Patch::backplate;
      p.center = {rm * std::cos(phi), rm * std::sin(phi), 0.0};
      p.normal = {0.0, 0.0, 1.0};
      p.area = 0.5 * dphi * (rb * rb - ra * ra);
      mesh.panels.push_back(p);
    }
  }

  // Shroud: conical frustum z = h(r), normal pointing down into the passage.
  const double slope = (params.fan_width_b2 - params.blade_inlet_height) / (r2 - r1);
  for (int i = 0; i < nc; ++i) {
    const double ra = r1 + (r2 - r1) * i / nc, rb = r1 + (r2 - r1) * (i + 1) / nc;
    const double slant = std::hypot(rb - ra, slope * (rb - ra));
    for (int k = 0; k < na; ++k) {
      const double phi = (k + 0.5) * dphi;
      const double rm = 0.5 * (ra + rb);
      const Vec3 radial{std::cos(phi), std::sin(phi), 0.0};
      Panel p;
      p.panel_id = next_id++;
      p.patch = Patch::shroud;
      p.center = {rm * radial.x, rm * radial.y, shroud_height(params, rm)};
      p.normal = normalized(Vec3{slope * radial.x, slope * radial.y, -1.0});
      p.area = dphi * rm * slant;
      mesh.panels.push_back(p);
    }
  }

  mesh.validate();
  return mesh;
}

void assign_blade_sides(SurfaceMesh& mesh) {
  const double sense = sense_sign(mesh.params.rotation_sense);
  for (auto& p : mesh.panels) {
    if (p.patch != Patch::blade) {
      p.side = BladeSide::none;
      continue;
    }
    const Vec3 motion = cross(Vec3{0, 0, sense}, p.center);
    p.side = dot(p.normal, motion) >= 0.0 ? BladeSide::pressure : BladeSide::suction;
  }
}

PanelState rotate_state(const Vec3& center, const Vec3& normal, const RotationKinematics& kin, double t) {
  if (!std::isfinite(t)) fail(ErrorKind::invalid_argument, "panel_state: time must be finite");
  const double angle = kin.angular_speed * t;
  PanelState s;
  s.position = rotate_z(center, angle);
  s.normal = rotate_z(normal, angle);
  s.velocity = cross(Vec3{0.0, 0.0, kin.angular_speed}, s.position);
  return s;
}

PanelState panel_state(const SurfaceMesh& mesh, const RotationKinematics& kin, int panel_id, double t) {
  const Panel& p = mesh.panel(panel_id);
  return rotate_state(p.center, p.normal, kin, t);
}

double blade_passing_frequency(int blade_count, double rotation_speed_rpm, int harmonic) {
  if (blade_count < 1) fail(ErrorKind::invalid_argument, "blade count must be >= 1");
  if (!(rotation_speed_rpm > 0.0)) fail(ErrorKind::invalid_argument, "rotation speed must be > 0");
  if (harmonic < 0) fail(ErrorKind::invalid_argument, "harmonic must be >= 0");
  return (harmonic + 1) * blade_count * rotation_speed_rpm / 60.0;
}

double tip_mach(const FanParams& params, double sound_speed) {
  if (!(sound_speed > 0.0)) fail(ErrorKind::invalid_argument, "sound speed must be > 0");
  return kPi * params.fan_diameter_d2 * (params.rotation_speed_n / 60.0) / sound_speed;
}

Compactness compactness(double radius, double tone_frequency, double sound_speed) {
  if (!(sound_speed > 0.0) || radius < 0.0 || tone_frequency < 0.0)
    fail(ErrorKind::invalid_argument, "compactness: radius, frequency and sound speed must be non-negative");
  Compactness c;
  c.wavelength = tone_frequency > 0.0 ? sound_speed / tone_frequency : std::numeric_limits<double>::infinity();
  c.ratio = radius / c.wavelength;
  c.compact = c.ratio < kCompactnessThreshold;
  return c;
}

std::size_t SamplingPlan::sample_count() const {
  return static_cast<std::size_t>(std::floor(record_duration * sample_rate() + 1e-9));
}

bool SamplingPlan::check_tone(double frequency) const {
  if (frequency > nyquist()) {
    std::ostringstream os;
    os << "tone at " << frequency << " Hz exceeds the resolvable maximum " << nyquist() << " Hz";
    warn(os.str());
    return false;
  }
  return true;
}

SamplingPlan sampling_plan(double solver_dt, int record_stride, double record_duration) {
  if (!(solver_dt > 0.0)) fail(ErrorKind::config, "plan.solver_dt must be > 0");
  if (record_stride < 1) fail(ErrorKind::config, "plan.record_stride must be >= 1");
  if (!(record_duration > 0.0)) fail(ErrorKind::config, "plan.record_duration must be > 0");
  return SamplingPlan{solver_dt, record_stride, record_duration};
}

double duct_reynolds(double volume_flow, double duct_diameter, double kinematic_viscosity) {
  if (!(duct_diameter > 0.0) || !(kinematic_viscosity > 0.0))
    fail(ErrorKind::invalid_argument, "duct diameter and viscosity must be > 0");
  const double velocity = 4.0 * volume_flow / (kPi * duct_diameter * duct_diameter);
  return velocity * duct_diameter / kinematic_viscosity;
}

TurbulenceBoundary turbulence_bc(double reynolds, double inlet_diameter, std::optional<double> stated_length_scale) {
  if (!(reynolds > 0.0)) fail(ErrorKind::invalid_argument, "Reynolds number must be > 0");
  if (!(inlet_diameter > 0.0)) fail(ErrorKind::invalid_argument, "inlet diameter must be > 0");
  TurbulenceBoundary bc;
  bc.intensity = 0.16 * std::pow(reynolds, -1.0 / 8.0);
  bc.length_scale = 0.7 * inlet_diameter;
  if (stated_length_scale && std::abs(*stated_length_scale - bc.length_scale) > 0.01 * bc.length_scale) {
    std::ostringstream os;
    os << "turbulence length scale 0.7*d = " << bc.length_scale << " m differs from the stated "
       << *stated_length_scale << " m";
    warn(os.str());
  }
  return bc;
}

}  // namespace fantone
