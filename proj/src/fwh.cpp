#include "fantone/fwh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fantone/error.hpp"
#include "fantone/parallel.hpp"

namespace fantone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kPanelsPerChunk = 16;
constexpr int kStencil = 6;  // Lagrange nodes for observer-time resampling

// Kinematic and loading state of one compact source at one emission time.
struct SourceState {
  Vec3 position, velocity, acceleration;
  Vec3 load, load_rate;  // l_i (or F_i) and its emission-time derivative
};

struct Radiation {
  double pressure;  // contribution to p' at the observer
  double arrival;   // observer time
  double doppler;   // 1 - M_r
};

// Compact loading-noise kernel:
//   4 pi p' = ldot_r / (c r D^2) + (l_r - l_M) / (r^2 D^2)
//             + l_r (r Mdot_r + c (M_r - M^2)) / (c r^2 D^3),   D = 1 - M_r
Radiation radiate(const SourceState& s, const Vec3& observer, double c, double tau) {
  const Vec3 rv = observer - s.position;
  const double r = norm(rv);
  const Vec3 rh = rv / r;
  const Vec3 mach = s.velocity / c;
  const Vec3 mach_rate = s.acceleration / c;
  const double mr = dot(mach, rh);
  const double d = 1.0 - mr;
  if (!(d > 0.0)) {
    std::ostringstream os;
    os << "supersonic source: 1 - M_r = " << d << " at emission time " << tau;
    fail(ErrorKind::numeric, os.str());
  }
  const double lr = dot(s.load, rh);
  const double ldr = dot(s.load_rate, rh);
  const double lm = dot(s.load, mach);
  const double m2 = dot(mach, mach);
  const double mdr = dot(mach_rate, rh);
  const double d2 = d * d;
  const double p = ldr / (c * r * d2) + (lr - lm) / (r * r * d2) + lr * (r * mdr + c * (mr - m2)) / (c * r * r * d2 * d);
  return {p / (4.0 * kPi), tau + r / c, d};
}

// Pressure rate on the sample grid: 4th-order central differences in the
// interior, 2nd-order next to the ends, one-sided 2nd order at the ends.
std::vector<double> pressure_rate(std::span<const double> p, double h) {
  const std::size_t n = p.size();
  std::vector<double> dp(n, 0.0);
  for (std::size_t i = 2; i + 2 < n; ++i)
    dp[i] = (-p[i + 2] + 8.0 * p[i + 1] - 8.0 * p[i - 1] + p[i - 2]) / (12.0 * h);
  if (n >= 3) {
    dp[0] = (-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * h);
    dp[n - 1] = (3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3]) / (2.0 * h);
    dp[1] = (p[2] - p[0]) / (2.0 * h);
    dp[n - 2] = (p[n - 1] - p[n - 3]) / (2.0 * h);
  }
  return dp;
}

// Rotation angle omega * tau reduced to (-pi, pi] in extended precision. The
// blade contributions cancel to many digits, so an unreduced angle of a few
// hundred radians leaves a visible symmetry-breaking floor.
double reduced_angle(double omega, double t0, std::size_t sample, std::size_t sub, int substeps, double h) {
  using ld = long double;
  const ld tau = static_cast<ld>(t0) + (static_cast<ld>(sample) + static_cast<ld>(sub) / substeps) * static_cast<ld>(h);
  const ld two_pi = 6.283185307179586476925286766559005768L;
  return static_cast<double>(std::remainder(static_cast<ld>(omega) * tau, two_pi));
}

// Lagrange interpolation through kStencil nodes starting at `first`.
double lagrange(const double* x, const double* y, double t) {
  const double origin = x[0];
  std::array<double, kStencil> xs;
  for (int i = 0; i < kStencil; ++i) xs[i] = x[i] - origin;
  const double u = t - origin;
  double sum = 0.0;
  for (int i = 0; i < kStencil; ++i) {
    double w = 1.0;
    for (int j = 0; j < kStencil; ++j)
      if (j != i) w *= (u - xs[j]) / (xs[i] - xs[j]);
    sum += w * y[i];
  }
  return sum;
}

}  // namespace

void Medium::validate() const {
  if (!(density > 0.0) || !(sound_speed > 0.0) || !(reference_pressure > 0.0))
    fail(ErrorKind::config, "medium density, sound speed and reference pressure must be > 0");
}

ObserverSetup ObserverSetup::defaults(const FanParams& params) {
  ObserverSetup setup;
  setup.observers.push_back({"M1", Vec3{1.0, 0.0, params.blade_inlet_height + 1.0}});
  setup.observers.push_back({"M2", Vec3{0.5, 0.0, -1.0}});
  return setup;
}

std::size_t AcousticSignal::transient_samples() const {
  const double n = std::ceil(transient_cut * sample_rate - 1e-9);
  return n <= 0.0 ? 0 : std::min(pressure.size(), static_cast<std::size_t>(n));
}

std::vector<double> AcousticSignal::analysed() const {
  return {pressure.begin() + static_cast<std::ptrdiff_t>(transient_samples()), pressure.end()};
}

LoadingNoiseResult loading_noise(const SurfacePressureField& field, const SurfaceMesh& mesh,
                                 const RotationKinematics& kin, const Observer& observer, const Medium& medium,
                                 const SamplingPlan& plan, const LoadingNoiseOptions& options) {
  medium.validate();
  field.check_bound_to(mesh);
  if (options.substeps < 1) fail(ErrorKind::invalid_argument, "solver substeps must be >= 1");
  const double fs = field.sample_rate();
  if (std::abs(plan.sample_rate() - fs) > 1e-6 * fs) {
    std::ostringstream os;
    os << "pressure field sample rate " << fs << " Hz does not match the plan (" << plan.sample_rate() << " Hz)";
    fail(ErrorKind::invalid_argument, os.str());
  }
  const std::size_t n = plan.sample_count();
  if (n > field.samples())
    fail(ErrorKind::invalid_argument, "plan record duration exceeds the pressure field duration");
  if (n < 5) fail(ErrorKind::invalid_argument, "loading_noise needs at least 5 pressure samples");

  const double c = medium.sound_speed;
  const double omega = kin.angular_speed;
  const Vec3 spin{0.0, 0.0, omega};
  const Vec3 x = observer.position;

  // Source region: the swept cylinder of the panel centres.
  double r_max = 0.0, z_min = std::numeric_limits<double>::infinity(), z_max = -z_min;
  for (const Panel& p : mesh.panels) {
    r_max = std::max(r_max, std::hypot(p.center.x, p.center.y));
    z_min = std::min(z_min, p.center.z);
    z_max = std::max(z_max, p.center.z);
    if (norm(x - p.center) < 1e-9 && omega == 0.0) fail(ErrorKind::invalid_argument, "observer coincides with a panel");
  }
  if (std::hypot(x.x, x.y) <= r_max && x.z >= z_min && x.z <= z_max)
    fail(ErrorKind::invalid_argument, "observer '" + observer.name + "' lies inside the source region");
  if (std::abs(omega) * r_max >= c) fail(ErrorKind::numeric, "panel speed is not subsonic");

  const int substeps = options.substeps;
  const double h = 1.0 / fs;
  const std::size_t fine = (n - 1) * static_cast<std::size_t>(substeps) + 1;
  std::vector<double> tau(fine), cos_a(fine), sin_a(fine);
  for (std::size_t m = 0; m < fine; ++m) {
    const std::size_t i = m / substeps, f = m % substeps;
    tau[m] = field.t0() + (static_cast<double>(i) + static_cast<double>(f) / substeps) * h;
    const double angle = reduced_angle(omega, field.t0(), i, f, substeps, h);
    cos_a[m] = std::cos(angle);
    sin_a[m] = std::sin(angle);
  }
  auto rotate = [&](const Vec3& v, std::size_t m) {
    return Vec3{cos_a[m] * v.x - sin_a[m] * v.y, sin_a[m] * v.x + cos_a[m] * v.y, v.z};
  };
  auto arrival = [&](const Panel& p, std::size_t m) { return tau[m] + norm(x - rotate(p.center, m)) / c; };

  // Usable source nodes skip the two samples at each end whose pressure rate
  // is only second order; the arrival window keeps a full interpolation
  // stencil inside them.
  const std::size_t edge = n >= 9 ? 2 * static_cast<std::size_t>(substeps) : 0;
  const std::size_t m_lo = edge, m_hi = fine - 1 - edge;
  const std::size_t lead = kStencil / 2 - 1;
  if (m_hi - m_lo < static_cast<std::size_t>(kStencil)) fail(ErrorKind::invalid_argument, "record too short");
  double window_begin = -std::numeric_limits<double>::infinity();
  double window_end = std::numeric_limits<double>::infinity();
  for (const Panel& p : mesh.panels) {
    window_begin = std::max(window_begin, arrival(p, m_lo + lead));
    window_end = std::min(window_end, arrival(p, m_hi - kStencil / 2));
  }
  const double t_origin = field.t0();
  long k_first = static_cast<long>(std::ceil((window_begin - t_origin) * fs));
  while (t_origin + static_cast<double>(k_first) * h < window_begin) ++k_first;
  long k_last = static_cast<long>(std::floor((window_end - t_origin) * fs));
  while (t_origin + static_cast<double>(k_last) * h > window_end) --k_last;
  if (k_last - k_first + 1 < 4)
    fail(ErrorKind::numeric, "insufficient overlap of panel arrival windows at observer '" + observer.name + "'");
  const std::size_t count = static_cast<std::size_t>(k_last - k_first + 1);
  std::vector<double> obs_time(count);
  for (std::size_t k = 0; k < count; ++k) obs_time[k] = t_origin + static_cast<double>(k_first + static_cast<long>(k)) * h;

  const std::size_t chunks = (mesh.size() + kPanelsPerChunk - 1) / kPanelsPerChunk;
  std::vector<std::vector<double>> partial(chunks);
  std::vector<double> chunk_doppler(chunks, 1.0);

  parallel_for(chunks, options.threads, [&](std::size_t chunk) {
    std::vector<double> acc(count, 0.0);
    std::vector<double> samples(n), q(fine), arr(fine);
    double min_d = std::numeric_limits<double>::infinity();
    const std::size_t end = std::min(mesh.size(), (chunk + 1) * kPanelsPerChunk);
    for (std::size_t j = chunk * kPanelsPerChunk; j < end; ++j) {
      const Panel& panel = mesh.panels[j];
      for (std::size_t i = 0; i < n; ++i) samples[i] = field.at(i, j);
      const std::vector<double> rate = pressure_rate(samples, h);
      const bool silent = std::all_of(samples.begin(), samples.end(), [](double v) { return v == 0.0; });
      const double scale = panel.area;

      for (std::size_t m = 0; m < fine; ++m) {
        const std::size_t i = m / substeps;
        const double u = static_cast<double>(m % substeps) / substeps;
        double p = samples[i], dp = rate[i];
        if (u > 0.0) {
          const double u2 = u * u, u3 = u2 * u;
          p = (2 * u3 - 3 * u2 + 1) * samples[i] + (u3 - 2 * u2 + u) * h * rate[i] + (-2 * u3 + 3 * u2) * samples[i + 1] +
              (u3 - u2) * h * rate[i + 1];
          dp = ((6 * u2 - 6 * u) * samples[i] + (3 * u2 - 4 * u + 1) * h * rate[i] + (-6 * u2 + 6 * u) * samples[i + 1] +
                (3 * u2 - 2 * u) * h * rate[i + 1]) / h;
        }
        SourceState s;
        s.position = rotate(panel.center, m);
        s.velocity = cross(spin, s.position);
        s.acceleration = cross(spin, s.velocity);
        const Vec3 normal = rotate(panel.normal, m);
        s.load = normal * p;
        s.load_rate = normal * dp + cross(spin, normal) * p;
        const Radiation rad = radiate(s, x, c, tau[m]);
        q[m] = silent ? 0.0 : rad.pressure * scale;
        arr[m] = rad.arrival;
        min_d = std::min(min_d, rad.doppler);
      }
      if (silent) continue;

      std::size_t idx = m_lo + lead;
      for (std::size_t k = 0; k < count; ++k) {
        const double t = obs_time[k];
        while (idx + 1 <= m_hi && arr[idx + 1] <= t) ++idx;
        const std::size_t first = std::min(idx - lead, m_hi + 1 - kStencil);
        acc[k] += lagrange(&arr[first], &q[first], t);
      }
    }
    partial[chunk] = std::move(acc);
    chunk_doppler[chunk] = min_d;
  });

  LoadingNoiseResult result;
  AcousticSignal& sig = result.signal;
  sig.sample_rate = fs;
  sig.t0 = obs_time.front();
  sig.pressure.assign(count, 0.0);
  for (const auto& part : partial)
    for (std::size_t k = 0; k < count; ++k) sig.pressure[k] += part[k];
  const double period = kin.period();
  sig.transient_cut = options.transient_cut >= 0.0 ? options.transient_cut : (std::isfinite(period) ? period : 0.0);
  result.min_doppler = *std::min_element(chunk_doppler.begin(), chunk_doppler.end());
  return result;
}

std::vector<double> compact_dipole_reference(const ForceHistory& force, const Vec3& source, const Vec3& observer,
                                             const Medium& medium, std::span<const double> observer_times) {
  medium.validate();
  const Vec3 rv = observer - source;
  const double r = norm(rv);
  if (!(r > 0.0)) fail(ErrorKind::invalid_argument, "observer coincides with the dipole");
  const Vec3 rh = rv / r;
  const double c = medium.sound_speed;
  std::vector<double> out(observer_times.size());
  for (std::size_t k = 0; k < observer_times.size(); ++k) {
    const double tau = observer_times[k] - r / c;
    out[k] = (dot(force.rate(tau), rh) / (c * r) + dot(force.force(tau), rh) / (r * r)) / (4.0 * kPi);
  }
  return out;
}

double retarded_time_solve(const Vec3& observer, const Trajectory& trajectory, double t, double sound_speed) {
  if (!(sound_speed > 0.0)) fail(ErrorKind::invalid_argument, "sound speed must be > 0");
  auto g = [&](double tau) { return t - tau - norm(observer - trajectory.position(tau)) / sound_speed; };

  double hi = std::min(t, trajectory.end);
  double g_hi = g(hi);
  if (g_hi > 0.0) fail(ErrorKind::numeric, "emission time lies after the end of the trajectory");
  if (std::abs(g_hi) < 1e-13) return hi;

  double step = std::max(-g_hi, 1e-12);
  double lo = hi - 2.0 * step;
  double g_lo = 0.0;
  for (int iter = 0;; ++iter) {
    if (lo < trajectory.begin) lo = trajectory.begin;
    g_lo = g(lo);
    if (g_lo >= 0.0) break;
    if (lo == trajectory.begin || iter > 200)
      fail(ErrorKind::numeric, "emission time lies before the start of the trajectory");
    hi = lo;
    step *= 2.0;
    lo = hi - step;
  }

  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) < 1e-13 || mid == lo || mid == hi) return mid;
    if (gm > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> rotating_point_force_reference(const PointForceSource& src, const Vec3& observer,
                                                   const Medium& medium, std::span<const double> observer_times) {
  medium.validate();
  src.validate(medium.sound_speed);
  const double c = medium.sound_speed;
  Trajectory traj{[&](double tau) { return src.position_at(tau); }};
  std::vector<double> out(observer_times.size());
  for (std::size_t k = 0; k < observer_times.size(); ++k) {
    const double tau = retarded_time_solve(observer, traj, observer_times[k], c);
    SourceState s;
    s.position = src.position_at(tau);
    s.velocity = src.velocity_at(tau);
    s.acceleration = src.acceleration_at(tau);
    s.load = src.force_at(tau);
    s.load_rate = src.force_rate_at(tau);
    out[k] = radiate(s, observer, c, tau).pressure;
  }
  return out;
}

AcousticSignal rotating_point_force_reference(const PointForceSource& src, const Observer& observer,
                                              const Medium& medium, const SamplingPlan& plan) {
  const double fs = plan.sample_rate();
  const double orbit = norm(src.position);
  const double far = (norm(observer.position) + orbit) / medium.sound_speed;
  const double near = std::max(0.0, norm(observer.position) - orbit) / medium.sound_speed;
  const double duration = static_cast<double>(plan.sample_count() - 1) / fs;
  const long first = static_cast<long>(std::ceil(far * fs));
  const long last = static_cast<long>(std::floor((duration + near) * fs));
  if (last < first) fail(ErrorKind::invalid_argument, "plan too short for the propagation delay");
  AcousticSignal sig;
  sig.sample_rate = fs;
  sig.t0 = static_cast<double>(first) / fs;
  std::vector<double> times(static_cast<std::size_t>(last - first + 1));
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = static_cast<double>(first + static_cast<long>(k)) / fs;
  sig.pressure = rotating_point_force_reference(src, observer.position, medium, times);
  return sig;
}

SinglePanelCase single_panel_mesh(const Vec3& center, const Vec3& normal, double area, double angular_speed) {
  SinglePanelCase out;
  Panel p;
  p.panel_id = 0;
  p.patch = Patch::backplate;
  p.center = center;
  p.normal = normalized(normal);
  p.area = area;
  out.mesh.panels.push_back(p);
  out.mesh.validate();
  out.kin.angular_speed = angular_speed;
  return out;
}

}  // namespace fantone
