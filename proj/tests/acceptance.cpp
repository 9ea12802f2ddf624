// Acceptance run: one PASS/FAIL line per primary criterion. Tolerances are
// fixed here; reference values are computed in this file from closed forms
// and do not call the library's own oracle helpers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fantone/config.hpp"
#include "fantone/error.hpp"
#include "fantone/fwh.hpp"
#include "fantone/geom.hpp"
#include "fantone/sources.hpp"
#include "fantone/spectra.hpp"

namespace fs = std::filesystem;
using namespace fantone;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// -- independent references ---------------------------------------------------

// Compact loading source seen by a fixed observer: the point-force form of the
// retarded loading integral, evaluated at the emission time found by
// bisection on tau + |x - y(tau)| / c = t.
struct MovingForce {
  std::function<Vec3(double)> y, v, a;  // position, velocity, acceleration
  std::function<Vec3(double)> f, fdot;  // force on the fluid and its rate
};

double emission_time(const MovingForce& s, const Vec3& x, double t, double c) {
  auto g = [&](double tau) { return tau + norm(x - s.y(tau)) / c - t; };
  double hi = t, lo = t - norm(x - s.y(t)) / c;
  double step = 1e-3;
  while (g(lo) > 0.0) {
    lo -= step;
    step *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double point_force_pressure(const MovingForce& s, const Vec3& x, double t, double c) {
  const double tau = emission_time(s, x, t, c);
  const Vec3 rv = x - s.y(tau);
  const double r = norm(rv);
  const Vec3 rh = rv / r;
  const Vec3 M = s.v(tau) / c;
  const Vec3 Mdot = s.a(tau) / c;
  const double Mr = dot(M, rh), one = 1.0 - Mr;
  const Vec3 F = s.f(tau);
  const double Lr = dot(F, rh), LM = dot(F, M);
  const double near = (Lr - LM) / (r * r * one * one);
  const double far = dot(s.fdot(tau), rh) / (c * r * one * one);
  const double accel = Lr * (r * dot(Mdot, rh) + c * (Mr - dot(M, M))) / (c * r * r * one * one * one);
  return (near + far + accel) / (4.0 * kPi);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// -- CSV and CLI plumbing -----------------------------------------------------

std::vector<std::vector<std::string>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

struct SpectrumFile {
  std::vector<double> f, spl;
  double df = 0.0;
};

SpectrumFile read_spectrum(const fs::path& path) {
  SpectrumFile s;
  for (const auto& r : read_rows(path)) {
    s.f.push_back(std::stod(r.at(0)));
    s.spl.push_back(std::stod(r.at(2)));
  }
  if (s.f.size() > 1) s.df = s.f[1] - s.f[0];
  return s;
}

std::vector<double> read_tone_frequencies(const fs::path& path) {
  std::vector<double> f;
  for (const auto& r : read_rows(path)) f.push_back(std::stod(r.at(0)));
  return f;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

// geom -> synth -> solve -> spectrum and tones for both microphones.
bool run_pipeline(const fs::path& config, const fs::path& dir, int threads, std::string& why) {
  fs::create_directories(dir);
  const std::string cli = std::string(FANTONE_CLI) + " --quiet --config " + quoted(config) +
                          (threads >= 0 ? " --threads " + std::to_string(threads) : std::string());
  std::vector<std::string> steps = {
      cli + " --out " + quoted(dir / "geometry.csv") + " geom",
      cli + " --out " + quoted(dir / "pressure.csv") + " synth --mesh " + quoted(dir / "geometry.csv"),
      cli + " --out " + quoted(dir / "signals") + " solve --mesh " + quoted(dir / "geometry.csv") + " --pressure " +
          quoted(dir / "pressure.csv")};
  for (const char* mic : {"M1", "M2"}) {
    const std::string m = mic;
    steps.push_back(cli + " --out " + quoted(dir / ("spectrum_" + m + ".csv")) + " spectrum --signal " +
                    quoted(dir / "signals" / ("mic_" + m + ".csv")));
    steps.push_back(cli + " --out " + quoted(dir / ("tones_" + m + ".csv")) + " tones --spectrum " +
                    quoted(dir / ("spectrum_" + m + ".csv")));
  }
  for (const auto& s : steps) {
    const int rc = std::system(s.c_str());
    if (rc != 0) {
      why = "command failed (" + std::to_string(rc) + "): " + s;
      return false;
    }
  }
  return true;
}

std::vector<fs::path> csv_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") out.push_back(fs::relative(e.path(), dir));
  std::sort(out.begin(), out.end());
  return out;
}

// Is every tone within half a bin of a multiple of `step`?
bool on_grid(const std::vector<double>& tones, double step, double df, std::string& bad) {
  for (double f : tones) {
    const double k = std::round(f / step);
    if (std::abs(f - k * step) > 0.5 * df) {
      bad = fmt("%.3f Hz", f);
      return false;
    }
  }
  return true;
}

// Shared state: the pipeline runs are reused by criteria 7, 8 and 11.
struct Workspace {
  fs::path root;
  fs::path baseline, modulated;
  bool baseline_ok = false, modulated_ok = false;
  std::string baseline_why, modulated_why;
};

// -- criteria -------------------------------------------------------------------

Outcome c1() {
  const FanParams p;
  const double nf = 2800.0 / 60.0, bpf0 = 7 * nf, bpf1 = 2 * bpf0;
  const double a = blade_passing_frequency(p.blade_count_z, p.rotation_speed_n, 0);
  const double b = blade_passing_frequency(p.blade_count_z, p.rotation_speed_n, 1);
  const double da = a - 326.7, db = b - 653.4, dn = p.rotation_frequency() - 46.7;
  const bool exact = std::abs(a - bpf0) < 1e-9 && std::abs(b - bpf1) < 1e-9 && std::abs(p.rotation_frequency() - nf) < 1e-12;
  const bool ok = exact && std::abs(da) <= 0.05 && std::abs(db) <= 0.05 && std::abs(dn) <= 0.05;
  return {ok, fmt("BPF0 %.4f Hz (%+.4f), BPF1 %.4f Hz (%+.4f), n_f %.4f Hz (%+.4f); tol 0.05 Hz", a, da, b, db,
                  p.rotation_frequency(), dn)};
}

Outcome c2() {
  const FanParams p;
  const Compactness cp = compactness(0.134, 653.4, 340.0);
  const double mach = tip_mach(p, 340.0);
  const double mach_ref = kPi * 0.268 * 2800.0 / 60.0 / 340.0;
  const bool ok = std::abs(cp.wavelength - 0.52) <= 0.005 && std::abs(cp.wavelength - 340.0 / 653.4) < 1e-12 &&
                  std::abs(mach - 0.116) <= 0.001 && std::abs(mach - mach_ref) < 1e-12;
  return {ok, fmt("lambda %.4f m, tip Mach %.5f", cp.wavelength, mach)};
}

Outcome c3() {
  const double q = 0.395, d = 0.6, nu = 1.5e-5;
  const double u = q / (kPi * d * d / 4.0), re = u * d / nu;
  const double i_ref = 0.16 * std::pow(re, -0.125);
  const TurbulenceBoundary bc = turbulence_bc(duct_reynolds(q, d, nu), d);
  const bool ok = std::abs(bc.intensity - 0.041) <= 0.002 && std::abs(bc.intensity - i_ref) < 1e-12;
  return {ok, fmt("Re %.4g, I %.3f %%", re, 100.0 * bc.intensity)};
}

Outcome c4() {
  const auto t0 = std::chrono::steady_clock::now();
  const Medium medium;
  const double f = 7 * 2800.0 / 60.0, area = 0.01, F0 = 1.0;
  const double T = 60.0 / 2800.0;
  const SamplingPlan plan = sampling_plan(T / 360.0, 1, 3.0 * T);
  const SinglePanelCase c = single_panel_mesh({0, 0, 0}, {1, 0, 0}, area, 0.0);
  SurfacePressureField field(plan.sample_rate(), 0.0, plan.sample_count(), 1);
  for (std::size_t i = 0; i < field.samples(); ++i) field.at(i, 0) = F0 / area * std::sin(2 * kPi * f * field.time(i));
  const Vec3 x{3.0, 0.0, 4.0};
  const AcousticSignal sig = loading_noise(field, c.mesh, c.kin, {"x", x}, medium, plan).signal;

  const double r = norm(x), cx = x.x / r, c0 = medium.sound_speed;
  double err = 0.0, ref2 = 0.0;
  const std::size_t skip = sig.transient_samples();
  for (std::size_t i = skip; i < sig.pressure.size(); ++i) {
    const double te = sig.time(i) - r / c0;
    const double ref = cx * (2 * kPi * f * F0 * std::cos(2 * kPi * f * te) / (c0 * r) +
                             F0 * std::sin(2 * kPi * f * te) / (r * r)) / (4 * kPi);
    err += (sig.pressure[i] - ref) * (sig.pressure[i] - ref);
    ref2 += ref * ref;
  }
  const double periods = (sig.pressure.size() - skip) / sig.sample_rate * f;
  const double rel = std::sqrt(err / ref2);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {rel <= 1e-3 && periods >= 5.0 && secs < 5.0,
          fmt("relative L2 %.3g (tol 1e-3) over %.1f periods, %.2f s", rel, periods, secs)};
}

Outcome c5() {
  const auto t0 = std::chrono::steady_clock::now();
  const Medium medium;
  const double rpm = 2800.0, radius = 0.134, T = 60.0 / rpm;
  const double omega = -2 * kPi * rpm / 60.0;  // clockwise seen from the inlet (+z)
  const double f = 7 * rpm / 60.0, area = 1e-3;
  const Vec3 dir{0.0, 1.0, 0.5};
  const Vec3 x{4.0, 0.0, 3.0};

  const SamplingPlan plan = sampling_plan(T / 360.0, 1, 4.0 * T);
  const SinglePanelCase c = single_panel_mesh({radius, 0, 0}, dir, area, omega);
  SurfacePressureField field(plan.sample_rate(), 0.0, plan.sample_count(), 1);
  auto gain = [&](double t) { return 1.0 + 0.3 * std::sin(2 * kPi * f * t); };
  auto gain_rate = [&](double t) { return 0.3 * 2 * kPi * f * std::cos(2 * kPi * f * t); };
  for (std::size_t i = 0; i < field.samples(); ++i) field.at(i, 0) = norm(dir) * gain(field.time(i)) / area;
  const AcousticSignal sig = loading_noise(field, c.mesh, c.kin, {"x", x}, medium, plan).signal;

  auto rot = [&](const Vec3& v, double t) {
    const double a = omega * t, ca = std::cos(a), sa = std::sin(a);
    return Vec3{ca * v.x - sa * v.y, sa * v.x + ca * v.y, v.z};
  };
  const Vec3 w{0, 0, omega};
  MovingForce src;
  src.y = [&](double t) { return rot({radius, 0, 0}, t); };
  src.v = [&](double t) { return cross(w, rot({radius, 0, 0}, t)); };
  src.a = [&](double t) { return cross(w, cross(w, rot({radius, 0, 0}, t))); };
  src.f = [&](double t) { return rot(dir, t) * gain(t); };
  src.fdot = [&](double t) { return rot(dir, t) * gain_rate(t) + cross(w, rot(dir, t)) * gain(t); };

  double worst = 0.0, peak = 0.0;
  std::size_t n = 0;
  for (std::size_t i = sig.transient_samples(); i < sig.pressure.size(); ++i, ++n) {
    const double ref = point_force_pressure(src, x, sig.time(i), medium.sound_speed);
    peak = std::max(peak, std::abs(ref));
    worst = std::max(worst, std::abs(sig.pressure[i] - ref));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double rel = worst / peak;
  return {n > 0 && rel <= 1e-3 && secs < 30.0,
          fmt("max |dp| / peak %.3g (tol 1e-3) over %zu samples, observer %.1f m, %.2f s", rel, n, norm(x), secs)};
}

double rms_whole_periods(const AcousticSignal& s, std::size_t period) {
  std::vector<double> x(s.pressure.begin() + static_cast<std::ptrdiff_t>(s.transient_samples()), s.pressure.end());
  x.resize(x.size() / period * period);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += (v - mean) * (v - mean);
  return std::sqrt(sum / static_cast<double>(x.size()));
}

Outcome c6() {
  const auto t0 = std::chrono::steady_clock::now();
  const FanParams p;
  const Medium medium;
  const SurfaceMesh mesh = build_fan_geometry(p);
  const RotationKinematics kin = RotationKinematics::from_params(p);
  const double T = p.rotation_period();
  const SamplingPlan plan = sampling_plan(T / 360.0, 10, 6.0 * T);
  const SurfacePressureField field = synth_baseline(mesh, kin, BaselineLoadingModel{}, plan);
  const std::size_t per_rev = 36;
  const double a = rms_whole_periods(loading_noise(field, mesh, kin, {"5m", {5, 0, 0}}, medium, plan).signal, per_rev);
  const double b = rms_whole_periods(loading_noise(field, mesh, kin, {"10m", {10, 0, 0}}, medium, plan).signal, per_rev);
  const double ratio = b / a;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::abs(ratio - 0.5) <= 0.005 && secs < 60.0,
          fmt("RMS(10 m)/RMS(5 m) = %.5f (target 0.5 +- 1%%), %.2f s", ratio, secs)};
}

Outcome c7(const Workspace& ws) {
  if (!ws.baseline_ok) return {false, ws.baseline_why};
  const FanParams p;
  const SpectrumFile s = read_spectrum(ws.baseline / "spectrum_M1.csv");
  const double med = median(std::vector<double>(s.spl.begin() + 1, s.spl.end()));
  std::string detail;
  bool ok = true;
  for (double target : {326.7, 653.4}) {
    const long k = std::lround(target / s.df);
    long best = -1;
    for (long j = std::max(1L, k - 1); j <= k + 1 && j + 1 < static_cast<long>(s.spl.size()); ++j)
      if (s.spl[j] > s.spl[j - 1] && s.spl[j] > s.spl[j + 1] && (best < 0 || s.spl[j] > s.spl[best])) best = j;
    const double above = best < 0 ? -INFINITY : s.spl[best] - med;
    ok = ok && best >= 0 && above >= 20.0;
    detail += fmt("%.1f Hz: peak %s, %+.1f dB over median; ", target,
                  best < 0 ? "missing" : fmt("%.2f Hz", s.f[best]).c_str(), above);
  }
  const std::vector<double> tones = read_tone_frequencies(ws.baseline / "tones_M1.csv");
  std::string bad;
  const bool grid = on_grid(tones, p.rotation_frequency(), s.df, bad);
  detail += fmt("%zu tones, %s", tones.size(), grid ? "all on the n_f grid" : ("off grid: " + bad).c_str());
  const double record = 0.3 / p.rotation_period();
  return {ok && grid && record >= 10.0, detail + fmt(", %.0f rotations", record)};
}

Outcome c8(const Workspace& ws) {
  if (!ws.modulated_ok) return {false, ws.modulated_why};
  const FanParams p;
  const double step = p.rotation_frequency() / 4.0;
  std::string detail;
  bool ok = false;
  // The envelope fundamentals are required at one microphone at least; both
  // are reported.
  for (const char* mic : {"M2", "M1"}) {
    const SpectrumFile s = read_spectrum(ws.modulated / ("spectrum_" + std::string(mic) + ".csv"));
    const std::vector<double> tones = read_tone_frequencies(ws.modulated / ("tones_" + std::string(mic) + ".csv"));
    auto has = [&](double f) {
      return std::any_of(tones.begin(), tones.end(), [&](double t) { return std::abs(t - f) <= 0.5 * s.df; });
    };
    std::string bad;
    const bool grid = on_grid(tones, step, s.df, bad);
    const bool nf4 = has(step), bpf4 = has(7 * step);
    ok = ok || (grid && nf4 && bpf4);
    detail += fmt("%s: %zu tones, 11.7 Hz %s, 81.7 Hz %s, %s; ", mic, tones.size(), nf4 ? "yes" : "no",
                  bpf4 ? "yes" : "no", grid ? "all on n_f/4 grid" : ("off grid " + bad).c_str());
  }
  return {ok, detail + fmt("record %.2f s", 0.3)};
}

Outcome c9() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = load_config(std::string(FANTONE_CONFIG_DIR) + "/modulated.json");
  const SurfaceMesh mesh = build_fan_geometry(cfg.geometry);
  const SurfacePressureField field =
      synth_modulated(mesh, cfg.kinematics(), cfg.source.baseline, cfg.source.modulation, cfg.plan);
  const double bpf = cfg.geometry.bpf(), width = cfg.tone_grid().step();
  const SurfaceBandMap m0 = surface_band_map(field, mesh, bpf, width, cfg.psd_options());
  const SurfaceBandMap m1 = surface_band_map(field, mesh, 2 * bpf, width, cfg.psd_options());

  // High-(s, eta) region: outer half of chord and span.
  std::vector<std::size_t> order(m0.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m0.spl[a] > m0.spl[b]; });
  const std::size_t decile = (m0.size() + 9) / 10;
  std::size_t inside = 0;
  for (std::size_t k = 0; k < decile; ++k) {
    const Panel& pn = mesh.panel(m0.panel_id[order[k]]);
    if (pn.chord_fraction && pn.span_fraction && *pn.chord_fraction >= 0.5 && *pn.span_fraction >= 0.5) ++inside;
  }
  const double max0 = m0.spl[order[0]];
  const double max1 = *std::max_element(m1.spl.begin(), m1.spl.end());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {inside == decile && max1 < max0 && secs < 60.0,
          fmt("%zu/%zu top-decile panels with s, eta >= 0.5; max BPF0 %.1f dB, max BPF1 %.1f dB, %.2f s", inside,
              decile, max0, max1, secs)};
}

Outcome c10() {
  // Parseval against a direct sum, rectangular window, one segment.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  const double fs = 1000.0;
  std::vector<double> x(4000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = gauss(rng) + 2.0 * std::sin(2 * kPi * 50.0 * i / fs) + 0.7;
  PsdOptions one;
  one.n_segments = 1;
  one.window = WindowKind::rectangular;
  const Spectrum sx = psd(x, fs, one);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= x.size();
  double total = 0.0;
  for (double v : sx.psd) total += v * sx.bin_width;
  const double perr = std::abs(var - total) / var;

  // Tone detection under uniform scaling of the modulated spectrum.
  const RunConfig cfg = load_config(std::string(FANTONE_CONFIG_DIR) + "/modulated.json");
  const SurfaceMesh mesh = build_fan_geometry(cfg.geometry);
  const RotationKinematics kin = cfg.kinematics();
  const SurfacePressureField mod = synth_modulated(mesh, kin, cfg.source.baseline, cfg.source.modulation, cfg.plan);
  const AcousticSignal sig = loading_noise(mod, mesh, kin, cfg.observers.observers.at(1), cfg.medium, cfg.plan).signal;
  const Spectrum spec = psd(sig, cfg.psd_options());
  auto freqs = [&](const Spectrum& s) {
    std::set<double> out;
    for (const Tone& t : detect_tones(s, cfg.tone_grid(), cfg.spectra.threshold_db).tones) out.insert(t.frequency);
    return out;
  };
  const std::set<double> base = freqs(spec);
  bool scale_ok = !base.empty();
  for (double g : {1e-6, 3.7, 1e8}) {
    Spectrum s = spec;
    for (std::size_t i = 0; i < s.size(); ++i) {
      s.psd[i] *= g;
      s.spl[i] = level_db(s.psd[i] * s.bin_width, s.reference_pressure);
    }
    scale_ok = scale_ok && freqs(s) == base;
  }

  // Zero modulation depth gives the baseline field bit for bit.
  RecirculationModulation flat = cfg.source.modulation;
  flat.depth = 0.0;
  const bool same = synth_modulated(mesh, kin, cfg.source.baseline, flat, cfg.plan) ==
                    synth_baseline(mesh, kin, cfg.source.baseline, cfg.plan);

  return {perr <= 1e-6 && scale_ok && same,
          fmt("Parseval error %.2g (tol 1e-6); %zu tones unchanged under scaling: %s; eps=0 equals baseline: %s", perr,
              base.size(), scale_ok ? "yes" : "no", same ? "yes" : "no")};
}

Outcome c11(const Workspace& ws) {
  if (!ws.baseline_ok) return {false, ws.baseline_why};
  if (!ws.modulated_ok) return {false, ws.modulated_why};
  struct Run {
    fs::path reference;
    fs::path config;
    std::string name;
    int threads;
  };
  const fs::path cfg_dir = FANTONE_CONFIG_DIR;
  const std::vector<Run> runs = {{ws.baseline, cfg_dir / "baseline.json", "baseline_t1", 1},
                                 {ws.baseline, cfg_dir / "baseline.json", "baseline_t4", 4},
                                 {ws.modulated, cfg_dir / "modulated.json", "modulated_t3", 3}};
  std::size_t compared = 0;
  for (const Run& r : runs) {
    std::string why;
    const fs::path dir = ws.root / r.name;
    if (!run_pipeline(r.config, dir, r.threads, why)) return {false, why};
    const auto ref = csv_files(r.reference), got = csv_files(dir);
    if (ref != got) return {false, r.name + ": different set of output files"};
    for (const auto& f : ref) {
      if (slurp(r.reference / f) != slurp(dir / f)) return {false, r.name + ": " + f.string() + " differs"};
      ++compared;
    }
  }
  return {true, fmt("%zu CSV files byte-identical across --threads 0/1/3/4", compared)};
}

}  // namespace

int main() {
  set_warning_sink([](const std::string&) {});
  Workspace ws;
  ws.root = fs::temp_directory_path() / ("fantone_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(ws.root);
  ws.baseline = ws.root / "baseline";
  ws.modulated = ws.root / "modulated";
  const fs::path cfg_dir = FANTONE_CONFIG_DIR;

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "frequency arithmetic", c1},
      {2, "compactness and tip Mach", c2},
      {3, "inlet turbulence intensity", c3},
      {4, "stationary dipole oracle", c4},
      {5, "rotating point-force oracle", c5},
      {6, "far-field 1/r decay", c6},
      {7, "baseline tones (CLI pipeline)",
       [&] {
         ws.baseline_ok = run_pipeline(cfg_dir / "baseline.json", ws.baseline, -1, ws.baseline_why);
         return c7(ws);
       }},
      {8, "modulation tones (CLI pipeline)",
       [&] {
         ws.modulated_ok = run_pipeline(cfg_dir / "modulated.json", ws.modulated, -1, ws.modulated_why);
         return c8(ws);
       }},
      {9, "source localization maps", c9},
      {10, "spectral bookkeeping", c10},
      {11, "determinism across thread counts", [&] { return c11(ws); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << (c.id < 10 ? " " : "") << c.id << "] " << c.name << ": "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  fs::remove_all(ws.root);
  return failed ? 1 : 0;
}
