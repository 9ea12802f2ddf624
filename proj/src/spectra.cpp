#include "fantone/spectra.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <limits>
#include <sstream>

#include "fantone/error.hpp"
#include "fantone/parallel.hpp"

namespace fantone {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex plan_mutex;

fftw_plan r2c_plan(std::size_t n) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard lock(plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (!plan) fail(ErrorKind::numeric, "FFTW could not plan a transform of length " + std::to_string(n));
  cache.emplace(n, plan);
  return plan;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::hann)
    for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / n);
  return w;
}

}  // namespace

std::string to_string(WindowKind w) { return w == WindowKind::hann ? "hann" : "rectangular"; }

WindowKind parse_window(const std::string& name) {
  if (name == "hann") return WindowKind::hann;
  if (name == "rectangular") return WindowKind::rectangular;
  fail(ErrorKind::config, "unknown window '" + name + "' (expected hann or rectangular)");
}

double level_db(double power, double reference_pressure) {
  if (!(power > 0.0)) return kLevelFloorDb;
  return std::max(kLevelFloorDb, 10.0 * std::log10(power / (reference_pressure * reference_pressure)));
}

void Spectrum::validate() const {
  if (psd.size() != frequency.size() || spl.size() != frequency.size())
    fail(ErrorKind::invalid_argument, "spectrum columns differ in length");
  if (frequency.empty()) fail(ErrorKind::invalid_argument, "spectrum is empty");
  if (frequency.front() < 0.0) fail(ErrorKind::invalid_argument, "spectrum starts below 0 Hz");
  for (std::size_t i = 1; i < frequency.size(); ++i)
    if (!(frequency[i] > frequency[i - 1])) fail(ErrorKind::invalid_argument, "spectrum frequencies not increasing");
  for (double v : psd)
    if (!(v >= 0.0)) fail(ErrorKind::invalid_argument, "spectrum has a negative or non-finite PSD value");
}

Spectrum psd(std::span<const double> x, double sample_rate, const PsdOptions& options) {
  if (options.n_segments < 1) fail(ErrorKind::invalid_argument, "n_segments must be >= 1");
  if (!(options.overlap >= 0.0 && options.overlap < 1.0))
    fail(ErrorKind::invalid_argument, "overlap must lie in [0, 1)");
  if (!(sample_rate > 0.0)) fail(ErrorKind::invalid_argument, "sample rate must be > 0");

  const std::size_t k = static_cast<std::size_t>(options.n_segments);
  std::size_t len = options.segment_length;
  if (len == 0) len = static_cast<std::size_t>(std::floor(x.size() / (k - (k - 1) * options.overlap) + 1e-9));
  const std::size_t hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(len * (1.0 - options.overlap))));
  if (len < 2 || (k - 1) * hop + len > x.size()) {
    std::ostringstream os;
    os << "signal of " << x.size() << " samples is too short for " << k << " segments";
    if (options.segment_length) os << " of " << options.segment_length << " samples";
    fail(ErrorKind::invalid_argument, os.str());
  }

  const std::vector<double> w = make_window(options.window, len);
  const double wsum2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
  const std::size_t bins = len / 2 + 1;
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(len));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(bins));
  const fftw_plan plan = r2c_plan(len);

  Spectrum s;
  s.psd.assign(bins, 0.0);
  for (std::size_t seg = 0; seg < k; ++seg) {
    const double* src = x.data() + seg * hop;
    const double mean = std::accumulate(src, src + len, 0.0) / static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) in.get()[i] = (src[i] - mean) * w[i];
    fftw_execute_dft_r2c(plan, in.get(), out.get());
    for (std::size_t b = 0; b < bins; ++b) {
      const double re = out.get()[b][0], im = out.get()[b][1];
      s.psd[b] += re * re + im * im;
    }
  }
  const double scale = 1.0 / (sample_rate * wsum2 * static_cast<double>(k));
  for (std::size_t b = 0; b < bins; ++b) {
    const bool edge = b == 0 || (len % 2 == 0 && b == bins - 1);
    s.psd[b] *= scale * (edge ? 1.0 : 2.0);
  }

  s.bin_width = sample_rate / static_cast<double>(len);
  s.frequency.resize(bins);
  s.spl.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    s.frequency[b] = static_cast<double>(b) * s.bin_width;
    s.spl[b] = level_db(s.psd[b] * s.bin_width, options.reference_pressure);
  }
  s.window = options.window;
  s.n_segments = options.n_segments;
  s.overlap = options.overlap;
  s.segment_length = len;
  s.reference_pressure = options.reference_pressure;
  return s;
}

Spectrum psd(const AcousticSignal& signal, const PsdOptions& options) {
  const std::vector<double> x = signal.analysed();
  return psd(x, signal.sample_rate, options);
}

double parseval_error(std::span<const double> x, const Spectrum& spectrum) {
  if (x.empty()) fail(ErrorKind::invalid_argument, "parseval_error: empty signal");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  const double total = std::accumulate(spectrum.psd.begin(), spectrum.psd.end(), 0.0) * spectrum.bin_width;
  if (var == 0.0) return total == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(var - total) / var;
}

std::string tone_label(long grid_index, const ToneGrid& grid) {
  if (grid_index < 0) return "other";
  const long z = grid.blade_count, d = grid.divisor;
  if (grid_index == z * d) return "BPF0";
  if (grid_index == 2 * z * d) return "BPF1";
  if (4 * grid_index == d) return "nf/4";
  if (4 * grid_index == z * d) return "BPF0/4";
  return "other";
}

ToneReport detect_tones(const Spectrum& spec, const ToneGrid& grid, double threshold_db) {
  spec.validate();
  if (!(grid.rotation_frequency > 0.0) || grid.divisor < 1)
    fail(ErrorKind::invalid_argument, "tone grid needs n_f > 0 and divisor >= 1");
  const double step = grid.step();
  if (step < spec.bin_width * (1.0 - 1e-9)) {
    std::ostringstream os;
    os << "tone grid step " << step << " Hz is finer than the resolution " << spec.bin_width << " Hz";
    fail(ErrorKind::invalid_argument, os.str());
  }

  ToneReport report;
  report.threshold_db = threshold_db;
  const std::size_t n = spec.size();
  if (n < 3) return report;
  std::vector<double> body(spec.psd.begin() + 1, spec.psd.end());
  std::nth_element(body.begin(), body.begin() + body.size() / 2, body.end());
  const double median = body[body.size() / 2];
  const double bar = median * std::pow(10.0, threshold_db / 10.0);

  for (std::size_t i = 1; i < n; ++i) {
    const double v = spec.psd[i];
    const bool peak = v > spec.psd[i - 1] && (i + 1 == n || v >= spec.psd[i + 1]);
    if (!peak || !(v > bar)) continue;
    Tone t;
    t.frequency = spec.frequency[i];
    t.spl = spec.spl[i];
    const long idx = std::lround(t.frequency / step);
    if (std::abs(t.frequency - static_cast<double>(idx) * step) <= 0.5 * spec.bin_width) t.grid_index = idx;
    t.label = tone_label(t.grid_index, grid);
    report.tones.push_back(t);
  }
  return report;
}

double band_power(const Spectrum& spec, double center, double width) {
  const double lo = center - 0.5 * width, hi = center + 0.5 * width;
  double sum = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (spec.frequency[i] >= lo && spec.frequency[i] <= hi) {
      sum += spec.psd[i];
      any = true;
    }
  if (!any) {
    const std::size_t i = static_cast<std::size_t>(
        std::clamp(std::lround(center / spec.bin_width), 0L, static_cast<long>(spec.size()) - 1));
    sum = spec.psd[i];
  }
  return sum * spec.bin_width;
}

SurfaceBandMap surface_band_map(const SurfacePressureField& field, const SurfaceMesh& mesh, double center,
                                double width, const PsdOptions& options, unsigned threads) {
  field.check_bound_to(mesh);
  if (!(width >= 0.0) || !(center > 0.0)) fail(ErrorKind::invalid_argument, "band needs center > 0 and width >= 0");
  const double f_max = 0.5 * field.sample_rate();
  if (center + 0.5 * width > f_max) {
    std::ostringstream os;
    os << "band " << center << " +/- " << 0.5 * width << " Hz exceeds the resolvable range (" << f_max << " Hz)";
    fail(ErrorKind::invalid_argument, os.str());
  }
  SurfaceBandMap map;
  map.center = center;
  map.width = width;
  map.panel_id.resize(mesh.size());
  map.spl.resize(mesh.size());
  parallel_for(mesh.size(), threads, [&](std::size_t j) {
    const std::vector<double> h = field.panel_history(j);
    const Spectrum s = psd(h, field.sample_rate(), options);
    map.panel_id[j] = mesh.panels[j].panel_id;
    map.spl[j] = level_db(band_power(s, center, width), options.reference_pressure);
  });
  return map;
}

}  // namespace fantone
