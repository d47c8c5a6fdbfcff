#include "pvlc/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace pvlc {

const char *to_string(Window w) { return w == Window::Hann ? "hann" : "rect"; }

Window window_from_string(const std::string &name) {
  if (name == "hann") {
    return Window::Hann;
  }
  if (name == "rect") {
    return Window::Rect;
  }
  throw std::invalid_argument("unknown window '" + name + "' (expected hann or rect)");
}

const char *to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::SingleDominant:
      return "SingleDominant";
    case VerdictKind::TwoObjects:
      return "TwoObjects";
    case VerdictKind::Indeterminate:
      return "Indeterminate";
  }
  return "?";
}

std::size_t default_fft_length(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 16)); }

namespace {

void check_length(std::size_t fft_length) {
  if (fft_length < 16 || !std::has_single_bit(fft_length)) {
    throw std::invalid_argument("fft length must be a power of two >= 16, got " + std::to_string(fft_length));
  }
}

struct FftwFree {
  void operator()(void *p) const { fftw_free(p); }
};

}  // namespace

std::vector<double> windowed_frame(const RssTrace &trace, std::size_t fft_length, Window window) {
  check_length(fft_length);
  if (trace.empty()) {
    throw std::invalid_argument("trace is empty");
  }
  const std::size_t used = std::min(trace.size(), fft_length);
  double mean = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    mean += trace.samples[i];
  }
  mean /= static_cast<double>(used);

  std::vector<double> frame(fft_length, 0.0);
  for (std::size_t i = 0; i < used; ++i) {
    double w = 1.0;
    if (window == Window::Hann && used > 1) {
      w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(used - 1));
    }
    frame[i] = w * (trace.samples[i] - mean);
  }
  return frame;
}

Spectrum compute_spectrum(const RssTrace &trace, std::size_t fft_length, Window window) {
  if (!(trace.sampling_rate_hz > 0.0)) {
    throw std::invalid_argument("trace sampling rate must be positive");
  }
  const std::vector<double> frame = windowed_frame(trace, fft_length, window);
  const std::size_t bins = fft_length / 2 + 1;

  std::unique_ptr<double, FftwFree> in(static_cast<double *>(fftw_malloc(sizeof(double) * fft_length)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * bins)));
  if (!in || !out) {
    throw std::bad_alloc();
  }
  // FFTW_ESTIMATE leaves the input untouched while planning, so it can be filled afterwards.
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(fft_length), in.get(), out.get(), FFTW_ESTIMATE);
  std::copy(frame.begin(), frame.end(), in.get());
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  Spectrum s;
  s.fft_length = fft_length;
  s.bin_hz = trace.sampling_rate_hz / static_cast<double>(fft_length);
  s.window = window;
  s.magnitudes.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    s.magnitudes[k] = std::hypot(out.get()[k][0], out.get()[k][1]);
  }
  return s;
}

double spectrum_energy(const Spectrum &spectrum) {
  const std::size_t n = spectrum.fft_length;
  if (n == 0 || spectrum.magnitudes.size() != n / 2 + 1) {
    throw std::invalid_argument("spectrum is not one-sided for its fft length");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    const double m2 = spectrum.magnitudes[k] * spectrum.magnitudes[k];
    // DC and Nyquist appear once in the full spectrum, every other bin twice.
    sum += (k == 0 || k == n / 2) ? m2 : 2.0 * m2;
  }
  return sum / static_cast<double>(n);
}

PeakSet detect_peaks(const Spectrum &spectrum, double min_prominence_frac) {
  if (!(min_prominence_frac > 0.0 && min_prominence_frac < 1.0)) {
    throw std::invalid_argument("min prominence fraction must be in (0, 1)");
  }
  const auto &m = spectrum.magnitudes;
  PeakSet out;
  if (m.size() < 3) {
    return out;
  }
  const double top = *std::max_element(m.begin() + 1, m.end());
  out.threshold = min_prominence_frac * top;
  if (!(top > 0.0)) {
    return out;
  }
  const std::size_t last = m.size() - 1;
  for (std::size_t k = 1; k <= last; ++k) {
    const bool rises = k == 1 || m[k] > m[k - 1];
    const bool holds = k == last || m[k] >= m[k + 1];
    if (!rises || !holds) {
      continue;
    }
    // Prominence: height above the higher of the two lowest points reached before
    // meeting a taller bin (or the end of the searched range) on either side.
    double left_min = m[k];
    for (std::size_t j = k; j-- > 1;) {
      if (m[j] > m[k]) {
        break;
      }
      left_min = std::min(left_min, m[j]);
    }
    double right_min = m[k];
    for (std::size_t j = k + 1; j <= last; ++j) {
      if (m[j] > m[k]) {
        break;
      }
      right_min = std::min(right_min, m[j]);
    }
    const double prominence = m[k] - std::max(left_min, right_min);
    if (prominence >= out.threshold && prominence > 0.0) {
      out.peaks.push_back(Peak{spectrum.frequency(k), m[k], prominence, k});
    }
  }
  std::stable_sort(out.peaks.begin(), out.peaks.end(),
                   [](const Peak &a, const Peak &b) { return a.magnitude > b.magnitude; });
  return out;
}

CollisionVerdict collision_verdict(const PeakSet &peaks, double separation_ratio, double dominance_ratio) {
  if (!(separation_ratio > 1.0) || !(dominance_ratio > 1.0)) {
    throw std::invalid_argument("separation and dominance ratios must exceed 1");
  }
  CollisionVerdict v{VerdictKind::Indeterminate, peaks};
  const auto &p = peaks.peaks;
  if (p.empty()) {
    return v;
  }
  if (p.size() == 1 || p[0].magnitude >= dominance_ratio * p[1].magnitude) {
    v.kind = VerdictKind::SingleDominant;
    return v;
  }
  const double hi = std::max(p[0].frequency_hz, p[1].frequency_hz);
  const double lo = std::min(p[0].frequency_hz, p[1].frequency_hz);
  if (lo > 0.0 && hi / lo >= separation_ratio) {
    v.kind = VerdictKind::TwoObjects;
  }
  return v;
}

}  // namespace pvlc
