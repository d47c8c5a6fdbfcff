#pragma once

// Frequency-domain view of a trace, used to tell one packet from two overlapping ones.

#include <cstddef>
#include <string>
#include <vector>

#include "pvlc/trace.hpp"

namespace pvlc {

enum class Window { Hann, Rect };

const char *to_string(Window w);
Window window_from_string(const std::string &name);

struct Spectrum {
  double bin_hz = 0.0;
  std::size_t fft_length = 0;
  std::vector<double> magnitudes;  // |X_k| for k = 0 .. fft_length/2, unnormalized
  Window window = Window::Hann;

  double frequency(std::size_t bin) const { return bin_hz * static_cast<double>(bin); }
};

// Smallest power of two >= max(16, n).
std::size_t default_fft_length(std::size_t n);

// Removes the mean, windows the first min(n, fft_length) samples and zero-pads the rest.
// fft_length must be a power of two >= 16.
Spectrum compute_spectrum(const RssTrace &trace, std::size_t fft_length, Window window = Window::Hann);

// The mean-removed, windowed, zero-padded frame that compute_spectrum transforms.
std::vector<double> windowed_frame(const RssTrace &trace, std::size_t fft_length, Window window = Window::Hann);

// Time-domain energy recovered from the one-sided magnitudes (Parseval).
double spectrum_energy(const Spectrum &spectrum);

struct Peak {
  double frequency_hz = 0.0;
  double magnitude = 0.0;
  double prominence = 0.0;
  std::size_t bin = 0;
};

struct PeakSet {
  std::vector<Peak> peaks;  // magnitude descending
  double threshold = 0.0;   // absolute prominence threshold that was applied
};

inline constexpr double kDefaultMinProminenceFrac = 0.2;
inline constexpr double kDefaultSeparationRatio = 1.5;
inline constexpr double kDefaultDominanceRatio = 2.0;

// Local maxima above DC whose prominence is at least min_prominence_frac of the largest non-DC magnitude.
PeakSet detect_peaks(const Spectrum &spectrum, double min_prominence_frac = kDefaultMinProminenceFrac);

enum class VerdictKind { SingleDominant, TwoObjects, Indeterminate };

const char *to_string(VerdictKind kind);

struct CollisionVerdict {
  VerdictKind kind = VerdictKind::Indeterminate;
  PeakSet details;
};

CollisionVerdict collision_verdict(const PeakSet &peaks, double separation_ratio = kDefaultSeparationRatio,
                                   double dominance_ratio = kDefaultDominanceRatio);

}  // namespace pvlc
