#pragma once

// Independent reference implementations used as test oracles. They favour obviousness
// over speed and share no code with the library.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "pvlc/codec.hpp"
#include "pvlc/trace.hpp"

namespace support {

// Reflectance of a packet at position u (packet frame), ground outside.
inline double packet_reflectance(const pvlc::ReflectivePacket &p, double u, double ground = 0.02) {
  if (u < 0.0 || u >= p.length_m()) {
    return ground;
  }
  const auto k = static_cast<std::size_t>(u / p.symbol_width_m);
  if (k >= p.symbols.size()) {
    return ground;
  }
  return p.symbols[k] == pvlc::Symbol::High ? p.reflectance_high : p.reflectance_low;
}

// Trace of a packet sliding at constant speed under a box footprint of width W, averaged
// by brute-force sub-sampling. The packet's leading edge starts 2 cm before the footprint.
inline pvlc::RssTrace synthetic_trace(const pvlc::ReflectivePacket &p, double speed, double footprint, double fs,
                                      double amplitude) {
  const double margin = 0.02;
  const double start = -(0.5 * footprint + margin);
  const double duration = (p.length_m() + footprint + 2.0 * margin) / speed;
  const auto n = static_cast<std::size_t>(duration * fs);
  pvlc::RssTrace t;
  t.sampling_rate_hz = fs;
  constexpr int kSub = 400;
  for (std::size_t i = 0; i < n; ++i) {
    const double lead = start + speed * static_cast<double>(i) / fs;
    double acc = 0.0;
    for (int j = 0; j < kSub; ++j) {
      const double x = -0.5 * footprint + footprint * (j + 0.5) / kSub;
      acc += packet_reflectance(p, lead - x);
    }
    t.samples.push_back(amplitude * acc / kSub);
  }
  return t;
}

struct PathScore {
  double cost = std::numeric_limits<double>::infinity();
  std::size_t len = 0;
};

// Enumerates every monotone warping path; the cheapest wins, the longest among equals.
inline double brute_force_dtw(const std::vector<double> &a, const std::vector<double> &b) {
  PathScore best;
  std::function<void(std::size_t, std::size_t, double, std::size_t)> walk = [&](std::size_t i, std::size_t j,
                                                                                   double cost, std::size_t len) {
    cost += std::abs(a[i] - b[j]);
    ++len;
    if (i + 1 == a.size() && j + 1 == b.size()) {
      const bool tie = std::abs(cost - best.cost) <= 1e-12 * std::max(1.0, cost);
      if ((!tie && cost < best.cost) || (tie && len > best.len)) {
        best = {cost, len};
      }
      return;
    }
    if (i + 1 < a.size() && j + 1 < b.size()) {
      walk(i + 1, j + 1, cost, len);
    }
    if (i + 1 < a.size()) {
      walk(i + 1, j, cost, len);
    }
    if (j + 1 < b.size()) {
      walk(i, j + 1, cost, len);
    }
  };
  walk(0, 0, 0.0, 0);
  return best.cost / static_cast<double>(best.len);
}

// O(N^2) one-sided DFT magnitudes.
inline std::vector<double> naive_dft_magnitudes(const std::vector<double> &x) {
  const std::size_t n = x.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = std::abs(acc);
  }
  return out;
}

inline std::vector<double> random_series(std::mt19937_64 &rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto &x : v) {
    x = d(rng);
  }
  return v;
}

}  // namespace support
