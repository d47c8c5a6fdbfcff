#pragma once

// Nearest-template classification of whole packet traces with Dynamic Time Warping.
// Used instead of per-symbol decoding when the object's speed changes mid-packet.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pvlc/trace.hpp"

namespace pvlc {

inline constexpr std::size_t kTemplateLength = 256;

// Linear interpolation onto `length` evenly spaced points spanning the whole input.
std::vector<double> resample_linear(const std::vector<double> &samples, std::size_t length);
// Zero mean, unit (population) variance. Throws std::invalid_argument on constant input.
std::vector<double> z_normalize(const std::vector<double> &samples);
// resample_linear followed by z_normalize.
std::vector<double> normalize_series(const std::vector<double> &samples, std::size_t length = kTemplateLength);

struct Template {
  std::string label;
  RssTrace trace;
  std::vector<double> normalized;
};

Template make_template(std::string label, RssTrace trace, std::size_t length = kTemplateLength);

struct DtwOptions {
  // Sakoe-Chiba half-width in samples; unset means the full matrix. Widened to |n - m| if smaller.
  std::optional<std::size_t> radius;
};

// Accumulated |a_i - b_j| along the cheapest warping path (diagonal, right and down steps),
// divided by that path's length. Among equally cheap paths the longest is taken.
double dtw_distance(const std::vector<double> &a, const std::vector<double> &b, const DtwOptions &opts = {});

struct DtwResult {
  std::map<std::string, double> distances;
  std::string best_label;
  // Second-best over best distance; 1 with a single template, +inf when only the best is zero.
  double margin = 1.0;
};

DtwResult classify_trace(const RssTrace &trace, const std::vector<Template> &templates, const DtwOptions &opts = {});

struct Codebook {
  std::vector<std::string> codes;
  std::size_t min_hamming = 0;
};

std::size_t hamming_distance(std::string_view a, std::string_view b);

// K codes of N bits with the largest minimum Hamming distance the greedy search reaches:
// for d = N, N-1, ... scan {0,1}^N from all-zero upwards, keeping every code at distance
// >= d from those already kept, and stop at the first d that yields K codes.
Codebook build_codebook(std::size_t bit_length, std::size_t count);

}  // namespace pvlc
