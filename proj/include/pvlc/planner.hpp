#pragma once

// Deployment planning: which (height, symbol width) pairs decode, how throughput falls
// with height, and which receiver survives a given ambient noise floor.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvlc/channel.hpp"
#include "pvlc/scenario.hpp"

namespace pvlc {

// One row per height: the narrowest decodable width and the throughput it allows.
struct SweepPoint {
  double height_m = 0.0;
  double min_width_m = 0.0;
  double throughput_bps = 0.0;  // payload bits/s; symbols/s is twice this
};

struct TrendModel {
  // max_height(width) = a * width + b
  double width_slope_a = 0.0;
  double width_intercept_b = 0.0;
  // throughput(height) = c * exp(-d * height), bits/s
  double thr_scale_c = 0.0;
  double thr_decay_d = 0.0;
  // Residual norms: height fit (m), exponential and straight-line throughput fits (both in log space).
  double width_residual = 0.0;
  double thr_log_residual = 0.0;
  double thr_linear_log_residual = 0.0;
  std::string fitted_from;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Least squares on >= 3 points with distinct heights. Throws FitError on degenerate input
// or when the fitted slopes have the wrong sign.
TrendModel fit_trends(const std::vector<SweepPoint> &sweep, std::string fitted_from = "");

double max_height_for_width(const TrendModel &model, double width_m);
double throughput_at_height(const TrendModel &model, double height_m);

nlohmann::json to_json(const TrendModel &model);
TrendModel trend_model_from_json(const nlohmann::json &j);

struct ReceiverEntry {
  std::string name;
  double saturation_lux = 0.0;
  double relative_sensitivity = 0.0;
};

struct ReceiverCatalog {
  std::vector<ReceiverEntry> entries;

  // PD_G1, PD_G2, PD_G3 and RxLed.
  static ReceiverCatalog builtin();
  void add(ReceiverEntry entry);
};

class NoViableReceiver : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Most sensitive entry whose saturation strictly exceeds noise_floor * (1 + margin);
// catalog order breaks sensitivity ties.
const ReceiverEntry &select_receiver(const ReceiverCatalog &catalog, double noise_floor_lux, double margin_frac = 0.0);

struct SweepConfig {
  std::vector<double> heights_m;
  std::vector<double> widths_m;
  std::size_t trials = 3;  // a cell is decodable only if every trial decodes the exact bits
  std::uint64_t seed = 1;
};

struct SweepCell {
  double height_m = 0.0;
  double width_m = 0.0;
  bool decodable = false;
};

struct SweepResult {
  std::vector<SweepCell> cells;   // height-major, widths ascending
  std::vector<SweepPoint> points; // heights with at least one decodable width
  double speed_mps = 0.0;
};

// Places the base scenario's packet (first scene object, constant speed) at each
// height/width and decodes it. The emitter and the Gaussian noise in lux stay fixed,
// so the path gain alone lowers the SNR as the receiver rises.
SweepResult run_sweep(const Scenario &base, const SweepConfig &config);

// Scenario for one sweep cell.
Scenario sweep_scenario(const Scenario &base, double height_m, double width_m, std::uint64_t seed);

// Largest decodable height per width (0 when none decodes), widths ascending.
std::vector<std::pair<double, double>> feasibility_frontier(const SweepResult &result);

// start:stop:step (inclusive, tolerant to rounding) or a comma-separated list.
std::vector<double> parse_grid(const std::string &spec);

}  // namespace pvlc
