#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pvlc {

struct TraceMeta {
  // Detector output ceiling (saturation_lux * sensitivity) when known.
  std::optional<double> saturation_level;
  std::string scenario_digest;

  bool operator==(const TraceMeta &) const = default;
};

// Uniformly sampled received-signal-strength series. Sample i sits at i / sampling_rate_hz.
struct RssTrace {
  double sampling_rate_hz = 0.0;
  std::vector<double> samples;
  TraceMeta meta;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double time_at(std::size_t i) const { return static_cast<double>(i) / sampling_rate_hz; }
  double duration_s() const { return static_cast<double>(samples.size()) / sampling_rate_hz; }

  // Samples [first, end) with the same rate and metadata.
  RssTrace slice(std::size_t first, std::size_t count = static_cast<std::size_t>(-1)) const;

  bool operator==(const RssTrace &) const = default;
};

}  // namespace pvlc
