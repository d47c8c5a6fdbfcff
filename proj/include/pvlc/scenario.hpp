#pragma once

// Scenario files (JSON) and trace files (CSV).

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pvlc/channel.hpp"

namespace pvlc {

struct Scenario {
  EmitterModel emitter;
  ReceiverModel receiver;
  NoiseModel noise;  // noise.seed mirrors `seed`
  Scene scene;
  double duration_s = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const Scenario &) const = default;
};

// Malformed scenario or trace file; the message names the offending JSON path or CSV line.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const ReflectivePacket &packet);
ReflectivePacket packet_from_json(const nlohmann::json &j, const std::string &path = "");

nlohmann::json to_json(const Scenario &scenario);
Scenario scenario_from_json(const nlohmann::json &j);
std::string serialize(const Scenario &scenario);
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path &file);

// 64-bit FNV-1a of the serialized scenario, as 16 hex digits.
std::string digest(const Scenario &scenario);

RssTrace run(const Scenario &scenario);

// CSV with a `time_s,rss` header, preceded by `# key=value` metadata lines.
std::string format_trace(const RssTrace &trace);
RssTrace parse_trace(std::string_view text);
void save_trace(const RssTrace &trace, const std::filesystem::path &file);
RssTrace load_trace(const std::filesystem::path &file);

// Ready-made scenes used by the tests, the acceptance suite and `pvlc scenario`.
namespace scenarios {

inline constexpr double kDeskSpeedMps = 0.08;
inline constexpr double kDeskSymbolWidthM = 0.03;
inline constexpr double kVehicleSpeedMps = 5.0;  // 18 km/h
inline constexpr double kVehicleSymbolWidthM = 0.10;

enum class Collision { LowDominates = 1, HighDominates = 2, EqualShare = 3 };
inline constexpr double kCollisionLowWidthM = 0.05;
inline constexpr double kCollisionHighWidthM = 0.025;

// LED lamp desk setup: packet 20 cm below a capped PD_G1, moving at 8 cm/s.
Scenario desk_baseline(std::string_view bits = "00", std::uint64_t seed = 1, double snr_db = 30.0);
// Desk setup whose speed doubles once the preamble has passed the receiver.
Scenario speed_change(std::string_view bits = "10", std::uint64_t seed = 1, double snr_db = 30.0);
// Desk setup under ceiling fluorescent lights with mains ripple and a raised floor.
Scenario desk_fluorescent(std::string_view bits = "10", std::uint64_t seed = 1);
// Wider-footprint desk setup used as the base of height/width sweeps.
Scenario sweep_base(std::uint64_t seed = 1);
// Low- and high-frequency packets crossing the field of view together.
Scenario collision(Collision which, std::uint64_t seed = 1, double snr_db = 25.0);

enum class VehicleSetup {
  MildPd,         // PD_G2 at 25 cm, 100 lux floor, full field of view
  MildPdCapped,   // same with the physical cap
  WellLitRxLed,   // RX-LED at 75 cm, 6200 lux floor
};
// Volvo-like hatchback at 18 km/h with an optional packet on the roof (empty bits = bare roof).
Scenario vehicle(VehicleSetup setup, std::string_view bits = "00", std::uint64_t seed = 1, bool bare_roof = false);
VehicleProfile volvo_profile();

Scenario by_name(const std::string &name, std::uint64_t seed = 1);
const std::vector<std::string> &names();

}  // namespace scenarios

}  // namespace pvlc
