#pragma once

// Passive optical channel simulator.
//
// Geometry is one-dimensional: the receiver looks straight down at the ground
// plane from height_m, and its field of view projects to a footprint of width
// W centered on x = 0. Objects travel in +x. Pattern coordinate u runs from 0
// at an object's leading edge backwards along its body, so the leading edge
// (the first preamble symbol, or the hood) reaches the receiver first.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pvlc/codec.hpp"
#include "pvlc/trace.hpp"

namespace pvlc {

inline constexpr double kReferenceHeightM = 0.2;
inline constexpr double kDefaultGroundReflectance = 0.02;

enum class EmitterKind { LedLamp, Fluorescent, Sun };

struct EmitterModel {
  double illuminance_lux = 0.0;
  EmitterKind kind = EmitterKind::LedLamp;

  bool operator==(const EmitterModel &) const = default;
};

enum class ReceiverKind { PD_G1, PD_G2, PD_G3, RxLed, Custom };

struct ReceiverModel {
  ReceiverKind kind = ReceiverKind::Custom;
  double sensitivity = 1.0;
  double saturation_lux = 0.0;
  double fov_half_angle_rad = 0.0;
  double height_m = kReferenceHeightM;
  double sampling_rate_hz = 1000.0;
  // Physical cap narrowing the field of view; must be below fov_half_angle_rad.
  std::optional<double> cap_rad;

  double effective_half_angle() const { return cap_rad ? *cap_rad : fov_half_angle_rad; }
  // Highest value the detector can output.
  double ceiling() const { return saturation_lux * sensitivity; }

  bool operator==(const ReceiverModel &) const = default;
};

const char *to_string(EmitterKind kind);
const char *to_string(ReceiverKind kind);
EmitterKind emitter_kind_from_string(const std::string &name);
ReceiverKind receiver_kind_from_string(const std::string &name);

// Receiver with the catalog saturation/sensitivity for `kind` and default optics
// (photodiodes 45 degrees, RX-LED 3 degrees half angle). Custom is rejected.
ReceiverModel make_receiver(ReceiverKind kind, double height_m, double sampling_rate_hz);

void validate(const EmitterModel &emitter);
void validate(const ReceiverModel &receiver);

struct SpeedSegment {
  double duration_s = 0.0;
  double speed_mps = 0.0;

  bool operator==(const SpeedSegment &) const = default;
};

// Piecewise-constant speed. The last segment's speed holds after the listed durations run out.
struct SpeedProfile {
  std::vector<SpeedSegment> segments;

  static SpeedProfile constant(double speed_mps);
  // Distance travelled since t = 0.
  double distance_at(double t) const;
  void validate() const;

  bool operator==(const SpeedProfile &) const = default;
};

enum class Material { Metal, Glass };

struct VehicleSegment {
  std::string name;
  double length_m = 0.0;
  double reflectance = 0.0;
  Material material = Material::Metal;

  bool operator==(const VehicleSegment &) const = default;
};

struct EmbeddedPacket {
  ReflectivePacket packet;
  double offset_m = 0.0;  // from the front of the roof segment

  bool operator==(const EmbeddedPacket &) const = default;
};

struct VehicleProfile {
  std::vector<VehicleSegment> segments;
  std::optional<EmbeddedPacket> embedded_packet;

  double length_m() const;
  // Distance from the leading edge to the front of the segment called `name`.
  double segment_start_m(const std::string &name) const;
  void validate() const;

  bool operator==(const VehicleProfile &) const = default;
};

using Pattern = std::variant<ReflectivePacket, VehicleProfile>;

struct SceneObject {
  Pattern pattern;
  double start_offset_m = 0.0;  // leading edge position at t = 0
  SpeedProfile speed;
  double fov_share = 1.0;

  double leading_edge_at(double t) const { return start_offset_m + speed.distance_at(t); }

  bool operator==(const SceneObject &) const = default;
};

struct Scene {
  std::vector<SceneObject> objects;
  double ground_reflectance = kDefaultGroundReflectance;

  void validate() const;

  bool operator==(const Scene &) const = default;
};

struct NoiseModel {
  double ambient_floor_lux = 0.0;
  double ripple_amplitude_lux = 0.0;
  double ripple_hz = 100.0;
  double gaussian_sigma_lux = 0.0;
  std::uint64_t seed = 0;

  static NoiseModel none() { return {}; }
  void validate() const;

  bool operator==(const NoiseModel &) const = default;
};

// Piecewise-constant reflectance over pattern coordinate u, `outside` beyond [0, length).
class ReflectanceProfile {
 public:
  ReflectanceProfile(std::vector<double> breaks, std::vector<double> values, double outside);

  double at(double u) const;
  // Integral of the reflectance over [a, b], a <= b.
  double integral(double a, double b) const;
  double length() const { return breaks_.back(); }
  const std::vector<double> &breaks() const { return breaks_; }
  const std::vector<double> &values() const { return values_; }
  double outside() const { return outside_; }

 private:
  double primitive(double u) const;

  std::vector<double> breaks_;  // size values_.size() + 1, starting at 0
  std::vector<double> values_;
  std::vector<double> cumulative_;
  double outside_;
};

double footprint_width(const ReceiverModel &receiver);
double path_gain(double height_m);
double transit_symbol_rate(double speed_mps, double symbol_width_m);

ReflectanceProfile render_reflectance(const Pattern &pattern, double ground_reflectance = kDefaultGroundReflectance);
ReflectanceProfile render_reflectance(const SceneObject &object, double ground_reflectance = kDefaultGroundReflectance);

// Noise sigma (lux, before sensitivity) giving `snr_db` against a square wave of peak-to-peak `swing_lux`:
// SNR = 10 log10((swing / 2)^2 / sigma^2).
double sigma_for_snr(double swing_lux, double snr_db);

// Peak-to-peak reflected illuminance of a packet seen alone under an infinitely narrow footprint,
// before sensitivity: illuminance * path_gain * (r_high - r_low).
double packet_swing_lux(const ReflectivePacket &packet, const EmitterModel &emitter, const ReceiverModel &receiver);

RssTrace simulate(const Scene &scene, const EmitterModel &emitter, const ReceiverModel &receiver,
                  const NoiseModel &noise, double duration_s);

}  // namespace pvlc
