#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "pvlc/channel.hpp"

namespace pvlc {

const char *to_string(EmitterKind kind) {
  switch (kind) {
    case EmitterKind::LedLamp:
      return "LedLamp";
    case EmitterKind::Fluorescent:
      return "Fluorescent";
    case EmitterKind::Sun:
      return "Sun";
  }
  return "?";
}

const char *to_string(ReceiverKind kind) {
  switch (kind) {
    case ReceiverKind::PD_G1:
      return "PD_G1";
    case ReceiverKind::PD_G2:
      return "PD_G2";
    case ReceiverKind::PD_G3:
      return "PD_G3";
    case ReceiverKind::RxLed:
      return "RxLed";
    case ReceiverKind::Custom:
      return "Custom";
  }
  return "?";
}

EmitterKind emitter_kind_from_string(const std::string &name) {
  for (auto k : {EmitterKind::LedLamp, EmitterKind::Fluorescent, EmitterKind::Sun}) {
    if (name == to_string(k)) {
      return k;
    }
  }
  throw std::invalid_argument("unknown emitter kind '" + name + "'");
}

ReceiverKind receiver_kind_from_string(const std::string &name) {
  for (auto k : {ReceiverKind::PD_G1, ReceiverKind::PD_G2, ReceiverKind::PD_G3, ReceiverKind::RxLed,
                 ReceiverKind::Custom}) {
    if (name == to_string(k)) {
      return k;
    }
  }
  throw std::invalid_argument("unknown receiver kind '" + name + "'");
}

ReceiverModel make_receiver(ReceiverKind kind, double height_m, double sampling_rate_hz) {
  constexpr double deg = std::numbers::pi / 180.0;
  ReceiverModel r;
  r.kind = kind;
  r.height_m = height_m;
  r.sampling_rate_hz = sampling_rate_hz;
  r.fov_half_angle_rad = 45.0 * deg;
  switch (kind) {
    case ReceiverKind::PD_G1:
      r.saturation_lux = 450.0;
      r.sensitivity = 1.0;
      break;
    case ReceiverKind::PD_G2:
      r.saturation_lux = 1200.0;
      r.sensitivity = 0.45;
      break;
    case ReceiverKind::PD_G3:
      r.saturation_lux = 5000.0;
      r.sensitivity = 0.089;
      break;
    case ReceiverKind::RxLed:
      r.saturation_lux = 35000.0;
      r.sensitivity = 0.013;
      r.fov_half_angle_rad = 3.0 * deg;
      break;
    case ReceiverKind::Custom:
      throw std::invalid_argument("make_receiver needs a catalog kind; build Custom receivers field by field");
  }
  validate(r);
  return r;
}

void validate(const EmitterModel &emitter) {
  if (!(emitter.illuminance_lux > 0.0)) {
    throw std::invalid_argument("emitter illuminance_lux must be positive");
  }
}

void validate(const ReceiverModel &r) {
  if (!(r.sensitivity > 0.0)) {
    throw std::invalid_argument("receiver sensitivity must be positive");
  }
  if (!(r.saturation_lux > 0.0)) {
    throw std::invalid_argument("receiver saturation_lux must be positive");
  }
  if (!(r.fov_half_angle_rad > 0.0 && r.fov_half_angle_rad < std::numbers::pi / 2)) {
    throw std::invalid_argument("receiver fov_half_angle_rad must lie in (0, pi/2)");
  }
  if (r.cap_rad && !(*r.cap_rad > 0.0 && *r.cap_rad < r.fov_half_angle_rad)) {
    throw std::invalid_argument("receiver cap_rad must be positive and below fov_half_angle_rad");
  }
  if (!(r.height_m > 0.0)) {
    throw std::invalid_argument("receiver height_m must be positive");
  }
  if (!(r.sampling_rate_hz > 0.0)) {
    throw std::invalid_argument("receiver sampling_rate_hz must be positive");
  }
}

SpeedProfile SpeedProfile::constant(double speed_mps) { return SpeedProfile{{SpeedSegment{1.0, speed_mps}}}; }

double SpeedProfile::distance_at(double t) const {
  double distance = 0.0;
  double elapsed = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto &seg = segments[i];
    const bool last = i + 1 == segments.size();
    if (last || t <= elapsed + seg.duration_s) {
      return distance + seg.speed_mps * (t - elapsed);
    }
    distance += seg.speed_mps * seg.duration_s;
    elapsed += seg.duration_s;
  }
  return distance;
}

void SpeedProfile::validate() const {
  if (segments.empty()) {
    throw std::invalid_argument("speed profile has no segments");
  }
  for (const auto &seg : segments) {
    if (!(seg.duration_s > 0.0) || !(seg.speed_mps > 0.0)) {
      throw std::invalid_argument("speed segments need positive duration_s and speed_mps");
    }
  }
}

double VehicleProfile::length_m() const {
  double total = 0.0;
  for (const auto &seg : segments) {
    total += seg.length_m;
  }
  return total;
}

double VehicleProfile::segment_start_m(const std::string &name) const {
  double start = 0.0;
  for (const auto &seg : segments) {
    if (seg.name == name) {
      return start;
    }
    start += seg.length_m;
  }
  throw std::invalid_argument("vehicle has no segment named '" + name + "'");
}

void VehicleProfile::validate() const {
  if (segments.empty()) {
    throw std::invalid_argument("vehicle profile has no segments");
  }
  double min_metal = 2.0, max_glass = -1.0;
  for (const auto &seg : segments) {
    if (!(seg.length_m > 0.0)) {
      throw std::invalid_argument("vehicle segment '" + seg.name + "' needs a positive length");
    }
    if (!(seg.reflectance >= 0.0 && seg.reflectance <= 1.0)) {
      throw std::invalid_argument("vehicle segment '" + seg.name + "' reflectance must lie in [0, 1]");
    }
    if (seg.material == Material::Metal) {
      min_metal = std::min(min_metal, seg.reflectance);
    } else {
      max_glass = std::max(max_glass, seg.reflectance);
    }
  }
  if (min_metal <= max_glass) {
    throw std::invalid_argument("metal segments must reflect more than glass segments");
  }
  if (embedded_packet) {
    pvlc::validate(embedded_packet->packet);
    const auto roof = std::find_if(segments.begin(), segments.end(), [](const auto &s) { return s.name == "roof"; });
    if (roof == segments.end()) {
      throw std::invalid_argument("embedded packet needs a segment named 'roof'");
    }
    if (embedded_packet->offset_m < 0.0 ||
        embedded_packet->offset_m + embedded_packet->packet.length_m() > roof->length_m + 1e-12) {
      throw std::invalid_argument("embedded packet does not fit on the roof");
    }
  }
}

void Scene::validate() const {
  if (objects.empty()) {
    throw std::invalid_argument("scene has no objects");
  }
  if (!(ground_reflectance >= 0.0 && ground_reflectance < 1.0)) {
    throw std::invalid_argument("ground_reflectance must lie in [0, 1)");
  }
  for (const auto &obj : objects) {
    if (!(obj.fov_share > 0.0 && obj.fov_share <= 1.0)) {
      throw std::invalid_argument("fov_share must lie in (0, 1]");
    }
    obj.speed.validate();
    std::visit([](const auto &p) {
      if constexpr (std::is_same_v<std::decay_t<decltype(p)>, ReflectivePacket>) {
        pvlc::validate(p);
      } else {
        p.validate();
      }
    }, obj.pattern);
  }
}

void NoiseModel::validate() const {
  if (!(ambient_floor_lux >= 0.0) || !(ripple_amplitude_lux >= 0.0) || !(gaussian_sigma_lux >= 0.0)) {
    throw std::invalid_argument("noise levels must be non-negative");
  }
  if (!(ripple_hz > 0.0)) {
    throw std::invalid_argument("ripple_hz must be positive");
  }
}

ReflectanceProfile::ReflectanceProfile(std::vector<double> breaks, std::vector<double> values, double outside)
    : breaks_(std::move(breaks)), values_(std::move(values)), outside_(outside) {
  if (breaks_.size() != values_.size() + 1 || breaks_.front() != 0.0) {
    throw std::invalid_argument("reflectance profile needs breaks starting at 0 and one more break than values");
  }
  cumulative_.assign(breaks_.size(), 0.0);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(breaks_[i + 1] > breaks_[i])) {
      throw std::invalid_argument("reflectance profile breaks must increase");
    }
    cumulative_[i + 1] = cumulative_[i] + values_[i] * (breaks_[i + 1] - breaks_[i]);
  }
}

double ReflectanceProfile::at(double u) const {
  if (u < 0.0 || u >= breaks_.back()) {
    return outside_;
  }
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
  return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double ReflectanceProfile::primitive(double u) const {
  if (u <= 0.0) {
    return outside_ * u;
  }
  if (u >= breaks_.back()) {
    return cumulative_.back() + outside_ * (u - breaks_.back());
  }
  const auto i = static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), u) - breaks_.begin()) - 1;
  return cumulative_[i] + values_[i] * (u - breaks_[i]);
}

double ReflectanceProfile::integral(double a, double b) const { return primitive(b) - primitive(a); }

double footprint_width(const ReceiverModel &receiver) {
  return 2.0 * receiver.height_m * std::tan(receiver.effective_half_angle());
}

double path_gain(double height_m) {
  const double ratio = kReferenceHeightM / height_m;
  return ratio * ratio;
}

double transit_symbol_rate(double speed_mps, double symbol_width_m) {
  if (!(speed_mps > 0.0) || !(symbol_width_m > 0.0)) {
    throw std::invalid_argument("speed and symbol width must be positive");
  }
  return speed_mps / symbol_width_m;
}

namespace {

void append_packet(const ReflectivePacket &packet, double start, std::vector<double> &breaks,
                   std::vector<double> &values) {
  for (std::size_t i = 0; i < packet.symbols.size(); ++i) {
    values.push_back(packet.symbols[i] == Symbol::High ? packet.reflectance_high : packet.reflectance_low);
    breaks.push_back(start + packet.symbol_width_m * static_cast<double>(i + 1));
  }
}

}  // namespace

ReflectanceProfile render_reflectance(const Pattern &pattern, double ground_reflectance) {
  std::vector<double> breaks{0.0};
  std::vector<double> values;
  if (const auto *packet = std::get_if<ReflectivePacket>(&pattern)) {
    validate(*packet);
    append_packet(*packet, 0.0, breaks, values);
  } else {
    const auto &vehicle = std::get<VehicleProfile>(pattern);
    vehicle.validate();
    double start = 0.0;
    for (const auto &seg : vehicle.segments) {
      const double end = start + seg.length_m;
      if (seg.name == "roof" && vehicle.embedded_packet) {
        const auto &emb = *vehicle.embedded_packet;
        const double p0 = start + emb.offset_m;
        const double p1 = std::min(p0 + emb.packet.length_m(), end);
        if (p0 > start) {
          values.push_back(seg.reflectance);
          breaks.push_back(p0);
        }
        append_packet(emb.packet, p0, breaks, values);
        breaks.back() = p1;
        if (end > p1) {
          values.push_back(seg.reflectance);
          breaks.push_back(end);
        }
      } else {
        values.push_back(seg.reflectance);
        breaks.push_back(end);
      }
      start = end;
    }
  }
  return ReflectanceProfile(std::move(breaks), std::move(values), ground_reflectance);
}

ReflectanceProfile render_reflectance(const SceneObject &object, double ground_reflectance) {
  return render_reflectance(object.pattern, ground_reflectance);
}

double sigma_for_snr(double swing_lux, double snr_db) { return 0.5 * swing_lux / std::pow(10.0, snr_db / 20.0); }

double packet_swing_lux(const ReflectivePacket &packet, const EmitterModel &emitter, const ReceiverModel &receiver) {
  return emitter.illuminance_lux * path_gain(receiver.height_m) * (packet.reflectance_high - packet.reflectance_low);
}

RssTrace simulate(const Scene &scene, const EmitterModel &emitter, const ReceiverModel &receiver,
                  const NoiseModel &noise, double duration_s) {
  scene.validate();
  validate(emitter);
  validate(receiver);
  noise.validate();
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("duration_s must be positive");
  }
  const double fs = receiver.sampling_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(duration_s * fs));
  if (n < 16) {
    throw std::invalid_argument("simulation needs at least 16 samples; raise duration_s or sampling_rate_hz");
  }

  std::vector<ReflectanceProfile> profiles;
  profiles.reserve(scene.objects.size());
  for (const auto &obj : scene.objects) {
    profiles.push_back(render_reflectance(obj, scene.ground_reflectance));
  }

  const double width = footprint_width(receiver);
  const double scale = receiver.sensitivity * path_gain(receiver.height_m) * emitter.illuminance_lux;
  const double ceiling = receiver.ceiling();
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, noise.gaussian_sigma_lux > 0.0 ? noise.gaussian_sigma_lux : 1.0);

  RssTrace trace;
  trace.sampling_rate_hz = fs;
  trace.meta.saturation_level = ceiling;
  trace.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    double reflected = 0.0;
    double visible_share = 0.0;
    for (std::size_t o = 0; o < profiles.size(); ++o) {
      const auto &obj = scene.objects[o];
      const double lead = obj.leading_edge_at(t);
      // Footprint [-W/2, W/2] in ground coordinates maps to u = lead - x.
      const double u_lo = lead - 0.5 * width;
      const double u_hi = lead + 0.5 * width;
      const double mean = width > 0.0 ? profiles[o].integral(u_lo, u_hi) / width : profiles[o].at(lead);
      reflected += obj.fov_share * mean;
      if (u_hi > 0.0 && u_lo < profiles[o].length()) {
        visible_share += obj.fov_share;
      }
    }
    if (visible_share > 1.0 + 1e-9) {
      throw std::invalid_argument("objects visible together hold more than the whole field of view");
    }
    double x = scale * reflected;
    x += receiver.sensitivity * noise.ambient_floor_lux;
    if (noise.ripple_amplitude_lux > 0.0) {
      x += receiver.sensitivity * noise.ripple_amplitude_lux * std::sin(2.0 * std::numbers::pi * noise.ripple_hz * t);
    }
    if (noise.gaussian_sigma_lux > 0.0) {
      x += receiver.sensitivity * gauss(rng);
    }
    trace.samples[i] = std::clamp(x, 0.0, ceiling);
  }
  return trace;
}

}  // namespace pvlc
