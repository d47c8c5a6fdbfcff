#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <sstream>

#include "pvlc/scenario.hpp"

namespace pvlc {

using nlohmann::json;

namespace {

void check_keys(const json &j, const std::string &path, std::initializer_list<const char *> allowed) {
  if (!j.is_object()) {
    throw FormatError((path.empty() ? "/" : path) + ": expected an object");
  }
  for (const auto &item : j.items()) {
    bool known = false;
    for (const char *key : allowed) {
      known = known || item.key() == key;
    }
    if (!known) {
      throw FormatError(path + "/" + item.key() + ": unknown field");
    }
  }
}

template <typename T>
T required(const json &j, const std::string &path, const char *key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError(path + "/" + key + ": missing required field");
  }
  try {
    return it->get<T>();
  } catch (const json::exception &e) {
    throw FormatError(path + "/" + key + ": " + e.what());
  }
}

template <typename T>
T optional(const json &j, const std::string &path, const char *key, T fallback) {
  return j.contains(key) ? required<T>(j, path, key) : fallback;
}

template <typename Fn>
auto wrap_invalid(const std::string &path, Fn &&fn) {
  try {
    return fn();
  } catch (const FormatError &) {
    throw;
  } catch (const std::invalid_argument &e) {
    throw FormatError(path + ": " + e.what());
  }
}

json to_json(const VehicleProfile &v) {
  json segs = json::array();
  for (const auto &s : v.segments) {
    segs.push_back({{"name", s.name},
                    {"length_m", s.length_m},
                    {"reflectance", s.reflectance},
                    {"material", s.material == Material::Metal ? "metal" : "glass"}});
  }
  json j{{"type", "vehicle"}, {"segments", segs}};
  if (v.embedded_packet) {
    j["embedded_packet"] = {{"packet", to_json(v.embedded_packet->packet)}, {"offset_m", v.embedded_packet->offset_m}};
  }
  return j;
}

VehicleProfile vehicle_from_json(const json &j, const std::string &path) {
  check_keys(j, path, {"type", "segments", "embedded_packet"});
  VehicleProfile v;
  const auto segs = required<json>(j, path, "segments");
  if (!segs.is_array()) {
    throw FormatError(path + "/segments: expected an array");
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string p = path + "/segments/" + std::to_string(i);
    check_keys(segs[i], p, {"name", "length_m", "reflectance", "material"});
    VehicleSegment s;
    s.name = required<std::string>(segs[i], p, "name");
    s.length_m = required<double>(segs[i], p, "length_m");
    s.reflectance = required<double>(segs[i], p, "reflectance");
    const auto material = required<std::string>(segs[i], p, "material");
    if (material == "metal") {
      s.material = Material::Metal;
    } else if (material == "glass") {
      s.material = Material::Glass;
    } else {
      throw FormatError(p + "/material: expected 'metal' or 'glass'");
    }
    v.segments.push_back(s);
  }
  if (j.contains("embedded_packet")) {
    const std::string p = path + "/embedded_packet";
    const auto &e = j["embedded_packet"];
    check_keys(e, p, {"packet", "offset_m"});
    v.embedded_packet = EmbeddedPacket{packet_from_json(required<json>(e, p, "packet"), p + "/packet"),
                                       required<double>(e, p, "offset_m")};
  }
  wrap_invalid(path, [&] {
    v.validate();
    return 0;
  });
  return v;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json to_json(const ReflectivePacket &packet) {
  json j{{"symbols", to_string(packet.symbols)},
         {"symbol_width_m", packet.symbol_width_m},
         {"reflectance_high", packet.reflectance_high},
         {"reflectance_low", packet.reflectance_low}};
  try {
    j["bits"] = manchester_decode(SymbolSeq(packet.symbols.begin() + kPreambleLength, packet.symbols.end()));
  } catch (const std::exception &) {
    // Invalid data field: symbols alone describe the packet.
  }
  return j;
}

ReflectivePacket packet_from_json(const json &j, const std::string &path) {
  check_keys(j, path, {"type", "symbols", "bits", "symbol_width_m", "reflectance_high", "reflectance_low"});
  const double width = required<double>(j, path, "symbol_width_m");
  const double high = required<double>(j, path, "reflectance_high");
  const double low = required<double>(j, path, "reflectance_low");
  if (!j.contains("symbols") && !j.contains("bits")) {
    throw FormatError(path + "/symbols: missing required field (or give bits)");
  }
  return wrap_invalid(path, [&] {
    ReflectivePacket packet;
    if (j.contains("symbols")) {
      packet.symbols = parse_symbols(required<std::string>(j, path, "symbols"));
      packet.symbol_width_m = width;
      packet.reflectance_high = high;
      packet.reflectance_low = low;
      validate(packet);
      if (j.contains("bits") &&
          build_packet(required<std::string>(j, path, "bits"), width, high, low).symbols != packet.symbols) {
        throw FormatError(path + "/bits: disagrees with symbols");
      }
    } else {
      packet = build_packet(required<std::string>(j, path, "bits"), width, high, low);
    }
    return packet;
  });
}

json to_json(const Scenario &s) {
  json receiver{{"kind", to_string(s.receiver.kind)},
                {"sensitivity", s.receiver.sensitivity},
                {"saturation_lux", s.receiver.saturation_lux},
                {"fov_half_angle_rad", s.receiver.fov_half_angle_rad},
                {"height_m", s.receiver.height_m},
                {"sampling_rate_hz", s.receiver.sampling_rate_hz}};
  if (s.receiver.cap_rad) {
    receiver["cap_rad"] = *s.receiver.cap_rad;
  }
  json objects = json::array();
  for (const auto &obj : s.scene.objects) {
    json pattern;
    if (const auto *packet = std::get_if<ReflectivePacket>(&obj.pattern)) {
      pattern = to_json(*packet);
      pattern["type"] = "packet";
    } else {
      pattern = to_json(std::get<VehicleProfile>(obj.pattern));
    }
    json speed = json::array();
    for (const auto &seg : obj.speed.segments) {
      speed.push_back({{"duration_s", seg.duration_s}, {"speed_mps", seg.speed_mps}});
    }
    objects.push_back(
        {{"pattern", pattern}, {"start_offset_m", obj.start_offset_m}, {"speed", speed}, {"fov_share", obj.fov_share}});
  }
  return json{
      {"emitter", {{"kind", to_string(s.emitter.kind)}, {"illuminance_lux", s.emitter.illuminance_lux}}},
      {"receiver", receiver},
      {"noise",
       {{"ambient_floor_lux", s.noise.ambient_floor_lux},
        {"ripple_amplitude_lux", s.noise.ripple_amplitude_lux},
        {"ripple_hz", s.noise.ripple_hz},
        {"gaussian_sigma_lux", s.noise.gaussian_sigma_lux}}},
      {"scene", {{"ground_reflectance", s.scene.ground_reflectance}, {"objects", objects}}},
      {"duration_s", s.duration_s},
      {"seed", s.seed},
  };
}

Scenario scenario_from_json(const json &j) {
  check_keys(j, "", {"emitter", "receiver", "noise", "scene", "duration_s", "seed"});
  Scenario s;

  const auto emitter = required<json>(j, "", "emitter");
  check_keys(emitter, "/emitter", {"kind", "illuminance_lux"});
  s.emitter.illuminance_lux = required<double>(emitter, "/emitter", "illuminance_lux");
  s.emitter.kind = wrap_invalid("/emitter/kind", [&] {
    return emitter_kind_from_string(optional<std::string>(emitter, "/emitter", "kind", "LedLamp"));
  });
  wrap_invalid("/emitter", [&] {
    validate(s.emitter);
    return 0;
  });

  const std::string rp = "/receiver";
  const auto rj = required<json>(j, "", "receiver");
  check_keys(rj, rp,
             {"kind", "sensitivity", "saturation_lux", "fov_half_angle_rad", "cap_rad", "height_m", "sampling_rate_hz"});
  const auto kind = wrap_invalid(rp + "/kind", [&] {
    return receiver_kind_from_string(optional<std::string>(rj, rp, "kind", "Custom"));
  });
  const double height = required<double>(rj, rp, "height_m");
  const double rate = required<double>(rj, rp, "sampling_rate_hz");
  ReceiverModel r;
  if (kind != ReceiverKind::Custom) {
    r = wrap_invalid(rp, [&] { return make_receiver(kind, height, rate); });
  } else {
    r.kind = kind;
    r.height_m = height;
    r.sampling_rate_hz = rate;
  }
  const bool custom = kind == ReceiverKind::Custom;
  r.sensitivity = custom ? required<double>(rj, rp, "sensitivity") : optional(rj, rp, "sensitivity", r.sensitivity);
  r.saturation_lux =
      custom ? required<double>(rj, rp, "saturation_lux") : optional(rj, rp, "saturation_lux", r.saturation_lux);
  r.fov_half_angle_rad = custom ? required<double>(rj, rp, "fov_half_angle_rad")
                                : optional(rj, rp, "fov_half_angle_rad", r.fov_half_angle_rad);
  if (rj.contains("cap_rad")) {
    r.cap_rad = required<double>(rj, rp, "cap_rad");
  }
  wrap_invalid(rp, [&] {
    validate(r);
    return 0;
  });
  s.receiver = r;

  const auto nj = optional<json>(j, "", "noise", json::object());
  check_keys(nj, "/noise", {"ambient_floor_lux", "ripple_amplitude_lux", "ripple_hz", "gaussian_sigma_lux"});
  s.noise.ambient_floor_lux = optional(nj, "/noise", "ambient_floor_lux", 0.0);
  s.noise.ripple_amplitude_lux = optional(nj, "/noise", "ripple_amplitude_lux", 0.0);
  s.noise.ripple_hz = optional(nj, "/noise", "ripple_hz", 100.0);
  s.noise.gaussian_sigma_lux = optional(nj, "/noise", "gaussian_sigma_lux", 0.0);
  wrap_invalid("/noise", [&] {
    s.noise.validate();
    return 0;
  });

  const auto sj = required<json>(j, "", "scene");
  check_keys(sj, "/scene", {"ground_reflectance", "objects"});
  s.scene.ground_reflectance = optional(sj, "/scene", "ground_reflectance", kDefaultGroundReflectance);
  const auto objects = required<json>(sj, "/scene", "objects");
  if (!objects.is_array() || objects.empty()) {
    throw FormatError("/scene/objects: expected a non-empty array");
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string p = "/scene/objects/" + std::to_string(i);
    const auto &oj = objects[i];
    check_keys(oj, p, {"pattern", "start_offset_m", "speed", "fov_share"});
    SceneObject obj;
    const auto pj = required<json>(oj, p, "pattern");
    const std::string pp = p + "/pattern";
    if (!pj.is_object()) {
      throw FormatError(pp + ": expected an object");
    }
    const auto type = optional<std::string>(pj, pp, "type", "packet");
    if (type == "packet") {
      obj.pattern = packet_from_json(pj, pp);
    } else if (type == "vehicle") {
      obj.pattern = vehicle_from_json(pj, pp);
    } else {
      throw FormatError(pp + "/type: expected 'packet' or 'vehicle'");
    }
    obj.start_offset_m = required<double>(oj, p, "start_offset_m");
    obj.fov_share = optional(oj, p, "fov_share", 1.0);
    const auto speed = required<json>(oj, p, "speed");
    if (speed.is_number()) {
      obj.speed = SpeedProfile::constant(speed.get<double>());
    } else if (speed.is_array()) {
      for (std::size_t k = 0; k < speed.size(); ++k) {
        const std::string sp = p + "/speed/" + std::to_string(k);
        check_keys(speed[k], sp, {"duration_s", "speed_mps"});
        obj.speed.segments.push_back({required<double>(speed[k], sp, "duration_s"),
                                      required<double>(speed[k], sp, "speed_mps")});
      }
    } else {
      throw FormatError(p + "/speed: expected a number or an array of segments");
    }
    s.scene.objects.push_back(std::move(obj));
  }
  wrap_invalid("/scene", [&] {
    s.scene.validate();
    return 0;
  });

  s.duration_s = required<double>(j, "", "duration_s");
  if (!(s.duration_s > 0.0)) {
    throw FormatError("/duration_s: must be positive");
  }
  s.seed = optional<std::uint64_t>(j, "", "seed", 0);
  s.noise.seed = s.seed;
  return s;
}

std::string serialize(const Scenario &scenario) { return to_json(scenario).dump(2) + "\n"; }

Scenario parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw FormatError(std::string("/: ") + e.what());
  }
  return scenario_from_json(j);
}

Scenario load_scenario(const std::filesystem::path &file) {
  std::ifstream in(file);
  if (!in) {
    throw FormatError("cannot open scenario file " + file.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string digest(const Scenario &scenario) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_json(scenario).dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

RssTrace run(const Scenario &scenario) {
  NoiseModel noise = scenario.noise;
  noise.seed = scenario.seed;
  RssTrace trace = simulate(scenario.scene, scenario.emitter, scenario.receiver, noise, scenario.duration_s);
  trace.meta.scenario_digest = digest(scenario);
  return trace;
}

std::string format_trace(const RssTrace &trace) {
  std::string out = "# sampling_rate_hz=" + format_double(trace.sampling_rate_hz) + "\n";
  if (trace.meta.saturation_level) {
    out += "# saturation_level=" + format_double(*trace.meta.saturation_level) + "\n";
  }
  if (!trace.meta.scenario_digest.empty()) {
    out += "# scenario_digest=" + trace.meta.scenario_digest + "\n";
  }
  out += "time_s,rss\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += format_double(trace.time_at(i));
    out += ',';
    out += format_double(trace.samples[i]);
    out += '\n';
  }
  return out;
}

RssTrace parse_trace(std::string_view text) {
  RssTrace trace;
  std::optional<double> declared_rate;
  std::vector<double> times;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto number = [&](const std::string &field, const char *what) {
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      if (used != field.size() || !std::isfinite(v)) {
        throw std::invalid_argument(field);
      }
      return v;
    } catch (const std::exception &) {
      throw FormatError("line " + std::to_string(line_no) + ": invalid " + what + " '" + field + "'");
    }
  };
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      if (header_seen) {
        throw FormatError("line " + std::to_string(line_no) + ": metadata after the header");
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        continue;
      }
      auto key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const auto value = line.substr(eq + 1);
      if (key == "sampling_rate_hz") {
        declared_rate = number(value, "sampling_rate_hz");
      } else if (key == "saturation_level") {
        trace.meta.saturation_level = number(value, "saturation_level");
      } else if (key == "scenario_digest") {
        trace.meta.scenario_digest = value;
      }
      continue;
    }
    if (!header_seen) {
      if (line != "time_s,rss") {
        throw FormatError("line " + std::to_string(line_no) + ": expected header 'time_s,rss'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 'time_s,rss'");
    }
    times.push_back(number(line.substr(0, comma), "time_s"));
    const double rss = number(line.substr(comma + 1), "rss");
    if (rss < 0.0) {
      throw FormatError("line " + std::to_string(line_no) + ": negative rss");
    }
    trace.samples.push_back(rss);
  }
  if (!header_seen) {
    throw FormatError("trace has no 'time_s,rss' header");
  }
  if (times.size() >= 2) {
    const double step = times[1] - times[0];
    if (!(step > 0.0)) {
      throw FormatError("time_s must be strictly increasing");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double d = times[i] - times[i - 1];
      if (std::abs(d - step) > 1e-9 * std::max(step, std::abs(times[i]))) {
        throw FormatError("time_s is not uniformly spaced at row " + std::to_string(i + 1));
      }
    }
    const double rate = 1.0 / step;
    if (declared_rate && std::abs(*declared_rate - rate) > 1e-6 * *declared_rate) {
      throw FormatError("declared sampling_rate_hz disagrees with the time column");
    }
    trace.sampling_rate_hz = declared_rate ? *declared_rate : rate;
  } else if (declared_rate) {
    trace.sampling_rate_hz = *declared_rate;
  } else {
    throw FormatError("cannot infer the sampling rate from fewer than two rows");
  }
  return trace;
}

void save_trace(const RssTrace &trace, const std::filesystem::path &file) {
  std::ofstream out(file);
  if (!out) {
    throw FormatError("cannot write trace file " + file.string());
  }
  out << format_trace(trace);
}

RssTrace load_trace(const std::filesystem::path &file) {
  std::ifstream in(file);
  if (!in) {
    throw FormatError("cannot open trace file " + file.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str());
}

namespace scenarios {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kHighReflectance = 0.9;  // aluminium tape
constexpr double kLowReflectance = 0.05;  // black paper

double noise_sigma(const ReflectivePacket &packet, const Scenario &s, double snr_db) {
  if (!std::isfinite(snr_db)) {
    return 0.0;
  }
  return sigma_for_snr(packet_swing_lux(packet, s.emitter, s.receiver), snr_db);
}

// Duration until the object's rear edge is `margin_m` past the far side of the footprint.
double transit_duration(const Scenario &s, const SceneObject &obj, double length_m, double margin_m) {
  const double target = length_m + 0.5 * footprint_width(s.receiver) + margin_m;
  double t = 0.0;
  double lead = obj.start_offset_m;
  for (std::size_t i = 0; i < obj.speed.segments.size(); ++i) {
    const auto &seg = obj.speed.segments[i];
    const bool last = i + 1 == obj.speed.segments.size();
    if (last || lead + seg.speed_mps * seg.duration_s >= target) {
      return t + (target - lead) / seg.speed_mps;
    }
    lead += seg.speed_mps * seg.duration_s;
    t += seg.duration_s;
  }
  return t;
}

}  // namespace

Scenario desk_baseline(std::string_view bits, std::uint64_t seed, double snr_db) {
  Scenario s;
  s.emitter = {300.0, EmitterKind::LedLamp};
  s.receiver = make_receiver(ReceiverKind::PD_G1, 0.2, 1000.0);
  s.receiver.cap_rad = 2.0 * kDeg;
  const auto packet = build_packet(bits, kDeskSymbolWidthM, kHighReflectance, kLowReflectance);
  SceneObject obj{packet, -(0.5 * footprint_width(s.receiver) + 0.02), SpeedProfile::constant(kDeskSpeedMps), 1.0};
  s.scene.objects.push_back(obj);
  s.noise.gaussian_sigma_lux = noise_sigma(packet, s, snr_db);
  s.duration_s = transit_duration(s, obj, packet.length_m(), 0.02);
  s.seed = seed;
  s.noise.seed = seed;
  return s;
}

Scenario speed_change(std::string_view bits, std::uint64_t seed, double snr_db) {
  Scenario s = desk_baseline(bits, seed, snr_db);
  auto &obj = s.scene.objects.front();
  const auto &packet = std::get<ReflectivePacket>(obj.pattern);
  // The data field's leading edge reaches the receiver when the preamble has passed.
  const double preamble_done_s = (kPreambleLength * packet.symbol_width_m - obj.start_offset_m) / kDeskSpeedMps;
  obj.speed = SpeedProfile{{{preamble_done_s, kDeskSpeedMps}, {1.0, 2.0 * kDeskSpeedMps}}};
  s.duration_s = transit_duration(s, obj, packet.length_m(), 0.02);
  return s;
}

Scenario desk_fluorescent(std::string_view bits, std::uint64_t seed) {
  Scenario s = desk_baseline(bits, seed, 30.0);
  s.emitter = {250.0, EmitterKind::Fluorescent};
  s.noise.ambient_floor_lux = 150.0;
  s.noise.ripple_amplitude_lux = 20.0;
  s.noise.ripple_hz = 100.0;
  s.noise.gaussian_sigma_lux = noise_sigma(std::get<ReflectivePacket>(s.scene.objects.front().pattern), s, 30.0);
  return s;
}

Scenario sweep_base(std::uint64_t seed) {
  Scenario s = desk_baseline("10", seed, 40.0);
  s.receiver.cap_rad = std::atan(0.07);
  auto &obj = s.scene.objects.front();
  obj.start_offset_m = -(0.5 * footprint_width(s.receiver) + 0.02);
  s.duration_s = transit_duration(s, obj, std::get<ReflectivePacket>(obj.pattern).length_m(), 0.02);
  return s;
}

Scenario collision(Collision which, std::uint64_t seed, double snr_db) {
  Scenario s;
  s.emitter = {300.0, EmitterKind::LedLamp};
  s.receiver = make_receiver(ReceiverKind::PD_G1, 0.2, 200.0);
  s.receiver.cap_rad = 2.0 * kDeg;
  const auto low = build_packet("00", kCollisionLowWidthM, kHighReflectance, kLowReflectance);
  const auto high = build_packet("000000", kCollisionHighWidthM, kHighReflectance, kLowReflectance);
  double low_share = 0.5;
  if (which == Collision::LowDominates) {
    low_share = 0.85;
  } else if (which == Collision::HighDominates) {
    low_share = 0.15;
  }
  const double start = -0.5 * footprint_width(s.receiver);
  const auto speed = SpeedProfile::constant(kDeskSpeedMps);
  s.scene.objects.push_back({low, start, speed, low_share});
  s.scene.objects.push_back({high, start, speed, 1.0 - low_share});
  s.noise.gaussian_sigma_lux = noise_sigma(low, s, snr_db);
  s.duration_s = transit_duration(s, s.scene.objects.front(), low.length_m(), 0.0);
  s.seed = seed;
  s.noise.seed = seed;
  return s;
}

VehicleProfile volvo_profile() {
  VehicleProfile v;
  v.segments = {
      {"hood", 1.0, 0.5, Material::Metal},
      {"windshield", 0.8, 0.1, Material::Glass},
      {"roof", 1.7, 0.5, Material::Metal},
      {"rear_windshield", 0.5, 0.1, Material::Glass},
      {"trunk", 0.4, 0.5, Material::Metal},
  };
  return v;
}

Scenario vehicle(VehicleSetup setup, std::string_view bits, std::uint64_t seed, bool bare_roof) {
  Scenario s;
  switch (setup) {
    case VehicleSetup::MildPd:
    case VehicleSetup::MildPdCapped:
      s.emitter = {1000.0, EmitterKind::Sun};
      s.receiver = make_receiver(ReceiverKind::PD_G2, 0.25, 2000.0);
      if (setup == VehicleSetup::MildPdCapped) {
        // Narrow enough that the roof footprint stays under one symbol width.
        s.receiver.cap_rad = 10.0 * std::numbers::pi / 180.0;
      }
      s.noise.ambient_floor_lux = 100.0;
      break;
    case VehicleSetup::WellLitRxLed:
      s.emitter = {30000.0, EmitterKind::Sun};
      s.receiver = make_receiver(ReceiverKind::RxLed, 0.75, 2000.0);
      s.noise.ambient_floor_lux = 6200.0;
      break;
  }
  VehicleProfile car = volvo_profile();
  const auto packet = build_packet(bits, kVehicleSymbolWidthM, kHighReflectance, kLowReflectance);
  if (!bare_roof) {
    car.embedded_packet = EmbeddedPacket{packet, 0.3};
  }
  const double length = car.length_m();
  SceneObject obj{car, -(0.5 * footprint_width(s.receiver) + 0.5), SpeedProfile::constant(kVehicleSpeedMps), 1.0};
  s.scene.objects.push_back(obj);
  s.noise.gaussian_sigma_lux = noise_sigma(packet, s, 25.0);
  s.duration_s = transit_duration(s, obj, length, 0.5);
  s.seed = seed;
  s.noise.seed = seed;
  return s;
}

const std::vector<std::string> &names() {
  static const std::vector<std::string> kNames{
      "desk-baseline",   "speed-change",    "desk-fluorescent", "sweep-base",
      "collision-case1", "collision-case2", "collision-case3",  "vehicle-mild-pd",
      "vehicle-mild-pd-capped", "vehicle-well-lit", "vehicle-bare-roof",
  };
  return kNames;
}

Scenario by_name(const std::string &name, std::uint64_t seed) {
  if (name == "desk-baseline") return desk_baseline("00", seed);
  if (name == "speed-change") return speed_change("10", seed);
  if (name == "desk-fluorescent") return desk_fluorescent("10", seed);
  if (name == "sweep-base") return sweep_base(seed);
  if (name == "collision-case1") return collision(Collision::LowDominates, seed);
  if (name == "collision-case2") return collision(Collision::HighDominates, seed);
  if (name == "collision-case3") return collision(Collision::EqualShare, seed);
  if (name == "vehicle-mild-pd") return vehicle(VehicleSetup::MildPd, "00", seed);
  if (name == "vehicle-mild-pd-capped") return vehicle(VehicleSetup::MildPdCapped, "00", seed);
  if (name == "vehicle-well-lit") return vehicle(VehicleSetup::WellLitRxLed, "00", seed);
  if (name == "vehicle-bare-roof") return vehicle(VehicleSetup::WellLitRxLed, "", seed, true);
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

}  // namespace scenarios

}  // namespace pvlc
