#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "pvlc/channel.hpp"
#include "pvlc/scenario.hpp"
#include "support.hpp"

using namespace pvlc;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

ReceiverModel pd(double h, double fs = 1000.0) { return make_receiver(ReceiverKind::PD_G1, h, fs); }

SceneObject packet_object(const std::string &bits, double width, double start, double speed, double share = 1.0) {
  return SceneObject{build_packet(bits, width, 0.9, 0.05), start, SpeedProfile::constant(speed), share};
}

}  // namespace

TEST_SUITE("channel") {
  TEST_CASE("footprint width") {
    ReceiverModel r = pd(0.25);
    r.fov_half_angle_rad = 45.0 * kDeg;
    CHECK(footprint_width(r) == doctest::Approx(0.5));
    r.cap_rad = 10.0 * kDeg;
    CHECK(footprint_width(r) == doctest::Approx(0.0881634903542).epsilon(1e-9));
    r.height_m = 1e-9;
    CHECK(footprint_width(r) < 1e-9);
  }

  TEST_CASE("catalog receivers") {
    const auto g1 = make_receiver(ReceiverKind::PD_G1, 0.2, 1000);
    CHECK(g1.saturation_lux == 450.0);
    CHECK(g1.sensitivity == 1.0);
    CHECK(make_receiver(ReceiverKind::PD_G2, 0.2, 1000).saturation_lux == 1200.0);
    CHECK(make_receiver(ReceiverKind::PD_G2, 0.2, 1000).sensitivity == 0.45);
    CHECK(make_receiver(ReceiverKind::PD_G3, 0.2, 1000).saturation_lux == 5000.0);
    CHECK(make_receiver(ReceiverKind::PD_G3, 0.2, 1000).sensitivity == 0.089);
    CHECK(make_receiver(ReceiverKind::RxLed, 0.2, 1000).saturation_lux == 35000.0);
    CHECK(make_receiver(ReceiverKind::RxLed, 0.2, 1000).sensitivity == 0.013);
    CHECK_THROWS(make_receiver(ReceiverKind::Custom, 0.2, 1000));
    CHECK(receiver_kind_from_string("RxLed") == ReceiverKind::RxLed);
    CHECK_THROWS(receiver_kind_from_string("PD_G9"));
    CHECK(emitter_kind_from_string(to_string(EmitterKind::Sun)) == EmitterKind::Sun);
  }

  TEST_CASE("receiver validation") {
    ReceiverModel r = pd(0.2);
    r.cap_rad = r.fov_half_angle_rad;
    CHECK_THROWS(validate(r));
    r = pd(0.2);
    r.height_m = 0.0;
    CHECK_THROWS(validate(r));
    r = pd(0.2);
    r.fov_half_angle_rad = std::numbers::pi / 2;
    CHECK_THROWS(validate(r));
    CHECK_THROWS(validate(EmitterModel{0.0, EmitterKind::Sun}));
  }

  TEST_CASE("path gain and symbol rate") {
    CHECK(path_gain(0.2) == doctest::Approx(1.0));
    CHECK(path_gain(0.4) == doctest::Approx(0.25));
    CHECK(transit_symbol_rate(5.0, 0.10) == doctest::Approx(50.0));
    CHECK(transit_symbol_rate(0.08, 0.03) == doctest::Approx(2.6667).epsilon(1e-4));
    CHECK(transit_symbol_rate(0.16, 0.03) == doctest::Approx(2.0 * transit_symbol_rate(0.08, 0.03)));
    CHECK_THROWS(transit_symbol_rate(0.0, 0.1));
    CHECK_THROWS(transit_symbol_rate(1.0, -0.1));
  }

  TEST_CASE("speed profiles") {
    const SpeedProfile p{{{1.0, 2.0}, {2.0, 1.0}}};
    CHECK(p.distance_at(0.5) == doctest::Approx(1.0));
    CHECK(p.distance_at(2.0) == doctest::Approx(3.0));
    CHECK(p.distance_at(5.0) == doctest::Approx(6.0));  // last speed continues
    CHECK_THROWS(SpeedProfile{{{1.0, 0.0}}}.validate());
    CHECK_THROWS(SpeedProfile{}.validate());
  }

  TEST_CASE("reflectance profiles and packet rendering") {
    const ReflectanceProfile prof({0.0, 0.1, 0.2}, {0.9, 0.1}, 0.02);
    CHECK(prof.at(0.05) == 0.9);
    CHECK(prof.at(0.15) == 0.1);
    CHECK(prof.at(-0.01) == 0.02);
    CHECK(prof.at(0.25) == 0.02);
    CHECK(prof.length() == doctest::Approx(0.2));

    const auto empty = render_reflectance(Pattern{build_packet("", 0.05, 0.9, 0.05)});
    REQUIRE(empty.values().size() == 4);
    CHECK(empty.values() == std::vector<double>{0.9, 0.05, 0.9, 0.05});
    CHECK(empty.at(-1.0) == kDefaultGroundReflectance);
  }

  TEST_CASE("profile integral matches brute-force quadrature") {
    const auto prof = render_reflectance(Pattern{build_packet("1011", 0.03, 0.9, 0.05)}, 0.02);
    for (auto [a, b] : {std::pair{-0.05, 0.01}, {0.0, 0.3}, {0.013, 0.171}, {0.2, 0.5}, {0.07, 0.07}}) {
      const int n = 200000;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += prof.at(a + (b - a) * (i + 0.5) / n);
      }
      CHECK(prof.integral(a, b) == doctest::Approx(acc * (b - a) / n).epsilon(1e-4));
    }
  }

  TEST_CASE("vehicle profile rendering") {
    VehicleProfile car = scenarios::volvo_profile();
    car.embedded_packet = EmbeddedPacket{build_packet("00", 0.1, 0.9, 0.05), 0.3};
    const auto prof = render_reflectance(Pattern{car});
    const double roof = car.segment_start_m("roof");
    CHECK(roof == doctest::Approx(1.8));
    CHECK(prof.at(0.5) == 0.5);               // hood
    CHECK(prof.at(1.2) == 0.1);               // windshield
    CHECK(prof.at(roof + 0.1) == 0.5);        // roof ahead of the packet
    CHECK(prof.at(roof + 0.35) == 0.9);       // first preamble symbol
    CHECK(prof.at(roof + 0.45) == 0.05);
    CHECK(prof.at(roof + 1.5) == 0.5);        // roof behind the packet
    CHECK(prof.at(3.7) == 0.1);               // rear windshield
    CHECK(prof.length() == doctest::Approx(car.length_m()));

    VehicleProfile bad = car;
    bad.embedded_packet->offset_m = 1.0;  // runs past the roof
    CHECK_THROWS(bad.validate());
    bad = car;
    bad.segments[1].reflectance = 0.9;  // glass brighter than metal
    CHECK_THROWS(bad.validate());
  }

  TEST_CASE("narrow footprint gives a two-level square wave") {
    ReceiverModel r = pd(0.2);
    r.cap_rad = 0.1 * kDeg;
    const Scene scene{{packet_object("00", 0.03, -0.01, 0.08)}};
    const RssTrace t = simulate(scene, EmitterModel{300.0}, r, NoiseModel::none(), 3.4);
    const double hi = 300.0 * 0.9, lo = 300.0 * 0.05;
    std::size_t at_hi = 0, at_lo = 0;
    for (double v : t.samples) {
      at_hi += std::abs(v - hi) < 1e-9;
      at_lo += std::abs(v - lo) < 1e-9;
    }
    // 4 HIGH and 4 LOW symbols of 375 samples each, minus the ramps.
    CHECK(at_hi > 4 * 360);
    CHECK(at_lo > 4 * 360);
  }

  TEST_CASE("simulate agrees with the brute-force box average") {
    ReceiverModel r = pd(0.2);
    r.cap_rad = 2.0 * kDeg;
    const auto packet = build_packet("10", 0.03, 0.9, 0.05);
    const double w = footprint_width(r);
    const Scene scene{{SceneObject{packet, -(0.5 * w + 0.02), SpeedProfile::constant(0.08), 1.0}}};
    const RssTrace oracle = support::synthetic_trace(packet, 0.08, w, 1000.0, 300.0);
    const RssTrace t = simulate(scene, EmitterModel{300.0}, r, NoiseModel::none(), oracle.duration_s());
    REQUIRE(t.size() == oracle.size());
    for (std::size_t i = 0; i < t.size(); i += 7) {
      // The oracle's sub-sampling is exact to one sub-cell of the swing.
      CHECK(std::abs(t.samples[i] - oracle.samples[i]) <= 300.0 * 0.88 / 400.0);
    }
  }

  TEST_CASE("PD_G3 under a 6000 lux floor sits at the ceiling") {
    const ReceiverModel r = make_receiver(ReceiverKind::PD_G3, 0.2, 1000);
    NoiseModel n;
    n.ambient_floor_lux = 6000.0;
    const Scene scene{{packet_object("00", 0.03, -0.02, 0.08)}};
    const RssTrace t = simulate(scene, EmitterModel{300.0}, r, n, 3.0);
    for (double v : t.samples) {
      REQUIRE(v == r.ceiling());
    }
    REQUIRE(t.meta.saturation_level);
    CHECK(*t.meta.saturation_level == r.ceiling());
  }

  TEST_CASE("samples stay within [0, ceiling]") {
    ReceiverModel r = pd(0.2);
    NoiseModel n;
    n.gaussian_sigma_lux = 400.0;
    n.ambient_floor_lux = 100.0;
    n.seed = 11;
    const Scene scene{{packet_object("0110", 0.03, -0.02, 0.08)}};
    const RssTrace t = simulate(scene, EmitterModel{300.0}, r, n, 4.0);
    CHECK(*std::min_element(t.samples.begin(), t.samples.end()) >= 0.0);
    CHECK(*std::max_element(t.samples.begin(), t.samples.end()) <= r.ceiling());
  }

  TEST_CASE("ripple and ambient floor scale with sensitivity") {
    ReceiverModel r = make_receiver(ReceiverKind::PD_G2, 0.2, 1000);
    NoiseModel n;
    n.ambient_floor_lux = 100.0;
    n.ripple_amplitude_lux = 10.0;
    const Scene scene{{packet_object("", 0.03, 10.0, 0.08)}};  // never enters the footprint
    const RssTrace t = simulate(scene, EmitterModel{300.0}, r, n, 0.05);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double expect = 0.45 * (300.0 * 0.02 + 100.0 + 10.0 * std::sin(2.0 * std::numbers::pi * 100.0 * t.time_at(i)));
      CHECK(t.samples[i] == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  TEST_CASE("SNR helpers") {
    CHECK(sigma_for_snr(2.0, 0.0) == doctest::Approx(1.0));
    CHECK(sigma_for_snr(2.0, 20.0) == doctest::Approx(0.1));
    const auto packet = build_packet("", 0.03, 0.9, 0.05);
    CHECK(packet_swing_lux(packet, EmitterModel{300.0}, pd(0.4)) == doctest::Approx(300.0 * 0.25 * 0.85));
  }

  TEST_CASE("simulate rejects bad input") {
    const ReceiverModel r = pd(0.2);
    CHECK_THROWS(simulate(Scene{}, EmitterModel{300.0}, r, NoiseModel::none(), 1.0));
    const Scene scene{{packet_object("00", 0.03, -0.02, 0.08)}};
    CHECK_THROWS(simulate(scene, EmitterModel{300.0}, r, NoiseModel::none(), 0.0));
    CHECK_THROWS(simulate(scene, EmitterModel{300.0}, r, NoiseModel::none(), 0.005));  // < 16 samples
    Scene crowded{{packet_object("00", 0.03, -0.02, 0.08, 0.7), packet_object("00", 0.03, -0.02, 0.08, 0.7)}};
    CHECK_THROWS(simulate(crowded, EmitterModel{300.0}, r, NoiseModel::none(), 1.0));
  }

  TEST_CASE("two objects superpose linearly") {
    const ReceiverModel r = pd(0.2);
    const SceneObject a = packet_object("00", 0.05, -0.2, 0.2, 0.5);
    const SceneObject b = packet_object("1111", 0.025, -0.1, 0.2, 0.5);
    const EmitterModel e{300.0};
    const auto both = simulate(Scene{{a, b}}, e, r, NoiseModel::none(), 3.0);
    const auto only_a = simulate(Scene{{a}}, e, r, NoiseModel::none(), 3.0);
    const auto only_b = simulate(Scene{{b}}, e, r, NoiseModel::none(), 3.0);
    for (std::size_t i = 0; i < both.size(); ++i) {
      REQUIRE(both.samples[i] == doctest::Approx(only_a.samples[i] + only_b.samples[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("noise-free output scales with illuminance below saturation") {
    const ReceiverModel r = pd(0.2);
    const Scene scene{{packet_object("01", 0.03, -0.02, 0.08)}};
    const auto one = simulate(scene, EmitterModel{100.0}, r, NoiseModel::none(), 2.0);
    const auto three = simulate(scene, EmitterModel{300.0}, r, NoiseModel::none(), 2.0);
    for (std::size_t i = 0; i < one.size(); ++i) {
      REQUIRE(three.samples[i] == doctest::Approx(3.0 * one.samples[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("same seed gives the same trace, another seed does not") {
    const Scenario s = scenarios::desk_baseline("10", 9);
    CHECK(run(s) == run(s));
    CHECK(run(s).samples != run(scenarios::desk_baseline("10", 10)).samples);
  }

  TEST_CASE("a wider footprint never increases the contrast within one pattern period") {
    // Beyond two symbol widths the box response of a periodic pattern rises again (sinc sidelobes).
    double last = std::numeric_limits<double>::infinity();
    for (double deg : {0.5, 1.0, 3.0, 5.0, 6.5, 8.0}) {
      ReceiverModel r = pd(0.2);
      r.cap_rad = deg * kDeg;
      const Scene scene{{packet_object("00", 0.03, -(0.5 * footprint_width(r) + 0.02), 0.08)}};
      const auto t = simulate(scene, EmitterModel{300.0}, r, NoiseModel::none(), 3.6);
      const double swing = *std::max_element(t.samples.begin(), t.samples.end()) -
                           *std::min_element(t.samples.begin(), t.samples.end());
      CHECK(swing <= last + 1e-9);
      last = swing;
    }
  }

  TEST_CASE("one symbol lasts width over speed") {
    ReceiverModel r = pd(0.2, 2000.0);
    r.cap_rad = 0.05 * kDeg;
    const Scene scene{{packet_object("", 0.05, 0.0, 0.1)}};
    const auto t = simulate(scene, EmitterModel{300.0}, r, NoiseModel::none(), 2.2);
    std::size_t high = 0;
    for (double v : t.samples) {
      high += v > 150.0;
    }
    // Two HIGH symbols of 0.5 s each.
    CHECK(std::abs(static_cast<double>(high) - 2000.0) <= 2.0);
  }
}
