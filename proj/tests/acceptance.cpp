// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pvlc/channel.hpp"
#include "pvlc/classify.hpp"
#include "pvlc/codec.hpp"
#include "pvlc/planner.hpp"
#include "pvlc/scenario.hpp"
#include "pvlc/spectral.hpp"

using namespace pvlc;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char *f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string random_bits(std::mt19937_64 &rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += static_cast<char>('0' + (rng() & 1U));
  }
  return s;
}

Verdict round_trip() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  int failures = 0;
  bool narrow = true;
  for (int i = 0; i < 200; ++i) {
    const auto bits = random_bits(rng, 8);
    const Scenario s = scenarios::desk_baseline(bits, 1 + i, 20.0);
    narrow = narrow && footprint_width(s.receiver) <= 0.5 * scenarios::kDeskSymbolWidthM;
    const auto r = decode_trace(run(s), DecoderConfig{});
    failures += !(r.ok() && r.bits == bits);
  }
  const double dt = seconds_since(t0);
  return {failures == 0 && narrow && dt < 10.0, fmt("%d/200 failures, %.2f s", failures, dt)};
}

Verdict thresholds() {
  const PreambleFix f = make_fix(0, 1, 2, 1.0, 0.2, 0.9, 0.0, 0.1, 0.2);
  const double eps = 4 * std::numeric_limits<double>::epsilon();
  const bool ok = std::abs(f.tau_r - 0.75) <= eps && std::abs(f.tau_t - 0.1) <= eps;
  return {ok, fmt("tau_r=%.17g tau_t=%.17g", f.tau_r, f.tau_t)};
}

Verdict throughput() {
  const double rate = transit_symbol_rate(scenarios::kVehicleSpeedMps, scenarios::kVehicleSymbolWidthM);
  const Scenario s = scenarios::vehicle(scenarios::VehicleSetup::WellLitRxLed, "00", 1);
  const auto r = decode_vehicle_trace(run(s), DecoderConfig{});
  const bool setup = s.receiver.height_m == 0.75 && s.noise.ambient_floor_lux == 6200.0 &&
                     s.receiver.kind == ReceiverKind::RxLed;
  const bool ok = std::abs(rate - 50.0) <= 0.5 && setup && r.ok() && r.bits == "00" &&
                  to_string(r.symbols) == "HLHLHLHL";
  return {ok, fmt("%.3f symbols/s, decoded %s '%s'", rate, to_string(r.status), r.bits.c_str())};
}

Verdict speed_distortion() {
  std::vector<Template> templates;
  for (const char *label : {"00", "10"}) {
    Scenario s = scenarios::desk_baseline(label, 1);
    s.noise = NoiseModel::none();
    templates.push_back(make_template(label, run(s)));
  }
  const auto naive = decode_trace(run(scenarios::speed_change("10", 1, 30.0)), DecoderConfig{});
  const bool misread = to_string(naive.symbols) != "HLHLLHHL";
  int correct = 0, exact = 0;
  for (int seed = 1; seed <= 500; ++seed) {
    const RssTrace t = run(scenarios::speed_change("10", seed, 15.0));
    const auto r = classify_trace(t, templates);
    correct += r.best_label == "10" && r.distances.at("10") < r.distances.at("00");
    const auto d = decode_trace(t, DecoderConfig{});
    exact += d.ok() && d.bits == "10";
  }
  const bool ok = misread && correct >= 475 && exact <= 25;
  return {ok, fmt("naive read %s; DTW %d/500 correct; naive exact %d/500", to_string(naive.symbols).c_str(), correct,
                  exact)};
}

Verdict collisions() {
  using scenarios::Collision;
  int single1 = 0, single2 = 0, two = 0;
  const double f_low = scenarios::kDeskSpeedMps / (2.0 * scenarios::kCollisionLowWidthM);
  const double f_high = scenarios::kDeskSpeedMps / (2.0 * scenarios::kCollisionHighWidthM);
  for (int seed = 1; seed <= 200; ++seed) {
    for (auto [which, bits, counter] :
         {std::tuple{Collision::LowDominates, "00", &single1}, std::tuple{Collision::HighDominates, "000000", &single2}}) {
      const RssTrace t = run(scenarios::collision(which, seed));
      const auto v = collision_verdict(detect_peaks(compute_spectrum(t, default_fft_length(t.size()))));
      const auto d = decode_trace(t, DecoderConfig{});
      *counter += v.kind == VerdictKind::SingleDominant && d.ok() && d.bits == bits;
    }
    const RssTrace t = run(scenarios::collision(Collision::EqualShare, seed));
    const Spectrum s = compute_spectrum(t, default_fft_length(t.size()));
    const auto v = collision_verdict(detect_peaks(s));
    if (v.kind == VerdictKind::TwoObjects) {
      const auto &p = v.details.peaks;
      const double lo = std::min(p[0].frequency_hz, p[1].frequency_hz);
      const double hi = std::max(p[0].frequency_hz, p[1].frequency_hz);
      two += std::abs(lo - f_low) <= s.bin_hz && std::abs(hi - f_high) <= s.bin_hz;
    }
  }
  const bool ok = single1 >= 190 && single2 >= 190 && two >= 190;
  return {ok, fmt("case1 %d/200, case2 %d/200 single+decoded; case3 %d/200 two objects", single1, single2, two)};
}

Verdict receivers() {
  const auto cat = ReceiverCatalog::builtin();
  auto pick = [&](double lux) -> std::string {
    try {
      return select_receiver(cat, lux).name;
    } catch (const NoViableReceiver &) {
      return "none";
    }
  };
  bool ok = pick(100) == "PD_G1" && pick(1000) == "PD_G2" && pick(3000) == "PD_G3" && pick(6200) == "RxLed" &&
            pick(40000) == "none";
  ok = ok && pick(450) != "PD_G1" && pick(1200) != "PD_G2" && pick(5000) != "PD_G3" && pick(35000) != "RxLed";
  return {ok, fmt("100->%s 1000->%s 3000->%s 6200->%s 40000->%s", pick(100).c_str(), pick(1000).c_str(),
                  pick(3000).c_str(), pick(6200).c_str(), pick(40000).c_str())};
}

Verdict trends() {
  const auto t0 = Clock::now();
  SweepConfig cfg;
  cfg.heights_m = parse_grid("0.2:0.55:0.05");
  cfg.widths_m = parse_grid("0.015:0.075:0.001");
  const auto result = run_sweep(scenarios::sweep_base(1), cfg);
  const double dt = seconds_since(t0);
  const auto frontier = feasibility_frontier(result);
  bool monotone = true;
  for (std::size_t i = 1; i < frontier.size(); ++i) {
    monotone = monotone && frontier[i].second >= frontier[i - 1].second;
  }
  bool decreasing = result.points.size() == cfg.heights_m.size();
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    decreasing = decreasing && result.points[i].throughput_bps < result.points[i - 1].throughput_bps;
  }
  double exp_res = NAN, lin_res = NAN;
  bool fitted = false;
  try {
    const auto m = fit_trends(result.points, "acceptance sweep");
    exp_res = m.thr_log_residual;
    lin_res = m.thr_linear_log_residual;
    fitted = exp_res < lin_res;
  } catch (const FitError &) {
  }
  const bool ok = monotone && decreasing && fitted && dt < 60.0;
  return {ok, fmt("frontier %s, throughput %s, log residual exp %.4f vs linear %.4f, %.2f s",
                  monotone ? "monotone" : "NOT monotone", decreasing ? "strictly decreasing" : "NOT decreasing",
                  exp_res, lin_res, dt)};
}

Verdict saturation() {
  Scenario s = scenarios::vehicle(scenarios::VehicleSetup::WellLitRxLed, "00", 3);
  s.noise.ambient_floor_lux = 6000.0;
  const auto rx = decode_vehicle_trace(run(s), DecoderConfig{});
  Scenario pd = s;
  pd.receiver = make_receiver(ReceiverKind::PD_G3, s.receiver.height_m, s.receiver.sampling_rate_hz);
  const auto sat = decode_trace(run(pd), DecoderConfig{});

  int capped = 0, uncapped = 0;
  for (int seed = 1; seed <= 20; ++seed) {
    const auto c = decode_vehicle_trace(run(scenarios::vehicle(scenarios::VehicleSetup::MildPdCapped, "00", seed)),
                                        DecoderConfig{});
    const auto u =
        decode_vehicle_trace(run(scenarios::vehicle(scenarios::VehicleSetup::MildPd, "00", seed)), DecoderConfig{});
    capped += c.ok() && c.bits == "00";
    uncapped += u.ok() && u.bits == "00";
  }
  const bool ok = sat.status == DecodeStatus::Saturated && rx.ok() && rx.bits == "00" && capped == 20 && uncapped == 0;
  return {ok, fmt("PD_G3 %s, RxLed %s '%s', capped %d/20, uncapped %d/20", to_string(sat.status),
                  to_string(rx.status), rx.bits.c_str(), capped, uncapped)};
}

Verdict axioms() {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<std::size_t> len(1, 80);
  bool dtw_ok = true;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> a(len(rng)), b(len(rng));
    for (auto &v : a) v = g(rng);
    for (auto &v : b) v = g(rng);
    const double ab = dtw_distance(a, b);
    dtw_ok = dtw_ok && ab >= 0.0 && ab == dtw_distance(b, a) && dtw_distance(a, a) == 0.0;
  }

  bool manchester_ok = true;
  for (unsigned v = 0; v < (1U << 16); ++v) {
    std::string bits(16, '0');
    for (int b = 0; b < 16; ++b) {
      bits[b] = (v >> b & 1U) ? '1' : '0';
    }
    manchester_ok = manchester_ok && manchester_decode(manchester_encode(bits)) == bits;
  }

  // Superposition and linearity of the noise-free simulator.
  ReceiverModel r = make_receiver(ReceiverKind::PD_G1, 0.2, 1000.0);
  const SceneObject a{build_packet("00", 0.05, 0.9, 0.05), -0.2, SpeedProfile::constant(0.2), 0.5};
  const SceneObject b{build_packet("1111", 0.025, 0.9, 0.05), -0.1, SpeedProfile::constant(0.2), 0.5};
  const auto both = simulate(Scene{{a, b}}, EmitterModel{300.0}, r, NoiseModel::none(), 3.0);
  const auto ta = simulate(Scene{{a}}, EmitterModel{300.0}, r, NoiseModel::none(), 3.0);
  const auto tb = simulate(Scene{{b}}, EmitterModel{300.0}, r, NoiseModel::none(), 3.0);
  const auto tb3 = simulate(Scene{{b}}, EmitterModel{100.0}, r, NoiseModel::none(), 3.0);
  double sup_err = 0.0, lin_err = 0.0;
  for (std::size_t i = 0; i < both.size(); ++i) {
    sup_err = std::max(sup_err, std::abs(both.samples[i] - (ta.samples[i] + tb.samples[i])));
    lin_err = std::max(lin_err, std::abs(tb.samples[i] - 3.0 * tb3.samples[i]));
  }
  const double tol = 16 * std::numeric_limits<double>::epsilon() * r.ceiling();
  const bool ok = dtw_ok && manchester_ok && sup_err <= tol && lin_err <= tol;
  return {ok, fmt("dtw %s, manchester %s, superposition err %.3g, linearity err %.3g (tol %.3g)",
                  dtw_ok ? "ok" : "BROKEN", manchester_ok ? "ok" : "BROKEN", sup_err, lin_err, tol)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria{
      {"round-trip of 200 random 8-bit payloads", round_trip},
      {"preamble threshold formulas", thresholds},
      {"vehicle throughput and well-lit decode", throughput},
      {"speed distortion vs DTW classification", speed_distortion},
      {"collision spectra", collisions},
      {"receiver table", receivers},
      {"height/width trends", trends},
      {"saturation and field-of-view cap", saturation},
      {"DTW axioms and codec/simulator properties", axioms},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s criterion %zu: %s (%s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
