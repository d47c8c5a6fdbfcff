#include <random>
#include <string>

#include "doctest.h"
#include "pvlc/classify.hpp"
#include "pvlc/codec.hpp"
#include "pvlc/scenario.hpp"
#include "support.hpp"

using namespace pvlc;

namespace {

std::string random_bits(std::mt19937_64 &rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += static_cast<char>('0' + (rng() & 1U));
  }
  return s;
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("Manchester round-trip over every 16-bit payload") {
    for (unsigned v = 0; v < (1U << 16); ++v) {
      std::string bits(16, '0');
      for (int b = 0; b < 16; ++b) {
        bits[b] = (v >> b & 1U) ? '1' : '0';
      }
      const auto sym = manchester_encode(bits);
      REQUIRE(manchester_decode(sym) == bits);
      const auto highs = std::count(sym.begin(), sym.end(), Symbol::High);
      REQUIRE(highs == 16);
    }
  }

  TEST_CASE("Manchester round-trip on random lengths") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 2000; ++trial) {
      const auto bits = random_bits(rng, rng() % 33);
      const auto p = build_packet(bits, 0.03, 0.9, 0.05);
      REQUIRE(p.symbols.size() == kPreambleLength + 2 * bits.size());
      REQUIRE(manchester_decode(SymbolSeq(p.symbols.begin() + kPreambleLength, p.symbols.end())) == bits);
    }
  }

  TEST_CASE("random payloads survive simulation at 20 dB") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
      const auto bits = random_bits(rng, 1 + rng() % 12);
      const auto r = decode_trace(run(scenarios::desk_baseline(bits, 1000 + trial, 20.0)), DecoderConfig{});
      CAPTURE(bits);
      REQUIRE(r.ok());
      REQUIRE(r.bits == bits);
    }
  }

  TEST_CASE("decoding ignores offset, gain and sample duplication") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      const auto bits = random_bits(rng, 1 + rng() % 8);
      const RssTrace t = run(scenarios::desk_baseline(bits, 50 + trial, 25.0));
      RssTrace scaled = t;
      for (auto &v : scaled.samples) {
        v = 0.5 * v + 20.0;
      }
      scaled.meta.saturation_level.reset();
      RssTrace doubled{2.0 * t.sampling_rate_hz, {}, {}};
      for (double v : t.samples) {
        doubled.samples.insert(doubled.samples.end(), {v, v});
      }
      CAPTURE(bits);
      CHECK(decode_trace(scaled, DecoderConfig{}).bits == bits);
      CHECK(decode_trace(doubled, DecoderConfig{}).bits == bits);
    }
  }

  TEST_CASE("DTW axioms on random pairs") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> len(1, 60);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto a = support::random_series(rng, len(rng));
      const auto b = support::random_series(rng, len(rng));
      const double ab = dtw_distance(a, b);
      REQUIRE(ab >= 0.0);
      REQUIRE(ab == dtw_distance(b, a));
      REQUIRE(dtw_distance(a, a) == 0.0);
    }
  }
}
