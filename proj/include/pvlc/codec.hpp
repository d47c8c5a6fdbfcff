#pragma once

// Reflective packet encoding and RSS-trace decoding.
//
// A packet is a strip of two materials moving under a photodetector. Bits are
// Manchester coded (0 -> HIGH LOW, 1 -> LOW HIGH) behind a fixed HIGH LOW HIGH
// LOW preamble. The decoder needs no calibration: the first peak A, valley B
// and peak C of the preamble give the amplitude threshold tau_r and the symbol
// period tau_t for that packet alone.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pvlc/trace.hpp"

namespace pvlc {

enum class Symbol { High, Low };

using SymbolSeq = std::vector<Symbol>;

char to_char(Symbol s);
// "HLHL" style rendering; '.' is accepted on input and ignored.
std::string to_string(const SymbolSeq &symbols);
SymbolSeq parse_symbols(std::string_view text);

inline constexpr std::size_t kPreambleLength = 4;
const SymbolSeq &preamble();

struct ReflectivePacket {
  SymbolSeq symbols;
  double symbol_width_m = 0.0;
  double reflectance_high = 0.0;
  double reflectance_low = 0.0;

  double length_m() const { return symbol_width_m * static_cast<double>(symbols.size()); }
  std::size_t payload_bits() const { return (symbols.size() - kPreambleLength) / 2; }

  bool operator==(const ReflectivePacket &) const = default;
};

// Throws std::invalid_argument if the packet breaks any structural invariant.
void validate(const ReflectivePacket &packet);

enum class DecodeStatus { Ok, PreambleNotFound, ManchesterViolation, Saturated };

const char *to_string(DecodeStatus status);

// Raised by the lower-level decoding steps; decode_trace folds it into a status.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeStatus status, const std::string &what) : std::runtime_error(what), status_(status) {}
  DecodeStatus status() const { return status_; }

 private:
  DecodeStatus status_;
};

SymbolSeq manchester_encode(std::string_view bits);
// Throws DecodeError(ManchesterViolation) on HH/LL pairs, std::invalid_argument on odd length.
std::string manchester_decode(const SymbolSeq &symbols);

ReflectivePacket build_packet(std::string_view bits, double symbol_width_m, double reflectance_high,
                              double reflectance_low);

struct DecoderConfig {
  std::size_t smoothing_window = 5;
  double peak_prominence_frac = 0.25;
  double decision_level_frac = 0.5;
  double min_preamble_seconds = 0.1;
  double saturation_frac = 0.98;
  // Share of samples at the ceiling beyond which the trace counts as saturated.
  double saturated_sample_frac = 0.10;
  // A candidate preamble is rejected when its two half-periods differ by more than this ratio.
  double max_period_skew = 1.5;
  // Central share of each tau_t window whose maximum decides the symbol.
  double window_core_frac = 0.5;
  // Re-align the window phase on every symbol change (Manchester guarantees one per bit).
  // tau_t itself is never adjusted.
  bool track_phase = true;
  // When set, exactly this many payload bits are read after the preamble.
  std::optional<std::size_t> expected_bits;

  void validate() const;
};

struct PreambleFix {
  std::size_t idx_a = 0, idx_b = 0, idx_c = 0;
  double r_a = 0, r_b = 0, r_c = 0;
  double t_a = 0, t_b = 0, t_c = 0;
  double tau_r = 0;
  double tau_t = 0;

  // Valley floor plus `frac` of the mean peak-to-valley swing; 0.5 is the midpoint.
  double decision_level(double frac) const { return r_b + frac * tau_r; }
};

double magnitude_threshold(double r_a, double r_b, double r_c);
double period_threshold(double t_a, double t_b, double t_c);
PreambleFix make_fix(std::size_t idx_a, std::size_t idx_b, std::size_t idx_c, double r_a, double r_b, double r_c,
                     double t_a, double t_b, double t_c);

struct DecodeResult {
  DecodeStatus status = DecodeStatus::PreambleNotFound;
  SymbolSeq symbols;
  std::string bits;
  std::optional<PreambleFix> preamble;
  std::optional<std::size_t> vehicle_anchor;
  std::string message;

  bool ok() const { return status == DecodeStatus::Ok; }
};

// Centered moving average; the window shrinks at the trace edges.
std::vector<double> smooth(const std::vector<double> &samples, std::size_t window);

bool is_saturated(const RssTrace &trace, const DecoderConfig &cfg);

// Throws DecodeError(PreambleNotFound | Saturated).
PreambleFix find_preamble(const RssTrace &trace, const DecoderConfig &cfg);

DecodeResult decode_trace(const RssTrace &trace, const DecoderConfig &cfg);

// Start of the roof segment, located from the hood peak and windshield valley.
// Throws DecodeError(PreambleNotFound).
std::size_t find_vehicle_preamble(const RssTrace &trace, const DecoderConfig &cfg);

// Two-phase decode: vehicle signature first, then decode_trace from the anchor on.
DecodeResult decode_vehicle_trace(const RssTrace &trace, const DecoderConfig &cfg);

}  // namespace pvlc
