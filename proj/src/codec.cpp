#include <algorithm>
#include <stdexcept>
#include <string>

#include "pvlc/codec.hpp"

namespace pvlc {

RssTrace RssTrace::slice(std::size_t first, std::size_t count) const {
  RssTrace out;
  out.sampling_rate_hz = sampling_rate_hz;
  out.meta = meta;
  if (first >= samples.size()) {
    return out;
  }
  const std::size_t last = count >= samples.size() - first ? samples.size() : first + count;
  out.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(first),
                     samples.begin() + static_cast<std::ptrdiff_t>(last));
  return out;
}

char to_char(Symbol s) { return s == Symbol::High ? 'H' : 'L'; }

std::string to_string(const SymbolSeq &symbols) {
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) {
    out.push_back(to_char(s));
  }
  return out;
}

SymbolSeq parse_symbols(std::string_view text) {
  SymbolSeq out;
  for (char c : text) {
    switch (c) {
      case 'H':
      case 'h':
        out.push_back(Symbol::High);
        break;
      case 'L':
      case 'l':
        out.push_back(Symbol::Low);
        break;
      case '.':
        break;
      default:
        throw std::invalid_argument(std::string("invalid symbol character '") + c + "'");
    }
  }
  return out;
}

const SymbolSeq &preamble() {
  static const SymbolSeq kPreamble{Symbol::High, Symbol::Low, Symbol::High, Symbol::Low};
  return kPreamble;
}

const char *to_string(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::Ok:
      return "Ok";
    case DecodeStatus::PreambleNotFound:
      return "PreambleNotFound";
    case DecodeStatus::ManchesterViolation:
      return "ManchesterViolation";
    case DecodeStatus::Saturated:
      return "Saturated";
  }
  return "?";
}

SymbolSeq manchester_encode(std::string_view bits) {
  SymbolSeq out;
  out.reserve(bits.size() * 2);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '0') {
      out.push_back(Symbol::High);
      out.push_back(Symbol::Low);
    } else if (bits[i] == '1') {
      out.push_back(Symbol::Low);
      out.push_back(Symbol::High);
    } else {
      throw std::invalid_argument("bit string has non-binary character at position " + std::to_string(i));
    }
  }
  return out;
}

std::string manchester_decode(const SymbolSeq &symbols) {
  if (symbols.size() % 2 != 0) {
    throw std::invalid_argument("Manchester symbol sequence has odd length " + std::to_string(symbols.size()));
  }
  std::string bits;
  bits.reserve(symbols.size() / 2);
  for (std::size_t i = 0; i < symbols.size(); i += 2) {
    if (symbols[i] == symbols[i + 1]) {
      throw DecodeError(DecodeStatus::ManchesterViolation,
                        "symbol pair " + std::to_string(i / 2) + " is " + to_char(symbols[i]) + to_char(symbols[i + 1]));
    }
    bits.push_back(symbols[i] == Symbol::High ? '0' : '1');
  }
  return bits;
}

void validate(const ReflectivePacket &packet) {
  if (!(packet.symbol_width_m > 0.0)) {
    throw std::invalid_argument("symbol_width_m must be positive");
  }
  if (!(packet.reflectance_high > 0.0 && packet.reflectance_high <= 1.0)) {
    throw std::invalid_argument("reflectance_high must lie in (0, 1]");
  }
  if (!(packet.reflectance_low >= 0.0 && packet.reflectance_low < 1.0)) {
    throw std::invalid_argument("reflectance_low must lie in [0, 1)");
  }
  if (!(packet.reflectance_high > packet.reflectance_low)) {
    throw std::invalid_argument("reflectance_high must exceed reflectance_low");
  }
  if (packet.symbols.size() < kPreambleLength || (packet.symbols.size() - kPreambleLength) % 2 != 0) {
    throw std::invalid_argument("packet must hold 4 + 2N symbols, got " + std::to_string(packet.symbols.size()));
  }
  if (!std::equal(preamble().begin(), preamble().end(), packet.symbols.begin())) {
    throw std::invalid_argument("packet does not start with the HLHL preamble");
  }
}

ReflectivePacket build_packet(std::string_view bits, double symbol_width_m, double reflectance_high,
                              double reflectance_low) {
  ReflectivePacket packet;
  packet.symbols = preamble();
  const SymbolSeq data = manchester_encode(bits);
  packet.symbols.insert(packet.symbols.end(), data.begin(), data.end());
  packet.symbol_width_m = symbol_width_m;
  packet.reflectance_high = reflectance_high;
  packet.reflectance_low = reflectance_low;
  validate(packet);
  return packet;
}

}  // namespace pvlc
