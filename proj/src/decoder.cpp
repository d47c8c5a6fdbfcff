#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "pvlc/codec.hpp"

namespace pvlc {
namespace {

// Accepted width of each preamble extremum, in units of tau_t.
constexpr double kMinExtent = 0.3;
constexpr double kMaxExtent = 1.7;
// Phase tracking: how far from the expected boundary an edge may be, and how much of the error is applied.
constexpr double kEdgeReach = 0.3;
constexpr double kPhaseGain = 0.5;

struct Extremum {
  std::size_t idx;
  bool peak;
};

// Alternating peaks and valleys whose swings are at least `floor`. Only confirmed extrema
// (followed by a swing of at least `floor`) are reported; the first one is always a peak.
std::vector<Extremum> zigzag(const std::vector<double> &s, double floor) {
  std::vector<Extremum> out;
  if (s.empty()) {
    return out;
  }
  enum class State { SeekRise, TrackPeak, TrackValley } state = State::SeekRise;
  double ext = s[0];
  std::size_t ext_idx = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double x = s[i];
    switch (state) {
      case State::SeekRise:
        if (x < ext) {
          ext = x;
          ext_idx = i;
        } else if (x - ext >= floor) {
          state = State::TrackPeak;
          ext = x;
          ext_idx = i;
        }
        break;
      case State::TrackPeak:
        if (x > ext) {
          ext = x;
          ext_idx = i;
        } else if (ext - x >= floor) {
          out.push_back({ext_idx, true});
          state = State::TrackValley;
          ext = x;
          ext_idx = i;
        }
        break;
      case State::TrackValley:
        if (x < ext) {
          ext = x;
          ext_idx = i;
        } else if (x - ext >= floor) {
          out.push_back({ext_idx, false});
          state = State::TrackPeak;
          ext = x;
          ext_idx = i;
        }
        break;
    }
  }
  return out;
}

struct Span {
  std::size_t first;
  std::size_t last;
  std::size_t count() const { return last - first + 1; }
};

// Contiguous run around `idx` where the signal stays on the extremum's side of `level`.
Span extent(const std::vector<double> &s, std::size_t idx, double level, bool peak) {
  auto inside = [&](std::size_t j) { return peak ? s[j] >= level : s[j] <= level; };
  Span span{idx, idx};
  while (span.first > 0 && inside(span.first - 1)) {
    --span.first;
  }
  while (span.last + 1 < s.size() && inside(span.last + 1)) {
    ++span.last;
  }
  return span;
}

// Fractional sample position where the signal first crosses `level` walking away from the
// extremum at `idx` (step -1 or +1), linearly interpolated between samples.
std::optional<double> crossing(const std::vector<double> &s, std::size_t idx, double level, bool peak, int step) {
  auto inside = [&](std::size_t j) { return peak ? s[j] > level : s[j] < level; };
  std::size_t j = idx;
  while (true) {
    if ((step < 0 && j == 0) || (step > 0 && j + 1 >= s.size())) {
      return std::nullopt;
    }
    const std::size_t next = step < 0 ? j - 1 : j + 1;
    if (!inside(next)) {
      const double frac = (s[j] - level) / (s[j] - s[next]);
      return static_cast<double>(j) + step * frac;
    }
    j = next;
  }
}

struct Located {
  double center;  // fractional sample index
  double width;   // samples between the two crossings
};

// Symbol center of an extremum: a box-blurred step is a linear ramp centered on the symbol
// boundary, so the half-swing crossing on each side marks that boundary.
std::optional<Located> locate(const std::vector<double> &s, std::size_t idx, double own, double left_other,
                              double right_other, bool peak) {
  const auto lo = crossing(s, idx, 0.5 * (own + left_other), peak, -1);
  const auto hi = crossing(s, idx, 0.5 * (own + right_other), peak, +1);
  if (!lo || !hi) {
    return std::nullopt;
  }
  return Located{0.5 * (*lo + *hi), *hi - *lo};
}

std::size_t range_argmin(const std::vector<double> &s, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(std::min_element(s.begin() + lo, s.begin() + hi + 1) - s.begin());
}

// Noise-robust level of an extremum: mean of the contiguous run within 15% of the swing
// towards `other` on either side of the extremum value.
double plateau_level(const std::vector<double> &s, std::size_t idx, double other) {
  const double tol = 0.15 * std::abs(s[idx] - other);
  auto inside = [&](std::size_t j) { return std::abs(s[j] - s[idx]) <= tol; };
  std::size_t first = idx, last = idx;
  while (first > 0 && inside(first - 1)) {
    --first;
  }
  while (last + 1 < s.size() && inside(last + 1)) {
    ++last;
  }
  double sum = 0.0;
  for (std::size_t j = first; j <= last; ++j) {
    sum += s[j];
  }
  return sum / static_cast<double>(last - first + 1);
}

double window_max(const std::vector<double> &s, double fs, double t_lo, double t_hi) {
  const auto n = static_cast<double>(s.size());
  double lo = std::ceil(t_lo * fs);
  double hi = std::floor(t_hi * fs);
  lo = std::clamp(lo, 0.0, n - 1.0);
  hi = std::clamp(hi, 0.0, n - 1.0);
  if (hi < lo) {
    hi = lo = std::clamp(std::round(0.5 * (t_lo + t_hi) * fs), 0.0, n - 1.0);
  }
  return *std::max_element(s.begin() + static_cast<std::ptrdiff_t>(lo), s.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
}

double window_range(const std::vector<double> &s, double fs, double t_lo, double t_hi) {
  const auto n = static_cast<double>(s.size());
  const double lo = std::clamp(std::ceil(t_lo * fs), 0.0, n - 1.0);
  const double hi = std::clamp(std::floor(t_hi * fs), lo, n - 1.0);
  const auto [mn, mx] = std::minmax_element(s.begin() + static_cast<std::ptrdiff_t>(lo),
                                            s.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  return *mx - *mn;
}

// True when the window centered on `t` still lies (at least half) inside the trace.
bool window_in_trace(std::size_t n, double fs, double t) { return t * fs <= static_cast<double>(n) - 1.0; }

struct Search {
  std::vector<double> smoothed;
  double floor = 0.0;
  PreambleFix fix;
};

// Time where the signal crosses `level` in the given direction closest to `expected`,
// searching +-reach seconds.
std::optional<double> nearest_edge(const std::vector<double> &s, double fs, double expected, double reach, double level,
                                   bool rising) {
  const auto n = static_cast<std::ptrdiff_t>(s.size());
  const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::floor((expected - reach) * fs)));
  const auto hi = std::min<std::ptrdiff_t>(n - 2, static_cast<std::ptrdiff_t>(std::ceil((expected + reach) * fs)));
  std::optional<double> best;
  for (std::ptrdiff_t i = lo; i <= hi; ++i) {
    const double a = s[static_cast<std::size_t>(i)], b = s[static_cast<std::size_t>(i) + 1];
    const bool crosses = rising ? (a <= level && b > level) : (a >= level && b < level);
    if (!crosses) {
      continue;
    }
    const double t = (static_cast<double>(i) + (a - level) / (a - b)) / fs;
    if (std::abs(t - expected) <= reach && (!best || std::abs(t - expected) < std::abs(*best - expected))) {
      best = t;
    }
  }
  return best;
}

Search search_preamble(const RssTrace &trace, const DecoderConfig &cfg) {
  cfg.validate();
  if (trace.empty()) {
    throw std::invalid_argument("trace is empty");
  }
  if (!(trace.sampling_rate_hz > 0.0)) {
    throw std::invalid_argument("trace sampling rate must be positive");
  }
  if (is_saturated(trace, cfg)) {
    throw DecodeError(DecodeStatus::Saturated, "trace sits at the detector ceiling");
  }

  Search out;
  out.smoothed = smooth(trace.samples, cfg.smoothing_window);
  const auto &s = out.smoothed;
  const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
  const double range = *hi_it - *lo_it;
  const double scale = std::max(std::abs(*hi_it), std::abs(*lo_it));
  if (!(range > 1e-12 * scale) || range == 0.0) {
    throw DecodeError(DecodeStatus::PreambleNotFound, "trace has no dynamic range");
  }
  out.floor = cfg.peak_prominence_frac * range;

  const double fs = trace.sampling_rate_hz;
  const auto extrema = zigzag(s, out.floor);
  for (std::size_t i = 0; i + 2 < extrema.size(); ++i) {
    if (!extrema[i].peak) {
      continue;
    }
    const std::size_t ia = extrema[i].idx, ib = extrema[i + 1].idx, ic = extrema[i + 2].idx;
    const double ra = plateau_level(s, ia, s[ib]);
    const double rb = plateau_level(s, ib, 0.5 * (s[ia] + s[ic]));
    const double rc = plateau_level(s, ic, s[ib]);
    // B is a single LOW symbol bounded by A and C; its width sizes the search for the outer neighbours.
    const auto lb = locate(s, ib, rb, ra, rc, false);
    if (!lb) {
      continue;
    }
    const auto reach = static_cast<std::ptrdiff_t>(std::ceil(2.0 * lb->width));
    const auto ab = static_cast<std::ptrdiff_t>(lb->center - 0.5 * lb->width);
    const auto bc = static_cast<std::ptrdiff_t>(lb->center + 0.5 * lb->width);
    const auto last = static_cast<std::ptrdiff_t>(s.size()) - 1;
    const std::size_t i_before = range_argmin(s, std::clamp<std::ptrdiff_t>(ab - reach, 0, last), std::clamp<std::ptrdiff_t>(ab, 0, last));
    const std::size_t i_after = range_argmin(s, std::clamp<std::ptrdiff_t>(bc, 0, last), std::clamp<std::ptrdiff_t>(bc + reach, 0, last));
    const double before_a = plateau_level(s, i_before, ra);
    const double after_c = plateau_level(s, i_after, rc);
    const auto la = locate(s, ia, ra, before_a, rb, true);
    const auto lc = locate(s, ic, rc, rb, after_c, true);
    if (!la || !lc) {
      continue;
    }
    const double ta = la->center / fs, tb = lb->center / fs, tc = lc->center / fs;
    if (!(ta < tb && tb < tc)) {
      continue;
    }
    const double first_half = tb - ta, second_half = tc - tb;
    if (std::max(first_half, second_half) > cfg.max_period_skew * std::min(first_half, second_half)) {
      continue;
    }
    const auto to_index = [&](double c) {
      return static_cast<std::size_t>(std::clamp(std::lround(c), 0L, static_cast<long>(s.size()) - 1));
    };
    const PreambleFix fix =
        make_fix(to_index(la->center), to_index(lb->center), to_index(lc->center), ra, rb, rc, ta, tb, tc);
    const double samples_per_symbol = fix.tau_t * fs;
    const auto plausible = [&](const Located &l) {
      return l.width >= kMinExtent * samples_per_symbol && l.width <= kMaxExtent * samples_per_symbol;
    };
    if (!plausible(*la) || !plausible(*lb) || !plausible(*lc)) {
      continue;
    }
    // The fourth preamble symbol must read LOW.
    const double t4 = fix.t_c + fix.tau_t;
    const double half = 0.5 * cfg.window_core_frac * fix.tau_t;
    if (!window_in_trace(s.size(), fs, t4) ||
        window_max(s, fs, t4 - half, t4 + half) > fix.decision_level(cfg.decision_level_frac)) {
      continue;
    }
    out.fix = fix;
    return out;
  }
  throw DecodeError(DecodeStatus::PreambleNotFound, "no HIGH-LOW-HIGH-LOW preamble in trace");
}

}  // namespace

void DecoderConfig::validate() const {
  if (smoothing_window == 0 || smoothing_window % 2 == 0) {
    throw std::invalid_argument("smoothing_window must be odd and >= 1");
  }
  auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_open_unit(peak_prominence_frac)) {
    throw std::invalid_argument("peak_prominence_frac must lie in (0, 1)");
  }
  if (!in_open_unit(decision_level_frac)) {
    throw std::invalid_argument("decision_level_frac must lie in (0, 1)");
  }
  if (!(saturation_frac > 0.0 && saturation_frac <= 1.0)) {
    throw std::invalid_argument("saturation_frac must lie in (0, 1]");
  }
  if (!in_open_unit(saturated_sample_frac)) {
    throw std::invalid_argument("saturated_sample_frac must lie in (0, 1)");
  }
  if (!(min_preamble_seconds > 0.0)) {
    throw std::invalid_argument("min_preamble_seconds must be positive");
  }
  if (!(window_core_frac > 0.0 && window_core_frac <= 1.0)) {
    throw std::invalid_argument("window_core_frac must lie in (0, 1]");
  }
  if (!(max_period_skew >= 1.0)) {
    throw std::invalid_argument("max_period_skew must be >= 1");
  }
}

double magnitude_threshold(double r_a, double r_b, double r_c) { return ((r_a - r_b) + (r_c - r_b)) / 2; }

double period_threshold(double t_a, double t_b, double t_c) { return ((t_b - t_a) + (t_c - t_b)) / 2; }

PreambleFix make_fix(std::size_t idx_a, std::size_t idx_b, std::size_t idx_c, double r_a, double r_b, double r_c,
                     double t_a, double t_b, double t_c) {
  if (!(t_a < t_b && t_b < t_c)) {
    throw std::invalid_argument("preamble anchors must satisfy t_A < t_B < t_C");
  }
  if (!(r_a > r_b && r_c > r_b)) {
    throw std::invalid_argument("preamble anchors must satisfy r_A > r_B < r_C");
  }
  PreambleFix fix;
  fix.idx_a = idx_a;
  fix.idx_b = idx_b;
  fix.idx_c = idx_c;
  fix.r_a = r_a;
  fix.r_b = r_b;
  fix.r_c = r_c;
  fix.t_a = t_a;
  fix.t_b = t_b;
  fix.t_c = t_c;
  fix.tau_r = magnitude_threshold(r_a, r_b, r_c);
  fix.tau_t = period_threshold(t_a, t_b, t_c);
  return fix;
}

std::vector<double> smooth(const std::vector<double> &samples, std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw std::invalid_argument("smoothing window must be odd and >= 1");
  }
  const std::size_t n = samples.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + samples[i];
  }
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return out;
}

bool is_saturated(const RssTrace &trace, const DecoderConfig &cfg) {
  if (!trace.meta.saturation_level || trace.empty()) {
    return false;
  }
  const double level = cfg.saturation_frac * *trace.meta.saturation_level;
  const auto at_ceiling = std::count_if(trace.samples.begin(), trace.samples.end(), [&](double x) { return x >= level; });
  return static_cast<double>(at_ceiling) > cfg.saturated_sample_frac * static_cast<double>(trace.size());
}

PreambleFix find_preamble(const RssTrace &trace, const DecoderConfig &cfg) { return search_preamble(trace, cfg).fix; }

DecodeResult decode_trace(const RssTrace &trace, const DecoderConfig &cfg) {
  DecodeResult result;
  Search search;
  try {
    search = search_preamble(trace, cfg);
  } catch (const DecodeError &e) {
    result.status = e.status();
    result.message = e.what();
    return result;
  }
  const PreambleFix &fix = search.fix;
  const auto &s = search.smoothed;
  const double fs = trace.sampling_rate_hz;
  const double level = fix.decision_level(cfg.decision_level_frac);
  double phase = 0.0;
  const auto center = [&](std::size_t k) { return fix.t_c + static_cast<double>(k) * fix.tau_t + phase; };
  const double half = 0.5 * cfg.window_core_frac * fix.tau_t;
  Symbol prev = Symbol::Low;  // window 1, the last preamble symbol
  const auto read = [&](std::size_t k) {
    const double t = center(k);
    const Symbol sym = window_max(s, fs, t - half, t + half) > level ? Symbol::High : Symbol::Low;
    if (cfg.track_phase && sym != prev) {
      const double expected = t - 0.5 * fix.tau_t;
      if (const auto edge = nearest_edge(s, fs, expected, kEdgeReach * fix.tau_t, level, sym == Symbol::High)) {
        phase += kPhaseGain * (*edge - expected);
      }
    }
    prev = sym;
    return sym;
  };

  result.preamble = fix;
  result.symbols = preamble();
  SymbolSeq data;
  // Window k = 1 is the last preamble symbol; data starts at k = 2.
  if (cfg.expected_bits) {
    const std::size_t wanted = 2 * *cfg.expected_bits;
    for (std::size_t k = 2; k < 2 + wanted && window_in_trace(s.size(), fs, center(k)); ++k) {
      data.push_back(read(k));
    }
    result.symbols.insert(result.symbols.end(), data.begin(), data.end());
    if (data.size() < wanted) {
      result.status = DecodeStatus::ManchesterViolation;
      result.message = "trace ended after " + std::to_string(data.size()) + " of " + std::to_string(wanted) +
                       " data symbols";
      return result;
    }
  } else {
    // Every Manchester pair holds a transition; a pair span without one marks the end of the packet.
    for (std::size_t k = 2; window_in_trace(s.size(), fs, center(k + 1)); k += 2) {
      if (window_range(s, fs, center(k), center(k + 1)) < search.floor) {
        break;
      }
      data.push_back(read(k));
      data.push_back(read(k + 1));
    }
    result.symbols.insert(result.symbols.end(), data.begin(), data.end());
  }

  try {
    result.bits = manchester_decode(data);
    result.status = DecodeStatus::Ok;
  } catch (const DecodeError &e) {
    result.status = e.status();
    result.message = e.what();
  }
  return result;
}

std::size_t find_vehicle_preamble(const RssTrace &trace, const DecoderConfig &cfg) {
  cfg.validate();
  if (trace.empty() || !(trace.sampling_rate_hz > 0.0)) {
    throw std::invalid_argument("trace must be non-empty with a positive sampling rate");
  }
  const double fs = trace.sampling_rate_hz;
  // Smooth over half the minimum preamble duration so that packet symbols blur into the roof.
  auto window = static_cast<std::size_t>(std::lround(0.5 * cfg.min_preamble_seconds * fs));
  window = std::max<std::size_t>(window | 1U, 3);
  const auto s = smooth(trace.samples, window);
  const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
  const double range = *hi_it - *lo_it;
  const double scale = std::max(std::abs(*hi_it), std::abs(*lo_it));
  if (!(range > 1e-12 * scale) || range == 0.0) {
    throw DecodeError(DecodeStatus::PreambleNotFound, "trace has no vehicle signature");
  }
  const auto min_samples = cfg.min_preamble_seconds * fs;
  const auto extrema = zigzag(s, cfg.peak_prominence_frac * range);
  for (std::size_t i = 0; i + 1 < extrema.size(); ++i) {
    if (!extrema[i].peak) {
      continue;
    }
    const std::size_t hood = extrema[i].idx, windshield = extrema[i + 1].idx;
    const double level = 0.5 * (s[hood] + s[windshield]);
    const Span high = extent(s, hood, level, true);
    const Span low = extent(s, windshield, level, false);
    if (static_cast<double>(high.count()) < min_samples || static_cast<double>(low.count()) < min_samples) {
      continue;
    }
    if (low.last + 1 >= s.size()) {
      break;
    }
    return low.last + 1;
  }
  throw DecodeError(DecodeStatus::PreambleNotFound, "no hood peak / windshield valley signature");
}

DecodeResult decode_vehicle_trace(const RssTrace &trace, const DecoderConfig &cfg) {
  DecodeResult result;
  std::size_t anchor = 0;
  try {
    if (is_saturated(trace, cfg)) {
      throw DecodeError(DecodeStatus::Saturated, "trace sits at the detector ceiling");
    }
    anchor = find_vehicle_preamble(trace, cfg);
  } catch (const DecodeError &e) {
    result.status = e.status();
    result.message = e.what();
    return result;
  }
  result = decode_trace(trace.slice(anchor), cfg);
  result.vehicle_anchor = anchor;
  if (result.preamble) {
    auto &fix = *result.preamble;
    const double offset_s = static_cast<double>(anchor) / trace.sampling_rate_hz;
    fix.idx_a += anchor;
    fix.idx_b += anchor;
    fix.idx_c += anchor;
    fix.t_a += offset_s;
    fix.t_b += offset_s;
    fix.t_c += offset_s;
  }
  return result;
}

}  // namespace pvlc
