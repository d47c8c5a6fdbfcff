#include "pvlc/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace pvlc {

std::vector<double> resample_linear(const std::vector<double> &samples, std::size_t length) {
  if (samples.empty()) {
    throw std::invalid_argument("cannot resample an empty series");
  }
  if (length == 0) {
    throw std::invalid_argument("resample length must be positive");
  }
  std::vector<double> out(length);
  if (samples.size() == 1 || length == 1) {
    std::fill(out.begin(), out.end(), samples.front());
    return out;
  }
  const double step = static_cast<double>(samples.size() - 1) / static_cast<double>(length - 1);
  for (std::size_t k = 0; k < length; ++k) {
    const double x = static_cast<double>(k) * step;
    const auto i = std::min(static_cast<std::size_t>(x), samples.size() - 2);
    const double frac = x - static_cast<double>(i);
    out[k] = samples[i] + frac * (samples[i + 1] - samples[i]);
  }
  out.back() = samples.back();
  return out;
}

std::vector<double> z_normalize(const std::vector<double> &samples) {
  if (samples.empty()) {
    throw std::invalid_argument("cannot normalize an empty series");
  }
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) {
    mean += v;
  }
  mean /= n;
  double var = 0.0;
  for (double v : samples) {
    var += (v - mean) * (v - mean);
  }
  var /= n;
  const double scale = std::max(std::abs(mean), 1.0);
  if (!(std::sqrt(var) > 1e-12 * scale)) {
    throw std::invalid_argument("series is constant; z-normalization is undefined");
  }
  const double sd = std::sqrt(var);
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(), [&](double v) { return (v - mean) / sd; });
  return out;
}

std::vector<double> normalize_series(const std::vector<double> &samples, std::size_t length) {
  return z_normalize(resample_linear(samples, length));
}

Template make_template(std::string label, RssTrace trace, std::size_t length) {
  if (label.empty()) {
    throw std::invalid_argument("template label must not be empty");
  }
  Template t{std::move(label), std::move(trace), {}};
  t.normalized = normalize_series(t.trace.samples, length);
  return t;
}

double dtw_distance(const std::vector<double> &a, const std::vector<double> &b, const DtwOptions &opts) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("dtw_distance needs two non-empty series");
  }
  const std::size_t n = a.size(), m = b.size();
  const std::size_t gap = n > m ? n - m : m - n;
  const std::size_t radius = opts.radius ? std::max(*opts.radius, gap) : std::max(n, m);

  // Each cell carries (cost, length); cheaper wins, and equal cost prefers the longer path.
  struct Cell {
    double cost;
    std::size_t len;
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto better = [](const Cell &x, const Cell &y) { return x.cost < y.cost || (x.cost == y.cost && x.len > y.len); };

  std::vector<Cell> prev(m, Cell{inf, 0}), cur(m, Cell{inf, 0});
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(cur.begin(), cur.end(), Cell{inf, 0});
    const std::size_t lo = i > radius ? i - radius : 0;
    const std::size_t hi = std::min(m - 1, i + radius);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double local = std::abs(a[i] - b[j]);
      if (i == 0 && j == 0) {
        cur[j] = Cell{local, 1};
        continue;
      }
      Cell best{inf, 0};
      if (i > 0 && j > 0 && better(prev[j - 1], best)) {
        best = prev[j - 1];
      }
      if (i > 0 && better(prev[j], best)) {
        best = prev[j];
      }
      if (j > 0 && better(cur[j - 1], best)) {
        best = cur[j - 1];
      }
      if (best.cost < inf) {
        cur[j] = Cell{best.cost + local, best.len + 1};
      }
    }
    std::swap(prev, cur);
  }
  const Cell end = prev[m - 1];
  return end.cost / static_cast<double>(end.len);
}

DtwResult classify_trace(const RssTrace &trace, const std::vector<Template> &templates, const DtwOptions &opts) {
  if (templates.empty()) {
    throw std::invalid_argument("classify_trace needs at least one template");
  }
  const std::size_t length = templates.front().normalized.size();
  for (const auto &t : templates) {
    if (t.normalized.size() != length || length == 0) {
      throw std::invalid_argument("templates must share one normalized length");
    }
  }
  const auto series = normalize_series(trace.samples, length);

  DtwResult out;
  for (const auto &t : templates) {
    out.distances[t.label] = dtw_distance(series, t.normalized, opts);
  }
  // std::map iterates in label order, so the first minimum is the lexicographic tie-break.
  double best = std::numeric_limits<double>::infinity();
  for (const auto &[label, d] : out.distances) {
    if (d < best) {
      best = d;
      out.best_label = label;
    }
  }
  if (out.distances.size() < 2) {
    out.margin = 1.0;
    return out;
  }
  double second = std::numeric_limits<double>::infinity();
  for (const auto &[label, d] : out.distances) {
    if (label != out.best_label) {
      second = std::min(second, d);
    }
  }
  if (best > 0.0) {
    out.margin = second / best;
  } else {
    out.margin = second > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return out;
}

std::size_t hamming_distance(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming distance needs equal-length strings");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += a[i] != b[i];
  }
  return d;
}

namespace {

std::string code_string(std::uint64_t v, std::size_t bits) {
  std::string s(bits, '0');
  for (std::size_t i = 0; i < bits; ++i) {
    if (v >> (bits - 1 - i) & 1U) {
      s[i] = '1';
    }
  }
  return s;
}

}  // namespace

Codebook build_codebook(std::size_t bit_length, std::size_t count) {
  if (bit_length == 0 || bit_length > 24) {
    throw std::invalid_argument("codebook bit length must be in [1, 24]");
  }
  const std::uint64_t space = std::uint64_t{1} << bit_length;
  if (count == 0 || count > space) {
    throw std::invalid_argument("codebook size must be in [1, 2^N]");
  }
  if (count == 1) {
    return Codebook{{code_string(0, bit_length)}, bit_length};
  }
  for (std::size_t d = bit_length; d >= 1; --d) {
    std::vector<std::uint64_t> kept;
    for (std::uint64_t v = 0; v < space && kept.size() < count; ++v) {
      const bool far = std::all_of(kept.begin(), kept.end(), [&](std::uint64_t k) {
        return static_cast<std::size_t>(std::popcount(k ^ v)) >= d;
      });
      if (far) {
        kept.push_back(v);
      }
    }
    if (kept.size() == count) {
      Codebook cb;
      cb.min_hamming = bit_length;
      for (std::size_t i = 0; i < kept.size(); ++i) {
        for (std::size_t j = i + 1; j < kept.size(); ++j) {
          cb.min_hamming = std::min<std::size_t>(cb.min_hamming, std::popcount(kept[i] ^ kept[j]));
        }
        cb.codes.push_back(code_string(kept[i], bit_length));
      }
      return cb;
    }
  }
  throw std::logic_error("unreachable: d = 1 always admits every code");
}

}  // namespace pvlc
