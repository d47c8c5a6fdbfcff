#include "pvlc/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "pvlc/codec.hpp"

namespace pvlc {

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
Line fit_line(const std::vector<double> &x, const std::vector<double> &y, const char *what) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double scale = std::max(std::abs(mx), 1e-300);
  if (!(sxx > 1e-24 * scale * scale * n)) {
    throw FitError(std::string(what) + ": abscissae do not vary, slope is undefined");
  }
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (l.slope * x[i] + l.intercept);
    ss += r * r;
  }
  l.residual = std::sqrt(ss);
  return l;
}

}  // namespace

TrendModel fit_trends(const std::vector<SweepPoint> &sweep, std::string fitted_from) {
  if (sweep.size() < 3) {
    throw FitError("need at least 3 sweep points, got " + std::to_string(sweep.size()));
  }
  std::set<double> heights;
  std::vector<double> h, w, log_t, t;
  for (const auto &p : sweep) {
    if (!(p.height_m > 0.0) || !(p.min_width_m > 0.0) || !(p.throughput_bps > 0.0) || !std::isfinite(p.height_m) ||
        !std::isfinite(p.min_width_m) || !std::isfinite(p.throughput_bps)) {
      throw FitError("sweep points need positive, finite height, width and throughput");
    }
    heights.insert(p.height_m);
    h.push_back(p.height_m);
    w.push_back(p.min_width_m);
    t.push_back(p.throughput_bps);
    log_t.push_back(std::log(p.throughput_bps));
  }
  if (heights.size() < 3) {
    throw FitError("need at least 3 distinct heights, got " + std::to_string(heights.size()));
  }

  TrendModel m;
  m.fitted_from = std::move(fitted_from);
  const Line hw = fit_line(w, h, "height vs width");
  m.width_slope_a = hw.slope;
  m.width_intercept_b = hw.intercept;
  m.width_residual = hw.residual;

  const Line lt = fit_line(h, log_t, "log throughput vs height");
  m.thr_scale_c = std::exp(lt.intercept);
  m.thr_decay_d = -lt.slope;
  m.thr_log_residual = lt.residual;

  // Straight-line alternative, scored in the same log space.
  const Line lin = fit_line(h, t, "throughput vs height");
  double ss = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double pred = lin.slope * h[i] + lin.intercept;
    if (!(pred > 0.0)) {
      ss = std::numeric_limits<double>::infinity();
      break;
    }
    const double r = log_t[i] - std::log(pred);
    ss += r * r;
  }
  m.thr_linear_log_residual = std::sqrt(ss);

  if (!(m.width_slope_a > 0.0)) {
    throw FitError("fitted height-vs-width slope is not positive (" + std::to_string(m.width_slope_a) + ")");
  }
  if (!(m.thr_decay_d > 0.0)) {
    throw FitError("throughput does not decay with height (d = " + std::to_string(m.thr_decay_d) + ")");
  }
  return m;
}

double max_height_for_width(const TrendModel &model, double width_m) {
  if (!(width_m > 0.0)) {
    throw std::invalid_argument("width must be positive");
  }
  return model.width_slope_a * width_m + model.width_intercept_b;
}

double throughput_at_height(const TrendModel &model, double height_m) {
  return model.thr_scale_c * std::exp(-model.thr_decay_d * height_m);
}

nlohmann::json to_json(const TrendModel &m) {
  return nlohmann::json{{"width_slope_a", m.width_slope_a},
                        {"width_intercept_b", m.width_intercept_b},
                        {"thr_scale_c", m.thr_scale_c},
                        {"thr_decay_d", m.thr_decay_d},
                        {"width_residual", m.width_residual},
                        {"thr_log_residual", m.thr_log_residual},
                        {"thr_linear_log_residual", m.thr_linear_log_residual},
                        {"fitted_from", m.fitted_from}};
}

TrendModel trend_model_from_json(const nlohmann::json &j) {
  if (!j.is_object()) {
    throw FormatError("trend model must be a JSON object");
  }
  TrendModel m;
  try {
    m.width_slope_a = j.at("width_slope_a").get<double>();
    m.width_intercept_b = j.at("width_intercept_b").get<double>();
    m.thr_scale_c = j.at("thr_scale_c").get<double>();
    m.thr_decay_d = j.at("thr_decay_d").get<double>();
    m.width_residual = j.value("width_residual", 0.0);
    m.thr_log_residual = j.value("thr_log_residual", 0.0);
    m.thr_linear_log_residual = j.value("thr_linear_log_residual", 0.0);
    m.fitted_from = j.value("fitted_from", std::string{});
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("trend model: ") + e.what());
  }
  return m;
}

ReceiverCatalog ReceiverCatalog::builtin() {
  ReceiverCatalog c;
  for (auto kind : {ReceiverKind::PD_G1, ReceiverKind::PD_G2, ReceiverKind::PD_G3, ReceiverKind::RxLed}) {
    const ReceiverModel r = make_receiver(kind, 0.2, 1000.0);
    c.entries.push_back(ReceiverEntry{to_string(kind), r.saturation_lux, r.sensitivity});
  }
  return c;
}

void ReceiverCatalog::add(ReceiverEntry entry) {
  if (entry.name.empty() || !(entry.saturation_lux > 0.0) || !(entry.relative_sensitivity > 0.0)) {
    throw std::invalid_argument("receiver entries need a name, positive saturation and positive sensitivity");
  }
  entries.push_back(std::move(entry));
}

const ReceiverEntry &select_receiver(const ReceiverCatalog &catalog, double noise_floor_lux, double margin_frac) {
  if (!(noise_floor_lux >= 0.0) || !(margin_frac >= 0.0)) {
    throw std::invalid_argument("noise floor and margin must be non-negative");
  }
  const double need = noise_floor_lux * (1.0 + margin_frac);
  const ReceiverEntry *best = nullptr;
  for (const auto &e : catalog.entries) {
    if (e.saturation_lux > need && (!best || e.relative_sensitivity > best->relative_sensitivity)) {
      best = &e;
    }
  }
  if (!best) {
    std::ostringstream msg;
    msg << "no receiver saturates above " << need << " lux";
    throw NoViableReceiver(msg.str());
  }
  return *best;
}

Scenario sweep_scenario(const Scenario &base, double height_m, double width_m, std::uint64_t seed) {
  if (base.scene.objects.empty() || !std::holds_alternative<ReflectivePacket>(base.scene.objects.front().pattern)) {
    throw std::invalid_argument("sweep base needs a reflective packet as its first object");
  }
  if (base.scene.objects.front().speed.segments.size() != 1) {
    throw std::invalid_argument("sweep base packet must move at constant speed");
  }
  Scenario s = base;
  s.receiver.height_m = height_m;
  auto &obj = s.scene.objects.front();
  auto &packet = std::get<ReflectivePacket>(obj.pattern);
  packet.symbol_width_m = width_m;
  const double footprint = footprint_width(s.receiver);
  const double speed = obj.speed.segments.front().speed_mps;
  // Same lead-in as the base: clear of the footprint by a margin.
  const double margin = std::max(0.0, -base.scene.objects.front().start_offset_m - 0.5 * footprint_width(base.receiver));
  obj.start_offset_m = -(0.5 * footprint + margin);
  obj.speed = SpeedProfile::constant(speed);
  s.duration_s = (packet.length_m() + footprint + 2.0 * margin) / speed;
  s.seed = seed;
  s.noise.seed = seed;
  return s;
}

SweepResult run_sweep(const Scenario &base, const SweepConfig &config) {
  if (config.heights_m.empty() || config.widths_m.empty() || config.trials == 0) {
    throw std::invalid_argument("sweep needs heights, widths and at least one trial");
  }
  const auto &packet = std::get<ReflectivePacket>(base.scene.objects.at(0).pattern);
  const std::string bits = manchester_decode(SymbolSeq(packet.symbols.begin() + kPreambleLength, packet.symbols.end()));

  std::vector<double> heights = config.heights_m, widths = config.widths_m;
  std::sort(heights.begin(), heights.end());
  std::sort(widths.begin(), widths.end());

  SweepResult out;
  out.speed_mps = base.scene.objects.front().speed.segments.at(0).speed_mps;
  DecoderConfig cfg;
  for (double h : heights) {
    std::optional<double> narrowest;
    for (double w : widths) {
      bool ok = true;
      for (std::size_t k = 0; k < config.trials && ok; ++k) {
        const RssTrace trace = run(sweep_scenario(base, h, w, config.seed + k));
        const DecodeResult r = decode_trace(trace, cfg);
        ok = r.ok() && r.bits == bits;
      }
      out.cells.push_back(SweepCell{h, w, ok});
      if (ok && !narrowest) {
        narrowest = w;
      }
    }
    if (narrowest) {
      out.points.push_back(SweepPoint{h, *narrowest, out.speed_mps / (2.0 * *narrowest)});
    }
  }
  return out;
}

std::vector<std::pair<double, double>> feasibility_frontier(const SweepResult &result) {
  std::vector<std::pair<double, double>> frontier;
  std::set<double> widths;
  for (const auto &c : result.cells) {
    widths.insert(c.width_m);
  }
  for (double w : widths) {
    double best = 0.0;
    for (const auto &c : result.cells) {
      if (c.width_m == w && c.decodable) {
        best = std::max(best, c.height_m);
      }
    }
    frontier.emplace_back(w, best);
  }
  return frontier;
}

std::vector<double> parse_grid(const std::string &grid) {
  auto number = [&](const std::string &s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v)) {
      throw std::invalid_argument("bad number '" + s + "' in grid '" + grid + "'");
    }
    return v;
  };
  std::vector<double> out;
  if (grid.find(':') != std::string::npos) {
    const auto a = grid.find(':');
    const auto b = grid.find(':', a + 1);
    if (b == std::string::npos || grid.find(':', b + 1) != std::string::npos) {
      throw std::invalid_argument("grid range must be start:stop:step, got '" + grid + "'");
    }
    const double start = number(grid.substr(0, a));
    const double stop = number(grid.substr(a + 1, b - a - 1));
    const double step = number(grid.substr(b + 1));
    if (!(step > 0.0) || stop < start) {
      throw std::invalid_argument("grid range needs step > 0 and stop >= start: '" + grid + "'");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      // Round to 1e-12 so 0.2 + 7 * 0.05 prints as 0.55.
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return out;
  }
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(number(item));
  }
  if (out.empty()) {
    throw std::invalid_argument("empty grid");
  }
  return out;
}

}  // namespace pvlc
