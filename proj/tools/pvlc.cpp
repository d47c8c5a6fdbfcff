// pvlc: command-line front end for the passive VLC simulator and decoder.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pvlc/channel.hpp"
#include "pvlc/classify.hpp"
#include "pvlc/codec.hpp"
#include "pvlc/planner.hpp"
#include "pvlc/scenario.hpp"
#include "pvlc/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pvlc;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kDecodeFailure = 3, kSaturated = 4 };

// Bad input named by the user (flag value or file). Maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path &p) {
  std::ifstream in(p);
  if (!in) {
    throw UsageError("cannot open " + p.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes through a temporary so a failed run never leaves a partial file behind.
void write_file(const fs::path &p, const std::string &text) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw UsageError("cannot write " + p.string());
    }
    out << text;
    if (!out) {
      throw UsageError("write failed for " + p.string());
    }
  }
  fs::rename(tmp, p);
}

void print_json(const json &j) { std::cout << j.dump(2) << "\n"; }

RssTrace load_trace_arg(const std::string &path) {
  try {
    return parse_trace(read_file(path));
  } catch (const FormatError &e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string dotted_code(const SymbolSeq &symbols) {
  std::string s = to_string(symbols);
  if (s.size() > kPreambleLength) {
    s.insert(kPreambleLength, ".");
  }
  return s;
}

// ---- encode ----------------------------------------------------------------

struct EncodeOpts {
  std::string bits;
  double width_m = 0.03;
  double r_high = 0.9;
  double r_low = 0.05;
};

int cmd_encode(const EncodeOpts &o) {
  if (o.bits.find_first_not_of("01") != std::string::npos) {
    throw UsageError("--bits: only '0' and '1' are allowed, got '" + o.bits + "'");
  }
  if (!(o.width_m > 0.0)) {
    throw UsageError("--width-m: must be positive");
  }
  if (!(o.r_high > o.r_low) || o.r_high > 1.0 || o.r_low < 0.0) {
    throw UsageError("--r-high/--r-low: need 0 <= r-low < r-high <= 1");
  }
  const ReflectivePacket packet = build_packet(o.bits, o.width_m, o.r_high, o.r_low);
  json j = to_json(packet);
  j["code"] = dotted_code(packet.symbols);
  j["length_m"] = packet.length_m();
  print_json(j);
  return kOk;
}

// ---- scenario / simulate ---------------------------------------------------

int cmd_scenario(const std::string &name, std::uint64_t seed, const std::string &out, bool list) {
  if (list) {
    for (const auto &n : scenarios::names()) {
      std::cout << n << "\n";
    }
    return kOk;
  }
  if (name.empty()) {
    throw UsageError("scenario: give a NAME or --list");
  }
  Scenario s;
  try {
    s = scenarios::by_name(name, seed);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  if (out.empty()) {
    std::cout << serialize(s);
  } else {
    write_file(out, serialize(s));
  }
  return kOk;
}

Scenario load_scenario_arg(const std::string &path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const FormatError &e) {
    throw UsageError(path + ": " + e.what());
  }
}

int cmd_simulate(const std::string &scenario_path, const std::string &out) {
  const Scenario s = load_scenario_arg(scenario_path);
  RssTrace trace;
  try {
    trace = run(s);
  } catch (const std::invalid_argument &e) {
    throw UsageError(scenario_path + ": " + e.what());
  }
  if (out.empty()) {
    std::cout << format_trace(trace);
  } else {
    write_file(out, format_trace(trace));
  }
  return kOk;
}

// ---- decode ----------------------------------------------------------------

struct DecodeOpts {
  std::string trace;
  std::optional<std::size_t> expected_bits;
  bool vehicle = false;
  DecoderConfig cfg;
};

json anchor_json(std::size_t idx, double t, double r) { return json{{"index", idx}, {"time_s", t}, {"rss", r}}; }

int cmd_decode(DecodeOpts o) {
  const RssTrace trace = load_trace_arg(o.trace);
  o.cfg.expected_bits = o.expected_bits;
  try {
    o.cfg.validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  const DecodeResult r = o.vehicle ? decode_vehicle_trace(trace, o.cfg) : decode_trace(trace, o.cfg);
  json j{{"status", to_string(r.status)}, {"bits", r.bits}, {"symbols", to_string(r.symbols)}};
  if (r.preamble) {
    const auto &f = *r.preamble;
    j["tau_r"] = f.tau_r;
    j["tau_t_s"] = f.tau_t;
    j["decision_level"] = f.decision_level(o.cfg.decision_level_frac);
    j["anchors"] = json{{"A", anchor_json(f.idx_a, f.t_a, f.r_a)},
                        {"B", anchor_json(f.idx_b, f.t_b, f.r_b)},
                        {"C", anchor_json(f.idx_c, f.t_c, f.r_c)}};
  }
  if (r.vehicle_anchor) {
    j["vehicle_anchor"] = anchor_json(*r.vehicle_anchor, trace.time_at(*r.vehicle_anchor),
                                      trace.samples.at(*r.vehicle_anchor));
  }
  if (!r.message.empty()) {
    j["message"] = r.message;
  }
  print_json(j);
  switch (r.status) {
    case DecodeStatus::Ok:
      return kOk;
    case DecodeStatus::Saturated:
      return kSaturated;
    default:
      return kDecodeFailure;
  }
}

// ---- classify / templates --------------------------------------------------

std::vector<Template> load_templates(const fs::path &dir) {
  if (!fs::is_directory(dir)) {
    throw UsageError("--templates: " + dir.string() + " is not a directory");
  }
  std::vector<std::pair<std::string, fs::path>> entries;
  const fs::path manifest = dir / "manifest.json";
  if (fs::exists(manifest)) {
    json m;
    try {
      m = json::parse(read_file(manifest));
      for (const auto &e : m.at("templates")) {
        entries.emplace_back(e.at("label").get<std::string>(), dir / e.at("file").get<std::string>());
      }
    } catch (const json::exception &e) {
      throw UsageError(manifest.string() + ": " + e.what());
    }
  } else {
    for (const auto &f : fs::directory_iterator(dir)) {
      if (f.path().extension() == ".csv") {
        entries.emplace_back(f.path().stem().string(), f.path());
      }
    }
    std::sort(entries.begin(), entries.end());
  }
  if (entries.empty()) {
    throw UsageError("--templates: no templates in " + dir.string());
  }
  std::vector<Template> out;
  for (const auto &[label, file] : entries) {
    try {
      out.push_back(make_template(label, load_trace_arg(file.string())));
    } catch (const std::invalid_argument &e) {
      throw UsageError(file.string() + ": " + e.what());
    }
  }
  return out;
}

int cmd_classify(const std::string &trace_path, const std::string &dir, std::optional<std::size_t> radius) {
  const RssTrace trace = load_trace_arg(trace_path);
  const auto templates = load_templates(dir);
  DtwResult r;
  try {
    r = classify_trace(trace, templates, DtwOptions{radius});
  } catch (const std::invalid_argument &e) {
    throw UsageError(trace_path + ": " + e.what());
  }
  json distances = json::object();
  for (const auto &[label, d] : r.distances) {
    distances[label] = d;
  }
  print_json(json{{"best", r.best_label},
                  {"distances", distances},
                  {"margin", std::isfinite(r.margin) ? json(r.margin) : json("inf")}});
  return kOk;
}

int cmd_make_templates(const std::string &out_dir, const std::string &bits_list, const std::string &base_path) {
  std::vector<std::string> labels;
  std::stringstream ss(bits_list);
  for (std::string b; std::getline(ss, b, ',');) {
    if (b.find_first_not_of("01") != std::string::npos) {
      throw UsageError("--bits: '" + b + "' is not a bit string");
    }
    labels.push_back(b);
  }
  if (labels.empty()) {
    throw UsageError("--bits: no labels given");
  }
  fs::create_directories(out_dir);
  json manifest{{"templates", json::array()}};
  for (const auto &label : labels) {
    Scenario s = base_path.empty() ? scenarios::desk_baseline(label, 1) : load_scenario_arg(base_path);
    auto &obj = s.scene.objects.at(0);
    auto *packet = std::get_if<ReflectivePacket>(&obj.pattern);
    if (!packet) {
      throw UsageError("--base: first scene object must be a reflective packet");
    }
    *packet = build_packet(label, packet->symbol_width_m, packet->reflectance_high, packet->reflectance_low);
    // Clean references: no random noise, and long enough for the whole packet.
    s.noise.gaussian_sigma_lux = 0.0;
    const double speed = obj.speed.segments.at(0).speed_mps;
    s.duration_s = std::max(s.duration_s, (packet->length_m() + footprint_width(s.receiver) - obj.start_offset_m) / speed);
    const std::string file = (label.empty() ? std::string("empty") : label) + ".csv";
    write_file(fs::path(out_dir) / file, format_trace(run(s)));
    manifest["templates"].push_back(json{{"label", label}, {"file", file}});
  }
  write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
  return kOk;
}

// ---- spectrum --------------------------------------------------------------

struct SpectrumOpts {
  std::string trace;
  std::optional<std::size_t> fft;
  std::string window = "hann";
  std::string csv;
  double min_prominence = kDefaultMinProminenceFrac;
  double separation = kDefaultSeparationRatio;
  double dominance = kDefaultDominanceRatio;
};

int cmd_spectrum(const SpectrumOpts &o) {
  const RssTrace trace = load_trace_arg(o.trace);
  Spectrum sp;
  PeakSet peaks;
  CollisionVerdict v;
  try {
    sp = compute_spectrum(trace, o.fft.value_or(default_fft_length(trace.size())), window_from_string(o.window));
    peaks = detect_peaks(sp, o.min_prominence);
    v = collision_verdict(peaks, o.separation, o.dominance);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  if (!o.csv.empty()) {
    std::string text = "frequency_hz,magnitude\n";
    char line[96];
    for (std::size_t k = 0; k < sp.magnitudes.size(); ++k) {
      std::snprintf(line, sizeof line, "%.17g,%.17g\n", sp.frequency(k), sp.magnitudes[k]);
      text += line;
    }
    write_file(o.csv, text);
  }
  json pk = json::array();
  for (const auto &p : peaks.peaks) {
    pk.push_back(json{{"frequency_hz", p.frequency_hz}, {"magnitude", p.magnitude}, {"prominence", p.prominence}});
  }
  print_json(json{{"verdict", to_string(v.kind)},
                  {"bin_hz", sp.bin_hz},
                  {"fft_length", sp.fft_length},
                  {"window", to_string(sp.window)},
                  {"peaks", pk}});
  return kOk;
}

// ---- sweep / fit / select-receiver -----------------------------------------

std::string format_points(const std::vector<SweepPoint> &points) {
  std::string text = "height_m,min_width_m,throughput_bps,throughput_sps\n";
  char line[160];
  for (const auto &p : points) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", p.height_m, p.min_width_m, p.throughput_bps,
                  2.0 * p.throughput_bps);
    text += line;
  }
  return text;
}

std::vector<SweepPoint> parse_points(const std::string &path) {
  std::stringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("height_m,min_width_m,throughput_bps", 0) != 0) {
    throw UsageError(path + ": expected a sweep CSV header");
  }
  std::vector<SweepPoint> out;
  for (std::size_t no = 2; std::getline(in, line); ++no) {
    if (line.empty()) {
      continue;
    }
    SweepPoint p;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &p.height_m, &p.min_width_m, &p.throughput_bps) != 3) {
      throw UsageError(path + ":" + std::to_string(no) + ": malformed row");
    }
    out.push_back(p);
  }
  return out;
}

json fit_or_note(const std::vector<SweepPoint> &points, const std::string &from) {
  try {
    return json{{"model", to_json(fit_trends(points, from))}};
  } catch (const FitError &e) {
    return json{{"model", nullptr}, {"note", e.what()}};
  }
}

int cmd_sweep(const std::string &heights, const std::string &widths, const std::string &base_path,
              const std::string &out, const std::string &grid_out, std::size_t trials, std::uint64_t seed) {
  SweepConfig cfg;
  try {
    cfg.heights_m = parse_grid(heights);
    cfg.widths_m = parse_grid(widths);
  } catch (const std::invalid_argument &e) {
    throw UsageError(std::string("--heights/--widths: ") + e.what());
  }
  cfg.trials = trials;
  cfg.seed = seed;
  const Scenario base = base_path.empty() ? scenarios::sweep_base(seed) : load_scenario_arg(base_path);
  SweepResult r;
  try {
    r = run_sweep(base, cfg);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  const std::string csv = format_points(r.points);
  if (!grid_out.empty()) {
    std::string text = "height_m,width_m,decodable\n";
    char line[96];
    for (const auto &c : r.cells) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%d\n", c.height_m, c.width_m, c.decodable ? 1 : 0);
      text += line;
    }
    write_file(grid_out, text);
  }
  if (out.empty()) {
    std::cout << csv;
    return kOk;
  }
  write_file(out, csv);
  json j = fit_or_note(r.points, "sweep " + heights + " x " + widths + " seed " + std::to_string(seed));
  j["points"] = r.points.size();
  print_json(j);
  return kOk;
}

int cmd_fit(const std::string &in, const std::string &from) {
  const auto points = parse_points(in);
  try {
    print_json(to_json(fit_trends(points, from.empty() ? in : from)));
  } catch (const FitError &e) {
    std::cerr << "pvlc fit: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

int cmd_select_receiver(double noise_lux, double margin) {
  if (!(noise_lux >= 0.0) || !(margin >= 0.0)) {
    throw UsageError("--noise-lux and --margin must be non-negative");
  }
  try {
    std::cout << select_receiver(ReceiverCatalog::builtin(), noise_lux, margin).name << "\n";
  } catch (const NoViableReceiver &e) {
    std::cerr << "pvlc select-receiver: no viable receiver (" << e.what() << ")\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Passive visible-light communication: simulate, decode and plan."};
  app.require_subcommand(1);
  int rc = kOk;

  EncodeOpts enc;
  auto *encode = app.add_subcommand("encode", "Build a packet and print it as JSON");
  encode->add_option("--bits", enc.bits, "Payload bits, e.g. 10 (empty for preamble only)")->required();
  encode->add_option("--width-m", enc.width_m, "Symbol width in meters")->capture_default_str();
  encode->add_option("--r-high", enc.r_high, "Reflectance of HIGH symbols")->capture_default_str();
  encode->add_option("--r-low", enc.r_low, "Reflectance of LOW symbols")->capture_default_str();
  encode->callback([&] { rc = cmd_encode(enc); });

  std::string sc_name, sc_out;
  std::uint64_t sc_seed = 1;
  bool sc_list = false;
  auto *scenario = app.add_subcommand("scenario", "Print a built-in scenario as JSON");
  scenario->add_option("name", sc_name, "Scenario name");
  scenario->add_option("--seed", sc_seed, "Noise seed")->capture_default_str();
  scenario->add_option("--out", sc_out, "Write to FILE instead of standard output");
  scenario->add_flag("--list", sc_list, "List the built-in scenario names");
  scenario->callback([&] { rc = cmd_scenario(sc_name, sc_seed, sc_out, sc_list); });

  std::string sim_scenario, sim_out;
  auto *simulate = app.add_subcommand("simulate", "Render a scenario file to a trace CSV");
  simulate->add_option("--scenario", sim_scenario, "Scenario JSON file")->required();
  simulate->add_option("--out", sim_out, "Trace CSV (standard output if omitted)");
  simulate->callback([&] { rc = cmd_simulate(sim_scenario, sim_out); });

  DecodeOpts dec;
  std::size_t expected = 0;
  auto *decode = app.add_subcommand("decode", "Decode a trace CSV");
  decode->add_option("trace", dec.trace, "Trace CSV")->required();
  auto *exp_opt = decode->add_option("--expected-bits", expected, "Read exactly N payload bits");
  decode->add_flag("--vehicle", dec.vehicle, "Locate the car roof first (hood peak, windshield valley)");
  decode->add_option("--smoothing", dec.cfg.smoothing_window, "Moving-average window in samples")->capture_default_str();
  decode->add_option("--decision-frac", dec.cfg.decision_level_frac, "Decision level within the preamble swing")
      ->capture_default_str();
  decode->add_option("--min-preamble-s", dec.cfg.min_preamble_seconds, "Shortest hood/windshield span, seconds")
      ->capture_default_str();
  decode->callback([&] {
    if (exp_opt->count() > 0) {
      dec.expected_bits = expected;
    }
    rc = cmd_decode(dec);
  });

  std::string cl_trace, cl_dir;
  std::size_t cl_radius = 0;
  auto *classify = app.add_subcommand("classify", "Match a trace against clean templates with DTW");
  classify->add_option("trace", cl_trace, "Trace CSV")->required();
  classify->add_option("--templates", cl_dir, "Template directory (manifest.json or *.csv)")->required();
  auto *radius_opt = classify->add_option("--radius", cl_radius, "Sakoe-Chiba radius in resampled points");
  classify->callback([&] {
    rc = cmd_classify(cl_trace, cl_dir, radius_opt->count() > 0 ? std::optional<std::size_t>(cl_radius) : std::nullopt);
  });

  std::string mt_out, mt_bits = "00,10", mt_base;
  auto *make_templates = app.add_subcommand("make-templates", "Write clean template traces and a manifest");
  make_templates->add_option("--out", mt_out, "Output directory")->required();
  make_templates->add_option("--bits", mt_bits, "Comma-separated labels")->capture_default_str();
  make_templates->add_option("--base", mt_base, "Scenario whose packet is re-encoded per label");
  make_templates->callback([&] { rc = cmd_make_templates(mt_out, mt_bits, mt_base); });

  SpectrumOpts spo;
  std::size_t fft = 0;
  auto *spectrum = app.add_subcommand("spectrum", "Magnitude spectrum and collision verdict");
  spectrum->add_option("trace", spo.trace, "Trace CSV")->required();
  auto *fft_opt = spectrum->add_option("--fft", fft, "FFT length (power of two, default next power of two)");
  spectrum->add_option("--window", spo.window, "hann or rect")->capture_default_str();
  spectrum->add_option("--csv", spo.csv, "Write frequency_hz,magnitude rows to FILE");
  spectrum->add_option("--min-prominence", spo.min_prominence, "Peak prominence as a share of the top bin")
      ->capture_default_str();
  spectrum->add_option("--separation", spo.separation, "Frequency ratio for two objects")->capture_default_str();
  spectrum->add_option("--dominance", spo.dominance, "Magnitude ratio for a single dominant packet")
      ->capture_default_str();
  spectrum->callback([&] {
    if (fft_opt->count() > 0) {
      spo.fft = fft;
    }
    rc = cmd_spectrum(spo);
  });

  std::string sw_heights = "0.2:0.55:0.05", sw_widths = "0.015:0.075:0.001", sw_base, sw_out, sw_grid;
  std::size_t sw_trials = 3;
  std::uint64_t sw_seed = 1;
  auto *sweep = app.add_subcommand("sweep", "Height x width decodability sweep with trend fit");
  sweep->add_option("--heights", sw_heights, "start:stop:step or a,b,c (meters)")->capture_default_str();
  sweep->add_option("--widths", sw_widths, "start:stop:step or a,b,c (meters)")->capture_default_str();
  sweep->add_option("--scenario", sw_base, "Base scenario (default: built-in sweep-base)");
  sweep->add_option("--out", sw_out, "Per-height CSV; the fitted model JSON then goes to standard output");
  sweep->add_option("--grid", sw_grid, "Also write every cell as height_m,width_m,decodable");
  sweep->add_option("--trials", sw_trials, "Seeds per cell, all must decode")->capture_default_str();
  sweep->add_option("--seed", sw_seed, "First seed")->capture_default_str();
  sweep->callback([&] { rc = cmd_sweep(sw_heights, sw_widths, sw_base, sw_out, sw_grid, sw_trials, sw_seed); });

  std::string fit_in, fit_from;
  auto *fit = app.add_subcommand("fit", "Fit the trend model to a sweep CSV");
  fit->add_option("--in", fit_in, "Sweep CSV")->required();
  fit->add_option("--from", fit_from, "Provenance note stored in the model");
  fit->callback([&] { rc = cmd_fit(fit_in, fit_from); });

  double noise_lux = 0.0, margin = 0.0;
  auto *select = app.add_subcommand("select-receiver", "Most sensitive receiver that survives a noise floor");
  select->add_option("--noise-lux", noise_lux, "Ambient noise floor in lux")->required();
  select->add_option("--margin", margin, "Safety margin as a fraction of the floor")->capture_default_str();
  select->callback([&] { rc = cmd_select_receiver(noise_lux, margin); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  } catch (const UsageError &e) {
    std::cerr << "pvlc: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "pvlc: " << e.what() << "\n";
    return kFailure;
  }
  return rc;
}
