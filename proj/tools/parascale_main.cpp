// parascale: command-line front end for the scaling-law, workload, and
// bus-simulation library.  Every subcommand writes CSV or JSON to stdout
// (or --out FILE); numeric output uses shortest-round-trip formatting so
// identical invocations produce byte-identical bytes.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "parascale/json_io.hpp"
#include "parascale/parascale.hpp"

namespace ps = parascale;
using ps::format_double;

namespace {

// ---------------------------------------------------------------- utilities

ps::Picoseconds parse_duration(const std::string& text) {
  const std::string usage =
      "duration '" + text + "': expected <number><ps|ns|us|ms|s>";
  std::size_t pos = 0;
  while (pos < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[pos])) ||
          text[pos] == '.')) {
    ++pos;
  }
  std::string_view digits = std::string_view(text).substr(0, pos);
  std::string_view suffix = std::string_view(text).substr(pos);
  int scale = 0;
  if (suffix == "ps") scale = 0;
  else if (suffix == "ns") scale = 3;
  else if (suffix == "us") scale = 6;
  else if (suffix == "ms") scale = 9;
  else if (suffix == "s") scale = 12;
  else throw std::invalid_argument(usage);

  std::size_t dot = digits.find('.');
  std::string_view whole =
      dot == std::string_view::npos ? digits : digits.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : digits.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw std::invalid_argument(usage);
  if (frac.find('.') != std::string_view::npos) {
    throw std::invalid_argument(usage);
  }

  auto push_digit = [&](std::int64_t v, char c) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(v, std::int64_t{10}, &out) ||
        __builtin_add_overflow(out, std::int64_t{c - '0'}, &out)) {
      throw std::invalid_argument("duration '" + text +
                                  "': overflows 64-bit picoseconds");
    }
    return out;
  };
  std::int64_t value = 0;
  for (char c : whole) value = push_digit(value, c);
  for (int i = 0; i < scale; ++i) {
    char c = static_cast<std::size_t>(i) < frac.size() ? frac[i] : '0';
    value = push_digit(value, c);
  }
  for (std::size_t i = scale; i < frac.size(); ++i) {
    if (frac[i] != '0') {
      throw std::invalid_argument("duration '" + text +
                                  "': finer than a picosecond");
    }
  }
  return ps::Picoseconds{value};
}

std::int64_t parse_i64_str(const std::string& text, const std::string& what) {
  std::int64_t v = 0;
  if (!ps::detail::parse_i64(text, v)) {
    throw std::invalid_argument(what + " '" + text + "' is not an integer");
  }
  return v;
}

// inputs x width[^layers] x outputs, e.g. 4x1000^2x1 or 1x2x1
ps::AnnTopology parse_topology(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    std::size_t x = text.find('x', begin);
    parts.push_back(text.substr(begin, x - begin));
    if (x == std::string::npos) break;
    begin = x + 1;
  }
  if (parts.size() != 3) {
    throw std::invalid_argument("topology '" + text +
                                "': expected INPUTSxWIDTH[^LAYERS]xOUTPUTS");
  }
  std::int64_t inputs = parse_i64_str(parts[0], "topology inputs");
  std::int64_t outputs = parse_i64_str(parts[2], "topology outputs");
  std::int64_t width = 0;
  std::int64_t layers = 1;
  std::size_t caret = parts[1].find('^');
  if (caret == std::string::npos) {
    width = parse_i64_str(parts[1], "topology width");
  } else {
    width = parse_i64_str(parts[1].substr(0, caret), "topology width");
    layers = parse_i64_str(parts[1].substr(caret + 1), "topology layers");
  }
  return ps::AnnTopology(inputs, layers, width, outputs);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    throw std::invalid_argument("cannot open output file '" + out_path + "'");
  }
  f << text;
  if (!f) {
    throw std::runtime_error("failed writing output file '" + out_path + "'");
  }
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("format '" + format +
                                "': expected csv or json");
  }
}

std::vector<std::int64_t> log_sweep(std::int64_t from, std::int64_t to,
                                    int steps) {
  if (from < 1 || to < from) {
    throw std::invalid_argument("sweep: need 1 <= n-from <= n-to");
  }
  if (steps < 1) throw std::invalid_argument("sweep: n-steps must be >= 1");
  std::vector<std::int64_t> out;
  if (steps == 1 || from == to) {
    out.push_back(from);
    if (to != from) out.push_back(to);
    return out;
  }
  double lf = std::log(static_cast<double>(from));
  double lt = std::log(static_cast<double>(to));
  for (int i = 0; i < steps; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(steps - 1);
    auto n = static_cast<std::int64_t>(std::llround(std::exp(lf + t * (lt - lf))));
    n = std::max(from, std::min(to, n));
    if (out.empty() || n != out.back()) out.push_back(n);
  }
  return out;
}

ps::IngestResult ingest_file(const std::string& path,
                             const std::string& input_format) {
  if (input_format != "csv" && input_format != "json") {
    throw std::invalid_argument("input-format '" + input_format +
                                "': expected csv or json");
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::invalid_argument("cannot open input file '" + path + "'");
  }
  return input_format == "csv" ? ps::ingest_csv(f) : ps::ingest_json(f);
}

void write_rejects(const std::string& path,
                   const std::vector<ps::RejectedRow>& rejects) {
  if (path.empty()) return;
  std::ostringstream os;
  os << "row,reason,line\n";
  for (const ps::RejectedRow& r : rejects) {
    os << r.row << ',' << csv_escape(r.reason) << ',' << csv_escape(r.line)
       << '\n';
  }
  emit(os.str(), path);
}

// ------------------------------------------------------- law configuration

struct LawArgs {
  std::int64_t n = 0;
  double alpha = 0.0;
  double serial = 0.0;
  double efficiency = 0.0;
  double speedup = 0.0;
  CLI::Option* opt_alpha = nullptr;
  CLI::Option* opt_serial = nullptr;
  CLI::Option* opt_efficiency = nullptr;
  CLI::Option* opt_speedup = nullptr;
  std::string format = "csv";
  std::string out;
};

void run_law(const LawArgs& a) {
  check_format(a.format);
  ps::Alpha alpha = [&] {
    if (a.opt_alpha->count() > 0) {
      return ps::Alpha::from_parallel_fraction(a.alpha);
    }
    if (a.opt_serial->count() > 0) {
      return ps::Alpha::from_serial_fraction(a.serial);
    }
    if (a.opt_efficiency->count() > 0) {
      return ps::alpha_from_efficiency(ps::Efficiency::from_value(a.efficiency),
                                       a.n);
    }
    return ps::alpha_from_speedup(ps::Speedup::from_value(a.speedup), a.n);
  }();

  double amdahl_s = ps::amdahl_speedup(alpha, a.n).value();
  double amdahl_e = ps::amdahl_efficiency(alpha, a.n).value();
  double gustafson_s = ps::gustafson_speedup(alpha, a.n).value();
  double gustafson_e = ps::gustafson_efficiency(alpha, a.n).value();
  bool has_equivalent = a.n >= 2;
  double equivalent =
      has_equivalent ? ps::gustafson_to_amdahl(alpha, a.n).value() : 0.0;
  double corrected = ps::corrected_gustafson_time(alpha, a.n);

  if (a.format == "csv") {
    std::ostringstream os;
    os << "n,alpha,one_minus_alpha,amdahl_speedup,amdahl_efficiency,"
          "gustafson_speedup,gustafson_efficiency,equivalent_amdahl_alpha,"
          "corrected_gustafson_time\n";
    os << a.n << ',' << format_double(alpha.value()) << ','
       << format_double(alpha.serial_fraction()) << ','
       << format_double(amdahl_s) << ',' << format_double(amdahl_e) << ','
       << format_double(gustafson_s) << ',' << format_double(gustafson_e)
       << ',' << (has_equivalent ? format_double(equivalent) : std::string())
       << ',' << format_double(corrected) << '\n';
    emit(os.str(), a.out);
    return;
  }
  ps::json doc;
  doc["n"] = a.n;
  doc["alpha"] = alpha.value();
  doc["one_minus_alpha"] = alpha.serial_fraction();
  doc["amdahl_speedup"] = amdahl_s;
  doc["amdahl_efficiency"] = amdahl_e;
  doc["gustafson_speedup"] = gustafson_s;
  doc["gustafson_efficiency"] = gustafson_e;
  if (has_equivalent) {
    doc["equivalent_amdahl_alpha"] = equivalent;
  } else {
    doc["equivalent_amdahl_alpha"] = nullptr;
  }
  doc["corrected_gustafson_time"] = corrected;
  emit(doc.dump(2) + "\n", a.out);
}

// --------------------------------------------------- surface configuration

struct SurfaceArgs {
  std::vector<double> alphas;
  std::vector<std::int64_t> ns;
  std::string format = "csv";
  std::string out;
};

void run_surface(const SurfaceArgs& a) {
  check_format(a.format);
  std::vector<ps::SurfacePoint> points = ps::efficiency_surface(a.alphas, a.ns);
  if (a.format == "csv") {
    std::ostringstream os;
    os << "alpha,n,speedup,efficiency\n";
    for (const ps::SurfacePoint& p : points) {
      os << format_double(p.alpha) << ',' << p.n << ','
         << format_double(p.speedup) << ',' << format_double(p.efficiency)
         << '\n';
    }
    emit(os.str(), a.out);
    return;
  }
  ps::json doc = ps::json::array();
  for (const ps::SurfacePoint& p : points) {
    doc.push_back({{"alpha", p.alpha},
                   {"n", p.n},
                   {"speedup", p.speedup},
                   {"efficiency", p.efficiency}});
  }
  emit(doc.dump(2) + "\n", a.out);
}

// ------------------------------------------- curve / peak shared plumbing

struct CurveArgs {
  std::string preset;
  std::vector<std::string> contribs;
  std::string comm;  // none | linear | iterlinear
  double comm_coeff = 0.0;
  std::int64_t iterations = 1;
  double p_single = 1.0;
  std::int64_t n_from = 1;
  std::int64_t n_to = 1000000;
  int n_steps = 25;
  std::vector<std::int64_t> n_list;
  std::int64_t n_max = 1000000;  // peak only
  std::string format = "csv";
  std::string out;
  CLI::Option* opt_comm = nullptr;
};

struct CurveConfig {
  std::vector<ps::SerialFractionContribution> contributions;
  ps::CommModel comm;
  std::string preset_name;
};

CurveConfig build_curve_config(const CurveArgs& a) {
  CurveConfig cfg;
  cfg.comm = ps::no_communication();
  if (!a.preset.empty()) {
    const ps::CurvePreset* preset = nullptr;
    if (a.preset == ps::kHousekeepingBoundPreset.name) {
      preset = &ps::kHousekeepingBoundPreset;
    } else if (a.preset == ps::kIpdataPreset.name) {
      preset = &ps::kIpdataPreset;
    } else {
      throw std::invalid_argument("preset '" + a.preset +
                                  "': expected housekeeping-bound or ipdata");
    }
    cfg.contributions = ps::preset_contributions(*preset);
    cfg.comm = ps::preset_comm_model(*preset);
    cfg.preset_name = preset->name;
  }
  for (const std::string& text : a.contribs) {
    std::size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("contrib '" + text +
                                  "': expected LABEL=VALUE");
    }
    double value = 0.0;
    if (!ps::detail::parse_f64(text.substr(eq + 1), value)) {
      throw std::invalid_argument("contrib '" + text +
                                  "': value is not a number");
    }
    cfg.contributions.push_back({text.substr(0, eq), value});
  }
  if (a.opt_comm != nullptr && a.opt_comm->count() > 0) {
    if (a.comm == "none") {
      cfg.comm = ps::no_communication();
    } else if (a.comm == "linear") {
      cfg.comm = ps::linear_communication(a.comm_coeff);
    } else if (a.comm == "iterlinear") {
      cfg.comm = ps::iterative_communication(a.comm_coeff, a.iterations);
    } else {
      throw std::invalid_argument("comm '" + a.comm +
                                  "': expected none, linear, or iterlinear");
    }
  }
  if (cfg.contributions.empty()) {
    throw std::invalid_argument(
        "no serial-fraction contributions: give --preset and/or --contrib");
  }
  return cfg;
}

void run_curve(const CurveArgs& a) {
  check_format(a.format);
  CurveConfig cfg = build_curve_config(a);
  std::vector<std::int64_t> ns =
      a.n_list.empty() ? log_sweep(a.n_from, a.n_to, a.n_steps) : a.n_list;
  ps::SystemShape unit{1, a.p_single};
  std::vector<ps::CurvePoint> points =
      ps::performance_curve(unit, cfg.contributions, cfg.comm, ns);
  if (a.format == "csv") {
    std::ostringstream os;
    os << "n,one_minus_alpha_eff,payload,saturated\n";
    for (const ps::CurvePoint& p : points) {
      os << p.n << ',' << format_double(p.one_minus_alpha_eff) << ','
         << format_double(p.payload) << ',' << (p.saturated ? 1 : 0) << '\n';
    }
    emit(os.str(), a.out);
    return;
  }
  ps::json doc;
  if (!cfg.preset_name.empty()) doc["preset"] = cfg.preset_name;
  doc["p_single"] = a.p_single;
  ps::json rows = ps::json::array();
  for (const ps::CurvePoint& p : points) {
    rows.push_back({{"n", p.n},
                    {"one_minus_alpha_eff", p.one_minus_alpha_eff},
                    {"payload", p.payload},
                    {"saturated", p.saturated}});
  }
  doc["points"] = std::move(rows);
  emit(doc.dump(2) + "\n", a.out);
}

void run_peak(const CurveArgs& a) {
  check_format(a.format);
  CurveConfig cfg = build_curve_config(a);
  ps::SystemShape unit{1, a.p_single};
  ps::PeakResult peak =
      ps::find_peak(unit, cfg.contributions, cfg.comm, a.n_max);
  if (a.format == "csv") {
    std::ostringstream os;
    os << "n_peak,payload,gain,at_boundary\n";
    os << peak.n_peak << ',' << format_double(peak.payload) << ','
       << format_double(peak.gain) << ',' << (peak.at_boundary ? 1 : 0)
       << '\n';
    emit(os.str(), a.out);
    return;
  }
  ps::json doc;
  if (!cfg.preset_name.empty()) doc["preset"] = cfg.preset_name;
  doc["n_peak"] = peak.n_peak;
  doc["payload"] = peak.payload;
  doc["gain"] = peak.gain;
  doc["at_boundary"] = peak.at_boundary;
  emit(doc.dump(2) + "\n", a.out);
}

// ------------------------------------------------ roofline configuration

struct RooflineArgs {
  std::string preset;
  double linear_coeff = 1.0;
  double ceiling = 0.0;
  std::vector<double> nominals;
  std::string format = "csv";
  std::string out;
  CLI::Option* opt_ceiling = nullptr;
};

void run_roofline(const RooflineArgs& a) {
  check_format(a.format);
  std::string note;
  std::string name;
  ps::RooflineSpec spec{1.0, 1.0};
  if (!a.preset.empty()) {
    const ps::RooflinePreset* preset = nullptr;
    if (a.preset == ps::kHplRooflinePreset.name) {
      preset = &ps::kHplRooflinePreset;
    } else if (a.preset == ps::kHpcgRooflinePreset.name) {
      preset = &ps::kHpcgRooflinePreset;
    } else if (a.preset == ps::kBrainSimRooflinePreset.name) {
      preset = &ps::kBrainSimRooflinePreset;
    } else {
      throw std::invalid_argument("preset '" + a.preset +
                                  "': expected hpl, hpcg, or brain-sim");
    }
    spec = preset->spec;
    note = preset->note;
    name = preset->name;
  } else if (a.opt_ceiling->count() > 0) {
    spec = ps::RooflineSpec(a.linear_coeff, a.ceiling);
  } else {
    throw std::invalid_argument("roofline: give --preset or --ceiling");
  }

  if (a.format == "csv") {
    std::ostringstream os;
    os << "nominal,gain,limited_by\n";
    for (double nominal : a.nominals) {
      double gain = ps::roofline_gain(spec, nominal);
      const char* limit =
          spec.linear_coefficient * nominal >= spec.ceiling ? "ceiling"
                                                            : "linear";
      os << format_double(nominal) << ',' << format_double(gain) << ','
         << limit << '\n';
    }
    emit(os.str(), a.out);
    return;
  }
  ps::json doc;
  if (!name.empty()) doc["preset"] = name;
  if (!note.empty()) doc["note"] = note;
  doc["linear_coefficient"] = spec.linear_coefficient;
  doc["ceiling"] = spec.ceiling;
  ps::json rows = ps::json::array();
  for (double nominal : a.nominals) {
    double gain = ps::roofline_gain(spec, nominal);
    rows.push_back({{"nominal", nominal},
                    {"gain", gain},
                    {"limited_by", spec.linear_coefficient * nominal >=
                                           spec.ceiling
                                       ? "ceiling"
                                       : "linear"}});
  }
  doc["points"] = std::move(rows);
  emit(doc.dump(2) + "\n", a.out);
}

// ------------------------------------------------ simulate configuration

struct SimulateArgs {
  std::string topology;
  std::string wiring = "shared-bus";
  std::string tb = "5ns";
  std::string td = "2ns";
  std::string tp = "1us";
  std::string x = "0ps";
  std::string semantics = "synchronized";
  bool per_layer_bus = false;
  bool grid_sync = false;
  std::string grid_period = "1ms";
  std::string device_clock = "1ns";
  std::string drop_after = "never";
  std::string foreign = "fixed";
  std::uint64_t seed = 0;
  std::string events_out;
  std::uint64_t max_events = 80000000;
  std::string format = "json";
  std::string out;
};

void run_simulate(const SimulateArgs& a) {
  check_format(a.format);
  ps::SimTopology sim{parse_topology(a.topology), ps::SharedBus{}};
  if (a.wiring == "direct") {
    sim.wiring = ps::DirectParallel{};
  } else if (a.wiring == "shared-bus") {
    sim.wiring = ps::SharedBus{};
  } else {
    throw std::invalid_argument("wiring '" + a.wiring +
                                "': expected direct or shared-bus");
  }

  ps::BusTiming timing;
  timing.t_bus_reach = parse_duration(a.tb);
  timing.t_delivery = parse_duration(a.td);
  timing.t_process = parse_duration(a.tp);
  timing.t_foreign = parse_duration(a.x);

  ps::GridClock grid;
  grid.grid_period = parse_duration(a.grid_period);
  grid.device_clock = parse_duration(a.device_clock);

  ps::DropPolicy drop;
  if (a.drop_after != "never") {
    drop.max_busy_cycles = parse_i64_str(a.drop_after, "drop-after");
  }

  ps::SimOptions opt;
  if (a.semantics == "synchronized") {
    opt.semantics = ps::NeuronSemantics::Synchronized;
  } else if (a.semantics == "streaming") {
    opt.semantics = ps::NeuronSemantics::Streaming;
  } else {
    throw std::invalid_argument("semantics '" + a.semantics +
                                "': expected synchronized or streaming");
  }
  if (a.foreign == "fixed") {
    opt.foreign = ps::ForeignTraffic::FixedHold;
  } else if (a.foreign == "uniform") {
    opt.foreign = ps::ForeignTraffic::UniformRandomHold;
  } else {
    throw std::invalid_argument("foreign '" + a.foreign +
                                "': expected fixed or uniform");
  }
  opt.per_layer_bus = a.per_layer_bus;
  opt.grid_synchronized = a.grid_sync;
  opt.seed = a.seed;
  opt.record_event_log = !a.events_out.empty();
  opt.max_events = a.max_events;

  ps::SimReport report = ps::simulate(sim, timing, grid, drop, opt);

  if (!a.events_out.empty()) {
    std::ostringstream os;
    ps::write_event_log_csv(os, report.event_log);
    emit(os.str(), a.events_out);
    report.event_log.clear();  // events live in the side file, not the report
  }

  if (a.format == "json") {
    emit(ps::sim_report_to_json(report).dump(2) + "\n", a.out);
    return;
  }
  ps::GridBound bound = ps::grid_performance_bound(
      report.grid, ps::Picoseconds{report.total_time_ps});
  std::ostringstream os;
  os << "total_time_ps,messages_sent,messages_delivered,messages_dropped,"
        "messages_in_flight,bus_busy_ps,bus_utilization,apparent_ratio_mean,"
        "apparent_ratio_max,glitch_total_ps,glitch_max_ps,grid_max_steps,"
        "grid_device_ratio\n";
  os << report.total_time_ps << ',' << report.messages_sent << ','
     << report.messages_delivered << ',' << report.messages_dropped << ','
     << report.messages_in_flight << ',' << report.bus_busy_ps << ','
     << format_double(report.bus_utilization) << ','
     << format_double(report.apparent_ratio_mean) << ','
     << format_double(report.apparent_ratio_max) << ','
     << report.glitch_total_ps << ',' << report.glitch_max_ps << ','
     << format_double(bound.max_steps) << ','
     << format_double(bound.grid_device_ratio) << '\n';
  emit(os.str(), a.out);
}

// -------------------------------------------------- ingest configuration

struct IngestArgs {
  std::string input;
  std::string input_format = "csv";
  std::string rejects;
  std::string format = "csv";
  std::string out;
};

void run_ingest(const IngestArgs& a) {
  check_format(a.format);
  ps::IngestResult result = ingest_file(a.input, a.input_format);

  struct DerivedRow {
    const ps::MeasurementRecord* rec;
    ps::DerivedMetrics metrics;
  };
  std::vector<DerivedRow> rows;
  for (const ps::MeasurementRecord& rec : result.records) {
    try {
      rows.push_back({&rec, ps::derive(rec)});
    } catch (const std::exception& e) {
      std::ostringstream line;
      line << rec.system_name << ',' << rec.year << ',' << rec.cores;
      result.rejects.push_back({rec.source_row, e.what(), line.str()});
    }
  }

  write_rejects(a.rejects, result.rejects);
  if (!result.rejects.empty()) {
    std::cerr << "ingest: rejected " << result.rejects.size() << " row(s)\n";
  }

  if (a.format == "csv") {
    std::ostringstream os;
    os << ps::kMeasurementCsvHeader
       << ",efficiency,alpha_eff,one_minus_alpha\n";
    for (const DerivedRow& row : rows) {
      const ps::MeasurementRecord& r = *row.rec;
      os << csv_escape(r.system_name) << ',' << r.year << ',' << r.cores
         << ',';
      if (r.cores_measured) os << *r.cores_measured;
      os << ',' << format_double(r.r_max_gflops) << ','
         << format_double(r.r_peak_gflops) << ','
         << csv_escape(ps::benchmark_label(r)) << ','
         << format_double(row.metrics.efficiency.value()) << ','
         << format_double(row.metrics.alpha.value()) << ','
         << format_double(row.metrics.alpha.serial_fraction()) << '\n';
    }
    emit(os.str(), a.out);
    return;
  }
  ps::json records = ps::json::array();
  for (const DerivedRow& row : rows) {
    ps::json item = ps::measurement_to_json(*row.rec);
    item["efficiency"] = row.metrics.efficiency.value();
    item["alpha_eff"] = row.metrics.alpha.value();
    item["one_minus_alpha"] = row.metrics.alpha.serial_fraction();
    item["cores_used"] = row.metrics.cores_used;
    records.push_back(std::move(item));
  }
  ps::json rejects = ps::json::array();
  for (const ps::RejectedRow& r : result.rejects) {
    rejects.push_back({{"row", r.row}, {"reason", r.reason}, {"line", r.line}});
  }
  ps::json doc;
  doc["records"] = std::move(records);
  doc["rejects"] = std::move(rejects);
  emit(doc.dump(2) + "\n", a.out);
}

// ------------------------------------------------- history configuration

struct HistoryArgs {
  std::string input;
  std::string input_format = "csv";
  int top_k = 25;
  std::string normalize = "peak-per-core";
  double constant = 1.0;
  double plateau_step = 0.10;
  int plateau_years = 3;
  bool plateaus_only = false;
  std::string format = "csv";
  std::string out;
};

void run_history(const HistoryArgs& a) {
  check_format(a.format);
  ps::IngestResult result = ingest_file(a.input, a.input_format);
  if (!result.rejects.empty()) {
    std::cerr << "history: ignored " << result.rejects.size()
              << " rejected row(s)\n";
  }
  ps::GainOptions opt;
  opt.top_k = a.top_k;
  opt.plateau_max_step = a.plateau_step;
  opt.plateau_min_years = a.plateau_years;
  opt.single_unit_gflops = a.constant;
  if (a.normalize == "none") {
    opt.normalize = ps::GainNormalize::None;
  } else if (a.normalize == "peak-per-core") {
    opt.normalize = ps::GainNormalize::PeakPerCore;
  } else if (a.normalize == "constant") {
    opt.normalize = ps::GainNormalize::ConstantSingleUnit;
  } else {
    throw std::invalid_argument(
        "normalize '" + a.normalize +
        "': expected none, peak-per-core, or constant");
  }
  ps::GainHistory history = ps::gain_history(result.records, opt);
  for (const std::string& w : history.warnings) {
    std::cerr << "history: " << w << '\n';
  }

  if (a.format == "csv") {
    std::ostringstream os;
    if (a.plateaus_only) {
      os << "benchmark,start_year,end_year\n";
      for (const ps::Plateau& p : history.plateaus) {
        os << csv_escape(p.benchmark) << ',' << p.start_year << ','
           << p.end_year << '\n';
      }
    } else {
      os << "benchmark,year,rank,system_name,gain\n";
      for (const ps::GainEntry& e : history.rows) {
        os << csv_escape(e.benchmark) << ',' << e.year << ',' << e.rank << ','
           << csv_escape(e.system_name) << ',' << format_double(e.gain)
           << '\n';
      }
    }
    emit(os.str(), a.out);
    return;
  }
  emit(ps::gain_history_to_json(history).dump(2) + "\n", a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-aware parallel-scaling toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read defaults from an INI file");
  app.set_version_flag("--version", "parascale 1.0.0");

  LawArgs law;
  CLI::App* law_cmd = app.add_subcommand(
      "law", "evaluate the scaling laws for one configuration");
  law_cmd->add_option("--n", law.n, "processor count")->required();
  auto* law_param = law_cmd->add_option_group(
      "parameter", "exactly one way to pin down the parallel fraction");
  law.opt_alpha =
      law_param->add_option("--alpha", law.alpha, "parallel fraction");
  law.opt_serial = law_param->add_option("--serial-fraction", law.serial,
                                         "serial fraction (1 - alpha)");
  law.opt_efficiency = law_param->add_option(
      "--efficiency", law.efficiency, "observed efficiency; inverted at --n");
  law.opt_speedup = law_param->add_option("--speedup", law.speedup,
                                          "observed speedup; inverted at --n");
  law_param->require_option(1);
  law_cmd->add_option("--format", law.format, "csv or json");
  law_cmd->add_option("--out", law.out, "write to file instead of stdout");
  law_cmd->callback([&law] { run_law(law); });

  SurfaceArgs surface;
  CLI::App* surface_cmd = app.add_subcommand(
      "surface", "speedup/efficiency over an (alpha, n) grid");
  surface_cmd->add_option("--alpha", surface.alphas, "parallel fractions")
      ->required();
  surface_cmd->add_option("--n", surface.ns, "processor counts")->required();
  surface_cmd->add_option("--format", surface.format, "csv or json");
  surface_cmd->add_option("--out", surface.out,
                          "write to file instead of stdout");
  surface_cmd->callback([&surface] { run_surface(surface); });

  auto add_curve_options = [](CLI::App* cmd, CurveArgs& args) {
    cmd->add_option("--preset", args.preset,
                    "curve preset: housekeeping-bound or ipdata");
    cmd->add_option("--contrib", args.contribs,
                    "extra serial-fraction contribution, LABEL=VALUE");
    args.opt_comm = cmd->add_option(
        "--comm", args.comm, "communication model: none, linear, iterlinear");
    cmd->add_option("--comm-coeff", args.comm_coeff,
                    "per-processor communication coefficient");
    cmd->add_option("--iterations", args.iterations,
                    "iteration count for iterlinear");
    cmd->add_option("--p-single", args.p_single,
                    "single-processor payload performance");
  };

  CurveArgs curve;
  CLI::App* curve_cmd = app.add_subcommand(
      "curve", "payload performance as processors are added");
  add_curve_options(curve_cmd, curve);
  curve_cmd->add_option("--n-from", curve.n_from, "sweep start");
  curve_cmd->add_option("--n-to", curve.n_to, "sweep end");
  curve_cmd->add_option("--n-steps", curve.n_steps,
                        "log-spaced sample count");
  curve_cmd->add_option("--n-list", curve.n_list,
                        "explicit processor counts (overrides the sweep)");
  curve_cmd->add_option("--format", curve.format, "csv or json");
  curve_cmd->add_option("--out", curve.out, "write to file instead of stdout");
  curve_cmd->callback([&curve] { run_curve(curve); });

  CurveArgs peak;
  CLI::App* peak_cmd = app.add_subcommand(
      "peak", "processor count where payload performance peaks");
  add_curve_options(peak_cmd, peak);
  peak_cmd->add_option("--n-max", peak.n_max, "search bound");
  peak_cmd->add_option("--format", peak.format, "csv or json");
  peak_cmd->add_option("--out", peak.out, "write to file instead of stdout");
  peak_cmd->callback([&peak] { run_peak(peak); });

  RooflineArgs roofline;
  CLI::App* roofline_cmd = app.add_subcommand(
      "roofline", "gain bounded by a linear ramp and a ceiling");
  roofline_cmd->add_option("--preset", roofline.preset,
                           "hpl, hpcg, or brain-sim");
  roofline_cmd->add_option("--linear-coeff", roofline.linear_coeff,
                           "gain per unit of nominal scale");
  roofline.opt_ceiling =
      roofline_cmd->add_option("--ceiling", roofline.ceiling, "gain ceiling");
  roofline_cmd->add_option("--nominal", roofline.nominals, "nominal scales")
      ->required();
  roofline_cmd->add_option("--format", roofline.format, "csv or json");
  roofline_cmd->add_option("--out", roofline.out,
                           "write to file instead of stdout");
  roofline_cmd->callback([&roofline] { run_roofline(roofline); });

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "discrete-event run of a layered network");
  sim_cmd->add_option("--topology", sim.topology,
                      "INPUTSxWIDTH[^LAYERS]xOUTPUTS, e.g. 4x1000^2x1")
      ->required();
  sim_cmd->add_option("--wiring", sim.wiring, "direct or shared-bus");
  sim_cmd->add_option("--tb", sim.tb, "bus arbitration leg (per direction)");
  sim_cmd->add_option("--td", sim.td, "delivery time");
  sim_cmd->add_option("--tp", sim.tp, "processing time per activation");
  sim_cmd->add_option("--x", sim.x, "foreign-traffic holdoff on an idle bus");
  sim_cmd->add_option("--semantics", sim.semantics,
                      "synchronized or streaming");
  sim_cmd->add_flag("--per-layer-bus", sim.per_layer_bus,
                    "one bus per layer boundary");
  sim_cmd->add_flag("--grid-sync", sim.grid_sync,
                    "compute starts snap to the grid clock");
  sim_cmd->add_option("--grid-period", sim.grid_period, "grid clock period");
  sim_cmd->add_option("--device-clock", sim.device_clock,
                      "device clock resolution");
  sim_cmd->add_option("--drop-after", sim.drop_after,
                      "busy cycles a queued message survives, or 'never'");
  sim_cmd->add_option("--foreign", sim.foreign,
                      "idle-bus holdoff model: fixed or uniform");
  sim_cmd->add_option("--seed", sim.seed, "seed for the uniform holdoff");
  sim_cmd->add_option("--events-out", sim.events_out,
                      "record the event log to this CSV file");
  sim_cmd->add_option("--max-events", sim.max_events, "event budget");
  sim_cmd->add_option("--format", sim.format, "csv or json (default json)");
  sim_cmd->add_option("--out", sim.out, "write to file instead of stdout");
  sim_cmd->callback([&sim] { run_simulate(sim); });

  IngestArgs ingest;
  CLI::App* ingest_cmd = app.add_subcommand(
      "ingest", "validate measurement rows and derive efficiency and alpha");
  ingest_cmd->add_option("--input", ingest.input, "measurement file")
      ->required();
  ingest_cmd->add_option("--input-format", ingest.input_format,
                         "csv or json");
  ingest_cmd->add_option("--rejects", ingest.rejects,
                         "write rejected rows to this CSV file");
  ingest_cmd->add_option("--format", ingest.format, "csv or json");
  ingest_cmd->add_option("--out", ingest.out,
                         "write to file instead of stdout");
  ingest_cmd->callback([&ingest] { run_ingest(ingest); });

  HistoryArgs history;
  CLI::App* history_cmd = app.add_subcommand(
      "history", "normalized gain of the top systems per benchmark and year");
  history_cmd->add_option("--input", history.input, "measurement file")
      ->required();
  history_cmd->add_option("--input-format", history.input_format,
                          "csv or json");
  history_cmd->add_option("--top-k", history.top_k, "rows per year");
  history_cmd->add_option(
      "--normalize", history.normalize,
      "gain normalization: none, peak-per-core, or constant");
  history_cmd->add_option("--constant", history.constant,
                          "single-unit GFLOPS for --normalize constant");
  history_cmd->add_option("--plateau-step", history.plateau_step,
                          "max relative year-over-year step inside a plateau");
  history_cmd->add_option("--plateau-years", history.plateau_years,
                          "minimum plateau span in years");
  history_cmd->add_flag("--plateaus", history.plateaus_only,
                        "emit the plateau table instead of gain rows");
  history_cmd->add_option("--format", history.format, "csv or json");
  history_cmd->add_option("--out", history.out,
                          "write to file instead of stdout");
  history_cmd->callback([&history] { run_history(history); });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const parascale::EventOverflowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 2;
  }
}
