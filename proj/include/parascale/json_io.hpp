#pragma once

// JSON and CSV serialization for simulator reports and measurement records.
// Doubles go through shortest-round-trip formatting so identical runs
// produce byte-identical output.

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "parascale/bus_sim.hpp"
#include "parascale/measurements.hpp"

namespace parascale {

using json = nlohmann::ordered_json;

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

inline const char* semantics_name(NeuronSemantics s) {
  return s == NeuronSemantics::Streaming ? "streaming" : "synchronized";
}

inline json sim_report_to_json(const SimReport& r) {
  json config;
  config["topology"] = r.network.to_string();
  config["neurons"] = r.network.total_neurons();
  config["wiring"] = r.shared_bus ? "shared-bus" : "direct";
  config["semantics"] = semantics_name(r.semantics);
  config["per_layer_bus"] = r.per_layer_bus;
  config["grid_synchronized"] = r.grid_synchronized;
  config["timing"] = {{"t_bus_reach_ps", r.timing.t_bus_reach.count()},
                      {"t_delivery_ps", r.timing.t_delivery.count()},
                      {"t_process_ps", r.timing.t_process.count()},
                      {"t_foreign_ps", r.timing.t_foreign.count()}};
  config["grid"] = {{"grid_period_ps", r.grid.grid_period.count()},
                    {"device_clock_ps", r.grid.device_clock.count()}};
  if (r.max_busy_cycles == DropPolicy::kNeverDrop) {
    config["max_busy_cycles"] = nullptr;
  } else {
    config["max_busy_cycles"] = r.max_busy_cycles;
  }
  config["seed"] = r.seed;

  json totals;
  totals["total_time_ps"] = r.total_time_ps;
  totals["messages"] = {{"sent", r.messages_sent},
                        {"delivered", r.messages_delivered},
                        {"dropped", r.messages_dropped},
                        {"in_flight", r.messages_in_flight}};
  totals["bus"] = {{"busy_ps", r.bus_busy_ps},
                   {"utilization", r.bus_utilization}};

  GridBound bound =
      grid_performance_bound(r.grid, Picoseconds{r.total_time_ps});

  json out;
  out["config"] = std::move(config);
  out["totals"] = std::move(totals);
  out["apparent_ratio"] = {{"mean", r.apparent_ratio_mean},
                           {"max", r.apparent_ratio_max}};
  out["glitch"] = {{"total_ps", r.glitch_total_ps},
                   {"max_ps", r.glitch_max_ps}};
  out["grid_bound"] = {{"max_steps", bound.max_steps},
                       {"grid_device_ratio", bound.grid_device_ratio}};

  json neurons = json::array();
  for (const NeuronActivity& n : r.neurons) {
    neurons.push_back({{"id", n.id},
                       {"layer", n.layer},
                       {"computes", n.computes},
                       {"busy_ps", n.busy_ps},
                       {"idle_ps", n.idle_ps},
                       {"apparent_ps", n.apparent_ps},
                       {"done_ps", n.done_ps},
                       {"glitch_ps", n.glitch_ps}});
  }
  out["neurons"] = std::move(neurons);

  json boundaries = json::array();
  for (const BoundaryTransfer& b : r.boundaries) {
    boundaries.push_back({{"boundary", b.boundary},
                          {"messages", b.messages},
                          {"first_request_ps", b.first_request_ps},
                          {"last_delivery_ps", b.last_delivery_ps}});
  }
  out["boundaries"] = std::move(boundaries);

  if (!r.event_log.empty()) {
    json events = json::array();
    for (const Event& e : r.event_log) {
      events.push_back({{"time_ps", e.time_ps},
                        {"kind", kind_name(e.kind)},
                        {"source", e.source},
                        {"destination", e.destination}});
    }
    out["events"] = std::move(events);
  }
  return out;
}

inline void write_event_log_csv(std::ostream& os,
                                const std::vector<Event>& events) {
  os << "time_ps,kind,source,destination\n";
  for (const Event& e : events) {
    os << e.time_ps << ',' << kind_name(e.kind) << ',' << e.source << ','
       << e.destination << '\n';
  }
}

inline json measurement_to_json(const MeasurementRecord& rec) {
  json out;
  out["system_name"] = rec.system_name;
  out["year"] = rec.year;
  out["cores"] = rec.cores;
  if (rec.cores_measured) {
    out["cores_measured"] = *rec.cores_measured;
  } else {
    out["cores_measured"] = nullptr;
  }
  out["r_max_gflops"] = rec.r_max_gflops;
  out["r_peak_gflops"] = rec.r_peak_gflops;
  out["benchmark"] = benchmark_label(rec);
  return out;
}

// JSON mirror of ingest_csv: expects an array of objects whose keys match
// the CSV columns.  Malformed JSON or a non-array root throws; individual
// bad elements become rejects (row = 1-based array index).
inline IngestResult ingest_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("ingest_json: ") + e.what());
  }
  if (!doc.is_array()) {
    throw std::invalid_argument("ingest_json: root must be an array");
  }
  IngestResult result;
  std::size_t row = 0;
  for (const json& item : doc) {
    ++row;
    auto reject = [&](std::string reason) {
      result.rejects.push_back({row, std::move(reason),
                                item.dump()});
    };
    if (!item.is_object()) {
      reject("element is not an object");
      continue;
    }
    MeasurementRecord rec;
    try {
      rec.system_name = item.at("system_name").get<std::string>();
      rec.year = item.at("year").get<int>();
      rec.cores = item.at("cores").get<std::int64_t>();
      if (item.contains("cores_measured") &&
          !item.at("cores_measured").is_null()) {
        rec.cores_measured = item.at("cores_measured").get<std::int64_t>();
      }
      rec.r_max_gflops = item.at("r_max_gflops").get<double>();
      rec.r_peak_gflops = item.at("r_peak_gflops").get<double>();
      std::string token = item.at("benchmark").get<std::string>();
      rec.benchmark = to_benchmark(token);
      if (rec.benchmark == Benchmark::Other) rec.benchmark_other = token;
    } catch (const nlohmann::json::exception& e) {
      reject(e.what());
      continue;
    }
    rec.source_row = row;
    if (auto reason = validate(rec)) {
      reject(*reason);
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

inline json gain_history_to_json(const GainHistory& h) {
  json rows = json::array();
  for (const GainEntry& e : h.rows) {
    rows.push_back({{"benchmark", e.benchmark},
                    {"year", e.year},
                    {"rank", e.rank},
                    {"system_name", e.system_name},
                    {"gain", e.gain}});
  }
  json plateaus = json::array();
  for (const Plateau& p : h.plateaus) {
    plateaus.push_back({{"benchmark", p.benchmark},
                        {"start_year", p.start_year},
                        {"end_year", p.end_year}});
  }
  json out;
  out["rows"] = std::move(rows);
  out["plateaus"] = std::move(plateaus);
  out["warnings"] = h.warnings;
  return out;
}

}  // namespace parascale
