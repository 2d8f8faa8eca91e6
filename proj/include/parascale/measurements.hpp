#pragma once

// Ingestion and analysis of published benchmark measurements (rank-list
// style rows: system, year, cores, attained and peak rates, benchmark).
// Rows that fail validation are collected as rejects with a reason rather
// than aborting the whole file; only a malformed header is fatal.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parascale/scaling.hpp"
#include "parascale/types.hpp"

namespace parascale {

enum class Benchmark { Hpl, Hpcg, HplAi, Other };

struct MeasurementRecord {
  std::string system_name;
  int year = 0;
  std::int64_t cores = 0;
  std::optional<std::int64_t> cores_measured;  // when the run used fewer
  double r_max_gflops = 0.0;
  double r_peak_gflops = 0.0;
  Benchmark benchmark = Benchmark::Other;
  std::string benchmark_other;  // original token when benchmark == Other
  std::size_t source_row = 0;   // 1-based position in the ingested file
};

inline Benchmark to_benchmark(std::string_view token) {
  auto eq = [](std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(a[i])) !=
          std::toupper(static_cast<unsigned char>(b[i]))) {
        return false;
      }
    }
    return true;
  };
  if (eq(token, "HPL")) return Benchmark::Hpl;
  if (eq(token, "HPCG")) return Benchmark::Hpcg;
  if (eq(token, "HPL-AI")) return Benchmark::HplAi;
  return Benchmark::Other;
}

inline std::string benchmark_label(const MeasurementRecord& rec) {
  switch (rec.benchmark) {
    case Benchmark::Hpl: return "HPL";
    case Benchmark::Hpcg: return "HPCG";
    case Benchmark::HplAi: return "HPL-AI";
    case Benchmark::Other: return rec.benchmark_other;
  }
  return rec.benchmark_other;
}

// Empty result means the record is usable.
inline std::optional<std::string> validate(const MeasurementRecord& rec) {
  if (rec.system_name.empty()) return "system_name is empty";
  if (rec.year < 1950 || rec.year > 2100) {
    return "year out of range [1950, 2100]";
  }
  if (rec.cores < 1) return "cores must be >= 1";
  if (rec.cores_measured &&
      (*rec.cores_measured < 1 || *rec.cores_measured > rec.cores)) {
    return "cores_measured out of range [1, cores]";
  }
  if (!(rec.r_max_gflops > 0.0)) return "r_max_gflops must be > 0";
  if (!(rec.r_peak_gflops > 0.0)) return "r_peak_gflops must be > 0";
  if (rec.r_max_gflops > rec.r_peak_gflops) return "efficiency > 1";
  return std::nullopt;
}

struct RejectedRow {
  std::size_t row;  // 1-based file line number (header is line 1)
  std::string reason;
  std::string line;
};

struct IngestResult {
  std::vector<MeasurementRecord> records;
  std::vector<RejectedRow> rejects;
};

inline constexpr std::string_view kMeasurementCsvHeader =
    "system_name,year,cores,cores_measured,r_max_gflops,r_peak_gflops,"
    "benchmark";

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits one CSV line; supports quoted fields with doubled-quote escapes.
// Returns false on an unterminated quote.
inline bool split_csv_line(std::string_view line,
                           std::vector<std::string>& out) {
  out.clear();
  std::size_t i = 0;
  while (true) {
    std::string field;
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        field.push_back(line[i++]);
      }
      if (!closed) return false;
    } else {
      std::size_t comma = line.find(',', i);
      std::size_t end = comma == std::string_view::npos ? line.size() : comma;
      field = std::string(trim(line.substr(i, end - i)));
      i = end;
    }
    out.push_back(std::move(field));
    if (i >= line.size()) return true;
    if (line[i] != ',') return false;  // stray text after a closing quote
    ++i;
    if (i == line.size()) {  // trailing comma: one final empty field
      out.emplace_back();
      return true;
    }
  }
}

inline bool parse_i64(std::string_view s, std::int64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline bool parse_int(std::string_view s, int& out) {
  std::int64_t v = 0;
  if (!parse_i64(s, v)) return false;
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    return false;
  }
  out = static_cast<int>(v);
  return true;
}

inline bool parse_f64(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline std::string strip_carriage_return(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace detail

// Reads the exact seven-column CSV schema (see kMeasurementCsvHeader).
// A missing or different header throws; bad rows become rejects.  An empty
// stream yields an empty result.
inline IngestResult ingest_csv(std::istream& in) {
  IngestResult result;
  std::string line;
  if (!std::getline(in, line)) return result;
  // tolerate a UTF-8 byte-order mark
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  line = detail::strip_carriage_return(std::move(line));
  if (line != kMeasurementCsvHeader) {
    throw std::invalid_argument(
        "ingest_csv: expected header '" +
        std::string(kMeasurementCsvHeader) + "', got '" + line + "'");
  }

  std::vector<std::string> fields;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = detail::strip_carriage_return(std::move(line));
    if (detail::trim(line).empty()) continue;
    auto reject = [&](std::string reason) {
      result.rejects.push_back({row, std::move(reason), line});
    };
    if (!detail::split_csv_line(line, fields)) {
      reject("malformed quoting");
      continue;
    }
    if (fields.size() != 7) {
      reject("expected 7 fields, got " + std::to_string(fields.size()));
      continue;
    }
    MeasurementRecord rec;
    rec.system_name = fields[0];
    if (!detail::parse_int(fields[1], rec.year)) {
      reject("year is not an integer");
      continue;
    }
    if (!detail::parse_i64(fields[2], rec.cores)) {
      reject("cores is not an integer");
      continue;
    }
    if (!detail::trim(fields[3]).empty()) {
      std::int64_t cm = 0;
      if (!detail::parse_i64(fields[3], cm)) {
        reject("cores_measured is not an integer");
        continue;
      }
      rec.cores_measured = cm;
    }
    if (!detail::parse_f64(fields[4], rec.r_max_gflops)) {
      reject("r_max_gflops is not a number");
      continue;
    }
    if (!detail::parse_f64(fields[5], rec.r_peak_gflops)) {
      reject("r_peak_gflops is not a number");
      continue;
    }
    std::string token = std::string(detail::trim(fields[6]));
    rec.benchmark = to_benchmark(token);
    if (rec.benchmark == Benchmark::Other) rec.benchmark_other = token;
    rec.source_row = row;
    if (auto reason = validate(rec)) {
      reject(*reason);
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

struct DerivedMetrics {
  Efficiency efficiency;
  Alpha alpha;  // parallel fraction a strong-scaling law needs for this row
  std::int64_t cores_used;
  bool used_measured_cores;
};

// Efficiency from the attained/peak ratio, then the parallel fraction that
// reproduces it at the measured core count.  Throws SuperlinearError when
// r_max exceeds r_peak and InconsistentMeasurementError when the efficiency
// is below the 1/N floor.
inline DerivedMetrics derive(const MeasurementRecord& rec) {
  std::int64_t cores_used = rec.cores_measured.value_or(rec.cores);
  if (cores_used < 2) {
    throw std::invalid_argument(
        "derive: need at least 2 cores to infer a parallel fraction");
  }
  Efficiency eff = Efficiency::from_ratio(rec.r_max_gflops, rec.r_peak_gflops);
  Alpha alpha = alpha_from_efficiency(eff, cores_used);
  return {eff, alpha, cores_used, rec.cores_measured.has_value()};
}

struct SurfacePoint {
  double alpha;
  std::int64_t n;
  double speedup;
  double efficiency;
};

// Strong-scaling speedup/efficiency over a grid of parallel fractions and
// processor counts, row-major in (alpha, n).
inline std::vector<SurfacePoint> efficiency_surface(
    const std::vector<double>& alphas, const std::vector<std::int64_t>& ns) {
  std::vector<SurfacePoint> out;
  out.reserve(alphas.size() * ns.size());
  for (double a : alphas) {
    Alpha alpha = Alpha::from_parallel_fraction(a);
    for (std::int64_t n : ns) {
      out.push_back({a, n, amdahl_speedup(alpha, n).value(),
                     amdahl_efficiency(alpha, n).value()});
    }
  }
  return out;
}

enum class GainNormalize {
  None,         // gain is the attained rate itself
  PeakPerCore,  // gain = r_max / (r_peak / cores): attained rate in units of
                // one core's peak
  ConstantSingleUnit,  // gain = r_max / single_unit_gflops
};

struct GainOptions {
  int top_k = 25;
  double plateau_max_step = 0.10;  // max relative step between adjacent years
  int plateau_min_years = 3;
  GainNormalize normalize = GainNormalize::PeakPerCore;
  double single_unit_gflops = 1.0;  // for ConstantSingleUnit
};

struct GainEntry {
  std::string benchmark;
  int year;
  int rank;  // 1 = fastest of its (benchmark, year) group
  std::string system_name;
  double gain;
};

struct Plateau {
  std::string benchmark;
  int start_year;
  int end_year;  // inclusive
};

struct GainHistory {
  std::vector<GainEntry> rows;
  std::vector<Plateau> plateaus;
  std::vector<std::string> warnings;
};

// Ranks records inside each (benchmark, year) group by attained rate and
// reports the top_k as normalized gains.  A plateau is a run of consecutive
// calendar years whose best gain moves by at most plateau_max_step
// (relative) year over year, spanning at least plateau_min_years years.
inline GainHistory gain_history(const std::vector<MeasurementRecord>& records,
                                const GainOptions& opt = {}) {
  if (opt.top_k < 1) {
    throw std::invalid_argument("gain_history: top_k must be >= 1");
  }
  if (!(opt.plateau_max_step >= 0.0)) {
    throw std::invalid_argument("gain_history: plateau_max_step must be >= 0");
  }
  if (opt.plateau_min_years < 2) {
    throw std::invalid_argument("gain_history: plateau_min_years must be >= 2");
  }
  if (opt.normalize == GainNormalize::ConstantSingleUnit &&
      !(opt.single_unit_gflops > 0.0)) {
    throw std::invalid_argument(
        "gain_history: single_unit_gflops must be > 0");
  }

  auto gain_of = [&](const MeasurementRecord& rec) -> double {
    switch (opt.normalize) {
      case GainNormalize::None:
        return rec.r_max_gflops;
      case GainNormalize::PeakPerCore: {
        double cores =
            static_cast<double>(rec.cores_measured.value_or(rec.cores));
        return rec.r_max_gflops / (rec.r_peak_gflops / cores);
      }
      case GainNormalize::ConstantSingleUnit:
        return rec.r_max_gflops / opt.single_unit_gflops;
    }
    return rec.r_max_gflops;
  };

  std::map<std::string, std::map<int, std::vector<const MeasurementRecord*>>>
      groups;
  for (const MeasurementRecord& rec : records) {
    groups[benchmark_label(rec)][rec.year].push_back(&rec);
  }

  GainHistory history;
  for (auto& [label, years] : groups) {
    std::map<int, double> best_gain;
    for (auto& [year, rows] : years) {
      std::sort(rows.begin(), rows.end(),
                [](const MeasurementRecord* a, const MeasurementRecord* b) {
                  if (a->r_max_gflops != b->r_max_gflops) {
                    return a->r_max_gflops > b->r_max_gflops;
                  }
                  return a->system_name < b->system_name;
                });
      if (std::cmp_less(rows.size(), opt.top_k)) {
        history.warnings.push_back(
            label + " " + std::to_string(year) + ": only " +
            std::to_string(rows.size()) + " of " + std::to_string(opt.top_k) +
            " requested rows");
      }
      int rank = 0;
      for (const MeasurementRecord* rec : rows) {
        if (++rank > opt.top_k) break;
        double g = gain_of(*rec);
        history.rows.push_back({label, year, rank, rec->system_name, g});
        if (rank == 1) best_gain[year] = g;
      }
    }

    // plateau scan over the per-year best gains
    int run_start = 0;
    int prev_year = 0;
    double prev_gain = 0.0;
    bool in_run = false;
    auto close_run = [&](int end_year) {
      if (in_run && end_year - run_start + 1 >= opt.plateau_min_years) {
        history.plateaus.push_back({label, run_start, end_year});
      }
      in_run = false;
    };
    for (const auto& [year, g] : best_gain) {
      if (in_run && year == prev_year + 1 &&
          std::abs(g - prev_gain) <= opt.plateau_max_step * prev_gain) {
        // run continues
      } else {
        close_run(prev_year);
        run_start = year;
        in_run = true;
      }
      prev_year = year;
      prev_gain = g;
    }
    close_run(prev_year);
  }
  return history;
}

}  // namespace parascale
