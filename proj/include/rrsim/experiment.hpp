#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "rrsim/runner.hpp"

namespace rrsim {

/// Fixed CSV column order.
inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "protocol",      "axis",         "value",       "seed",        "nodes",         "speed_max",
      "pause_time",    "rate",         "flows",       "duration",    "status",        "originated",
      "delivered",     "dropped",      "in_flight",   "throughput_bps", "avg_delay_s", "rreq_tx",
      "rrep_tx",       "rerr_tx",      "hello_tx",    "control_tx",  "data_tx",       "nrl",
      "ce_rd",         "ce_rm",        "ce_total"};
  return cols;
}

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Micro-units keep aggregate means exact at the printed precision.
inline std::int64_t to_micro(double v) { return std::llround(v * 1e6); }
inline std::string micro_str(std::int64_t m) {
  const bool neg = m < 0;
  const std::uint64_t a = neg ? static_cast<std::uint64_t>(-m) : static_cast<std::uint64_t>(m);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%llu.%06llu", neg ? "-" : "", static_cast<unsigned long long>(a / 1'000'000),
                static_cast<unsigned long long>(a % 1'000'000));
  return buf;
}

/// Outcome of one matrix cell: either a finished run or the error it raised.
struct MatrixRow {
  MatrixPoint point;
  std::optional<RunOutcome> outcome;
  std::string error;
};

namespace detail {

inline std::string csv_escape(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

// Numeric measurement columns, in csv_columns() order from "originated".
inline std::vector<std::optional<double>> measurements(const RunOutcome& o) {
  const MetricsReport& m = o.metrics;
  std::vector<std::optional<double>> v = {
      double(m.data_originated), double(m.data_delivered), double(m.data_dropped), double(m.in_flight_at_end),
      m.throughput_bps,          m.avg_e2e_delay_s,        double(m.control_tx.rreq), double(m.control_tx.rrep),
      double(m.control_tx.rerr), double(m.control_tx.hello), double(m.control_tx.total()), double(m.data_tx),
      m.nrl,                     cost::to_double(o.cost.ce_rd), cost::to_double(o.cost.ce_rm),
      cost::to_double(o.cost.ce_total())};
  return v;
}

// Columns that are counts print as integers in per-seed rows.
inline bool integral_column(std::size_t i) { return i <= 3 || (i >= 6 && i <= 11); }

}  // namespace detail

inline std::string csv_header() {
  std::string h;
  for (const std::string& c : csv_columns()) h += (h.empty() ? "" : ",") + c;
  return h;
}

inline std::string config_prefix(const ScenarioConfig& c, std::string_view axis, double value, const std::string& seed) {
  std::ostringstream o;
  o << to_string(c.protocol) << ',' << axis << ',' << fixed6(value) << ',' << seed << ',' << c.node_count << ','
    << fixed6(c.speed_max) << ',' << fixed6(c.pause_time_s) << ',' << fixed6(c.traffic.rate_pps) << ',' << c.traffic.flows
    << ',' << fixed6(c.duration_s);
  return o.str();
}

inline std::string csv_row(const MatrixRow& r, std::string_view axis) {
  std::string line = config_prefix(r.point.config, axis, r.point.value, std::to_string(r.point.seed));
  if (!r.outcome) {
    line += ",error: " + detail::csv_escape(r.error);
    for (std::size_t i = 0; i < 16; ++i) line += ',';
    return line;
  }
  line += ",ok";
  const auto vals = detail::measurements(*r.outcome);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    line += ',';
    if (!vals[i]) {
      line += "NA";
    } else if (detail::integral_column(i)) {
      line += std::to_string(static_cast<std::uint64_t>(*vals[i]));
    } else {
      line += fixed6(*vals[i]);
    }
  }
  return line;
}

/// Mean over the successful seed rows of one (protocol, value) group, taken
/// on the printed 6-decimal values so it is reproducible from the CSV.
inline std::string csv_mean_row(const std::vector<const MatrixRow*>& group, std::string_view axis) {
  const MatrixRow& first = *group.front();
  std::string line = config_prefix(first.point.config, axis, first.point.value, "mean");
  std::vector<const RunOutcome*> ok;
  for (const MatrixRow* r : group) {
    if (r->outcome) ok.push_back(&*r->outcome);
  }
  if (ok.empty()) {
    line += ",error: no successful seeds";
    for (std::size_t i = 0; i < 16; ++i) line += ',';
    return line;
  }
  line += ok.size() == group.size() ? ",ok" : ",partial";
  const std::size_t ncols = detail::measurements(*ok.front()).size();
  for (std::size_t i = 0; i < ncols; ++i) {
    std::int64_t sum = 0;
    std::int64_t n = 0;
    for (const RunOutcome* o : ok) {
      if (auto v = detail::measurements(*o)[i]) {
        sum += to_micro(std::stod(fixed6(*v)));
        ++n;
      }
    }
    line += ',';
    if (n == 0) {
      line += "NA";
      continue;
    }
    // Round half away from zero.
    const std::int64_t q = (sum >= 0 ? sum + n / 2 : sum - n / 2) / n;
    line += micro_str(q);
  }
  return line;
}

/// Runs every cell, `threads` at a time. Results come back in point order
/// regardless of completion order; a failing cell records its error.
inline std::vector<MatrixRow> run_matrix(const ExperimentMatrix& m) {
  m.validate();
  const std::vector<MatrixPoint> points = m.points();
  std::vector<MatrixRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      rows[i].point = points[i];
      try {
        rows[i].outcome = run_scenario(points[i].config);
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(m.threads, static_cast<unsigned>(points.size())));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return rows;
}

/// Header, one row per cell, then one mean row per (protocol, value).
inline void write_csv(std::ostream& out, const std::vector<MatrixRow>& rows, std::string_view axis,
                      bool with_means = true) {
  out << csv_header() << '\n';
  for (const MatrixRow& r : rows) out << csv_row(r, axis) << '\n';
  if (!with_means) return;
  std::vector<const MatrixRow*> group;
  auto flush = [&] {
    if (!group.empty()) out << csv_mean_row(group, axis) << '\n';
    group.clear();
  };
  for (const MatrixRow& r : rows) {
    if (!group.empty() && (group.front()->point.protocol != r.point.protocol || group.front()->point.value != r.point.value)) {
      flush();
    }
    group.push_back(&r);
  }
  flush();
}

/// Full resolved config of every row, for reproduction.
inline void write_manifest(std::ostream& out, const std::vector<MatrixRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << "; row " << i + 1 << (rows[i].outcome ? "" : " (error: " + rows[i].error + ")") << '\n';
    out << to_ini(rows[i].point.config) << '\n';
  }
}

}  // namespace rrsim
