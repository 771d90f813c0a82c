#pragma once

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrsim/network.hpp"

namespace rrsim {

/// A config value failed validation; the message names the field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& problem)
      : std::invalid_argument(field + ": " + problem), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct TrafficConfig {
  int flows = 10;
  double rate_pps = 4.0;
  std::uint32_t payload_bytes = 512;
  double start_window_s = 10.0;  // flow start times uniform in [0, window)
};

struct ScenarioConfig {
  Protocol protocol = Protocol::Aodv;
  int node_count = 50;
  Field field;
  double speed_max = 15.0;
  double pause_time_s = 2.0;
  double duration_s = 300.0;
  std::uint64_t seed = 1;
  TrafficConfig traffic;
  RadioModel radio;
  ErsSchedule ers;
  std::string placement_file;      // static placement instead of random waypoint
  double snapshot_interval_s = 10.0;  // degree sampling for the cost columns
  bool literal_formulas = false;

  void validate() const {
    auto positive = [](double v, const char* f) {
      if (!(v > 0)) throw ConfigError(f, "must be positive (got " + std::to_string(v) + ")");
    };
    if (node_count < 2) throw ConfigError("scenario.nodes", "must be at least 2");
    positive(field.width, "scenario.field_width");
    positive(field.height, "scenario.field_height");
    positive(speed_max, "scenario.speed_max");
    if (speed_max <= 0.1) throw ConfigError("scenario.speed_max", "must exceed the 0.1 m/s minimum speed");
    if (pause_time_s < 0) throw ConfigError("scenario.pause_time", "must be >= 0");
    positive(duration_s, "scenario.duration");
    if (traffic.flows < 0) throw ConfigError("traffic.flows", "must be >= 0");
    if (static_cast<long>(traffic.flows) > static_cast<long>(node_count) * (node_count - 1)) {
      throw ConfigError("traffic.flows", "more flows than distinct node pairs");
    }
    positive(traffic.rate_pps, "traffic.rate");
    if (traffic.payload_bytes == 0) throw ConfigError("traffic.payload", "must be positive");
    if (traffic.start_window_s < 0) throw ConfigError("traffic.start_window", "must be >= 0");
    positive(radio.range_m, "radio.range");
    positive(radio.bandwidth_bps, "radio.bandwidth");
    if (radio.base_delay < SimTime::zero()) throw ConfigError("radio.base_delay_ms", "must be >= 0");
    positive(snapshot_interval_s, "cost.snapshot_interval");
    try {
      ers.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("ers", e.what());
    }
  }

  WaypointParams waypoint() const {
    return WaypointParams{field, 0.1, speed_max, SimTime::seconds(pause_time_s)};
  }
  SimTime duration() const { return SimTime::seconds(duration_s); }
};

/// Writes the resolved config in the same key = value form it is read from.
inline std::string to_ini(const ScenarioConfig& c) {
  std::ostringstream o;
  o << std::setprecision(15);
  o << "[scenario]\n"
    << "protocol = " << to_string(c.protocol) << "\n"
    << "nodes = " << c.node_count << "\n"
    << "field_width = " << c.field.width << "\n"
    << "field_height = " << c.field.height << "\n"
    << "speed_max = " << c.speed_max << "\n"
    << "pause_time = " << c.pause_time_s << "\n"
    << "duration = " << c.duration_s << "\n"
    << "seed = " << c.seed << "\n";
  if (!c.placement_file.empty()) o << "placement = " << c.placement_file << "\n";
  o << "[traffic]\n"
    << "flows = " << c.traffic.flows << "\n"
    << "rate = " << c.traffic.rate_pps << "\n"
    << "payload = " << c.traffic.payload_bytes << "\n"
    << "start_window = " << c.traffic.start_window_s << "\n"
    << "[radio]\n"
    << "range = " << c.radio.range_m << "\n"
    << "bandwidth = " << c.radio.bandwidth_bps << "\n"
    << "base_delay_ms = " << static_cast<double>(c.radio.base_delay.us()) / 1000.0 << "\n"
    << "[ers]\n"
    << "ttl_start = " << c.ers.ttl_start << "\n"
    << "ttl_increment = " << c.ers.ttl_increment << "\n"
    << "ttl_threshold = " << c.ers.ttl_threshold << "\n"
    << "net_diameter = " << c.ers.net_diameter << "\n"
    << "max_retries = " << c.ers.max_retries_at_diameter << "\n"
    << "[cost]\n"
    << "snapshot_interval = " << c.snapshot_interval_s << "\n"
    << "literal_formulas = " << (c.literal_formulas ? "true" : "false") << "\n";
  return o.str();
}

enum class MatrixAxis { PauseTime, Scalability, TrafficRate, Speed };

inline std::string_view to_string(MatrixAxis a) {
  switch (a) {
    case MatrixAxis::PauseTime: return "pause_time";
    case MatrixAxis::Scalability: return "scalability";
    case MatrixAxis::TrafficRate: return "traffic_rate";
    case MatrixAxis::Speed: return "speed_max";
  }
  return "?";
}

inline MatrixAxis parse_axis(std::string_view s) {
  for (MatrixAxis a : {MatrixAxis::PauseTime, MatrixAxis::Scalability, MatrixAxis::TrafficRate, MatrixAxis::Speed}) {
    if (s == to_string(a)) return a;
  }
  throw ConfigError("matrix.axis", "unknown axis '" + std::string(s) + "' (expected pause_time, scalability, traffic_rate, speed_max)");
}

struct MatrixPoint {
  Protocol protocol;
  double value;
  std::uint64_t seed;
  ScenarioConfig config;
};

/// A sweep over one axis, crossed with protocols and seeds.
struct ExperimentMatrix {
  ScenarioConfig base;
  MatrixAxis axis = MatrixAxis::PauseTime;
  std::vector<double> values;
  std::vector<Protocol> protocols;
  std::vector<std::uint64_t> seeds;
  unsigned threads = 1;

  void validate() const {
    if (values.empty()) throw ConfigError("matrix.values", "must not be empty");
    if (protocols.empty()) throw ConfigError("matrix.protocols", "must not be empty");
    if (seeds.empty()) throw ConfigError("matrix.seeds", "must not be empty");
    for (const MatrixPoint& p : points()) p.config.validate();
  }

  /// Protocol-major, then axis value, then seed.
  std::vector<MatrixPoint> points() const {
    std::vector<MatrixPoint> out;
    for (Protocol proto : protocols) {
      for (double v : values) {
        for (std::uint64_t s : seeds) {
          ScenarioConfig c = base;
          c.protocol = proto;
          c.seed = s;
          apply(c, v);
          out.push_back(MatrixPoint{proto, v, s, c});
        }
      }
    }
    return out;
  }

  void apply(ScenarioConfig& c, double v) const {
    switch (axis) {
      case MatrixAxis::PauseTime: c.pause_time_s = v; break;
      case MatrixAxis::Scalability:
        if (v != static_cast<int>(v)) throw ConfigError("matrix.values", "node counts must be integers");
        c.node_count = static_cast<int>(v);
        break;
      case MatrixAxis::TrafficRate: c.traffic.rate_pps = v; break;
      case MatrixAxis::Speed: c.speed_max = v; break;
    }
  }
};

namespace detail {

using boost::property_tree::ptree;

template <typename T>
T parse_number(const std::string& field, std::string text) {
  boost::algorithm::trim(text);
  T v{};
  const char* b = text.data();
  const char* e = b + text.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e || text.empty()) throw ConfigError(field, "not a valid number: '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& field, std::string text) {
  boost::algorithm::trim(text);
  boost::algorithm::to_lower(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(field, "expected true or false, got '" + text + "'");
}

template <typename T>
void read(const ptree& pt, const std::string& key, T& out) {
  auto v = pt.get_optional<std::string>(key);
  if (!v) return;
  if constexpr (std::is_same_v<T, bool>) {
    out = parse_bool(key, *v);
  } else if constexpr (std::is_same_v<T, std::string>) {
    out = boost::algorithm::trim_copy(*v);
  } else {
    out = parse_number<T>(key, *v);
  }
}

template <typename T>
std::vector<T> read_list(const std::string& field, const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::is_any_of(","));
  std::vector<T> out;
  for (std::string& p : parts) {
    boost::algorithm::trim(p);
    if (p.empty()) continue;
    out.push_back(parse_number<T>(field, p));
  }
  return out;
}

inline void check_known(const ptree& pt) {
  static const std::map<std::string, std::vector<std::string>> known = {
      {"scenario", {"protocol", "nodes", "field_width", "field_height", "speed_max", "pause_time", "duration", "seed", "placement"}},
      {"traffic", {"flows", "rate", "payload", "start_window"}},
      {"radio", {"range", "bandwidth", "base_delay_ms"}},
      {"ers", {"ttl_start", "ttl_increment", "ttl_threshold", "net_diameter", "max_retries"}},
      {"cost", {"snapshot_interval", "literal_formulas"}},
      {"matrix", {"axis", "values", "protocols", "seeds", "threads"}},
  };
  for (const auto& [section, body] : pt) {
    auto it = known.find(section);
    if (it == known.end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, v] : body) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        throw ConfigError(section + "." + key, "unknown key");
      }
    }
  }
}

}  // namespace detail

/// Parsed config file: the base scenario plus an optional sweep.
struct ConfigFile {
  ScenarioConfig scenario;
  std::optional<ExperimentMatrix> matrix;
};

inline ConfigFile parse_config(std::istream& in) {
  using namespace detail;
  ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config", std::string("line ") + std::to_string(e.line()) + ": " + e.message());
  }
  check_known(pt);

  ConfigFile out;
  ScenarioConfig& c = out.scenario;
  if (auto p = pt.get_optional<std::string>("scenario.protocol")) {
    try {
      c.protocol = parse_protocol(boost::algorithm::trim_copy(*p));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("scenario.protocol", e.what());
    }
  }
  read(pt, "scenario.nodes", c.node_count);
  read(pt, "scenario.field_width", c.field.width);
  read(pt, "scenario.field_height", c.field.height);
  read(pt, "scenario.speed_max", c.speed_max);
  read(pt, "scenario.pause_time", c.pause_time_s);
  read(pt, "scenario.duration", c.duration_s);
  read(pt, "scenario.seed", c.seed);
  read(pt, "scenario.placement", c.placement_file);
  read(pt, "traffic.flows", c.traffic.flows);
  read(pt, "traffic.rate", c.traffic.rate_pps);
  read(pt, "traffic.payload", c.traffic.payload_bytes);
  read(pt, "traffic.start_window", c.traffic.start_window_s);
  read(pt, "radio.range", c.radio.range_m);
  read(pt, "radio.bandwidth", c.radio.bandwidth_bps);
  double base_ms = static_cast<double>(c.radio.base_delay.us()) / 1000.0;
  read(pt, "radio.base_delay_ms", base_ms);
  c.radio.base_delay = SimTime::seconds(base_ms / 1000.0);
  read(pt, "ers.ttl_start", c.ers.ttl_start);
  read(pt, "ers.ttl_increment", c.ers.ttl_increment);
  read(pt, "ers.ttl_threshold", c.ers.ttl_threshold);
  read(pt, "ers.net_diameter", c.ers.net_diameter);
  read(pt, "ers.max_retries", c.ers.max_retries_at_diameter);
  read(pt, "cost.snapshot_interval", c.snapshot_interval_s);
  read(pt, "cost.literal_formulas", c.literal_formulas);
  c.validate();

  if (pt.get_child_optional("matrix")) {
    ExperimentMatrix m;
    m.base = c;
    if (auto a = pt.get_optional<std::string>("matrix.axis")) m.axis = parse_axis(boost::algorithm::trim_copy(*a));
    if (auto v = pt.get_optional<std::string>("matrix.values")) m.values = read_list<double>("matrix.values", *v);
    if (auto s = pt.get_optional<std::string>("matrix.seeds")) {
      m.seeds = read_list<std::uint64_t>("matrix.seeds", *s);
    } else {
      m.seeds = {1, 2, 3, 4, 5};
    }
    if (auto p = pt.get_optional<std::string>("matrix.protocols")) {
      std::vector<std::string> names;
      boost::algorithm::split(names, *p, boost::is_any_of(","));
      for (std::string& n : names) {
        boost::algorithm::trim(n);
        if (n.empty()) continue;
        try {
          m.protocols.push_back(parse_protocol(n));
        } catch (const std::invalid_argument& e) {
          throw ConfigError("matrix.protocols", e.what());
        }
      }
    } else {
      m.protocols = {c.protocol};
    }
    read(pt, "matrix.threads", m.threads);
    if (m.threads == 0) throw ConfigError("matrix.threads", "must be positive");
    m.validate();
    out.matrix = std::move(m);
  }
  return out;
}

inline ConfigFile parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_config(in);
}

/// Placement file: "node_id x y" per line (commas also accepted); '#' starts
/// a comment. Ids must cover 0..n-1 exactly once.
inline std::vector<Vec2> parse_placement(std::istream& in) {
  std::map<std::uint32_t, Vec2> pos;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::replace(line.begin(), line.end(), ',', ' ');
    boost::algorithm::trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::uint32_t id;
    double x, y;
    std::string extra;
    if (!(ls >> id >> x >> y) || (ls >> extra)) {
      throw ConfigError("placement", "line " + std::to_string(lineno) + ": expected 'node_id x y'");
    }
    if (!pos.emplace(id, Vec2{x, y}).second) {
      throw ConfigError("placement", "line " + std::to_string(lineno) + ": duplicate node " + std::to_string(id));
    }
  }
  std::vector<Vec2> out;
  for (const auto& [id, p] : pos) {
    if (id != out.size()) throw ConfigError("placement", "node ids must be 0..n-1 without gaps");
    out.push_back(p);
  }
  return out;
}

inline std::vector<Vec2> load_placement(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("placement", "cannot open '" + path + "'");
  return parse_placement(in);
}

}  // namespace rrsim
