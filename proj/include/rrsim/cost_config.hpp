#pragma once

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <istream>
#include <sstream>
#include <string>

#include "rrsim/cost_model.hpp"
#include "rrsim/scenario.hpp"

namespace rrsim::cost {

/// Exact value from "7", "2.25" or "7/3".
inline Cost parse_exact(const std::string& field, std::string text) {
  boost::algorithm::trim(text);
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const auto num = detail::parse_number<std::int64_t>(field, text.substr(0, slash));
    const auto den = detail::parse_number<std::int64_t>(field, text.substr(slash + 1));
    if (den == 0) throw ConfigError(field, "zero denominator");
    return Cost(num, den);
  }
  const bool neg = !text.empty() && text.front() == '-';
  std::string body = neg ? text.substr(1) : text;
  std::string whole = body;
  std::string frac;
  if (auto dot = body.find('.'); dot != std::string::npos) {
    whole = body.substr(0, dot);
    frac = body.substr(dot + 1);
  }
  if (whole.empty()) whole = "0";
  if (frac.size() > 12) throw ConfigError(field, "too many decimal places");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const auto w = detail::parse_number<std::int64_t>(field, whole);
  const auto f = frac.empty() ? 0 : detail::parse_number<std::int64_t>(field, frac);
  if (frac.find_first_not_of("0123456789") != std::string::npos) throw ConfigError(field, "not a valid number: '" + text + "'");
  const Cost v = Cost(w) + Cost(f, den);
  return neg ? -v : v;
}

inline std::string exact_str(const Cost& c) {
  std::ostringstream o;
  o << c.numerator();
  if (c.denominator() != 1) o << '/' << c.denominator();
  return o.str();
}

/// Cost inputs from a [params] section; absent keys keep their defaults.
inline CostParams parse_cost_params(std::istream& in) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config", std::string("line ") + std::to_string(e.line()) + ": " + e.message());
  }
  CostParams p;
  for (const auto& [section, body] : pt) {
    if (section != "params") throw ConfigError(section, "unknown section (expected [params])");
    for (const auto& [key, v] : body) {
      const std::string field = "params." + key;
      const std::string text = v.get_value<std::string>();
      auto count = [&] { return detail::parse_number<std::int64_t>(field, boost::algorithm::trim_copy(text)); };
      if (key == "d_avg") {
        p.d_avg = parse_exact(field, text);
      } else if (key == "rings") {
        p.ring_populations = detail::read_list<std::int64_t>(field, text);
      } else if (key == "tau_route") {
        p.tau_route_in_use = parse_exact(field, text);
      } else if (key == "tau_interval") {
        p.tau_hello_interval = parse_exact(field, text);
      } else if (key == "n_rn") {
        p.n_rn = count();
      } else if (key == "lb_rn") {
        p.lb_rn = count();
      } else if (key == "lb_ar") {
        p.lb_ar = count();
      } else if (key == "n_llr") {
        p.n_llr = count();
      } else if (key == "p_us_llr") {
        p.p_us_llr = count();
      } else if (key == "n_rerr") {
        p.n_rerr = count();
      } else if (key == "n_ps") {
        p.n_ps = count();
      } else {
        throw ConfigError(field, "unknown key");
      }
    }
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }
  return p;
}

struct ProtocolCost {
  std::string protocol;
  CostReport report;
};

/// Every variant's total for one set of inputs.
inline std::vector<ProtocolCost> evaluate_all(const CostParams& p, Reading r) {
  const Cost rd = ce_rd(p.d_avg, p.ring_populations);
  return {
      {"aodv", {rd, ce_rm_aodv(p, r)}},
      {"aodv_ll", {rd, ce_rm_aodv_ll(p, r)}},
      {"dsr", {rd, ce_rm_dsr(p.n_ps)}},
      {"dsr_m", {rd, ce_rm_dsr(p.n_ps)}},
      {"dymo", {rd, ce_rm_dymo(p)}},
  };
}

}  // namespace rrsim::cost
