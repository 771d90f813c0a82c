#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rrsim::cost {

/// Control-packet transmission cost units, kept exact.
using Cost = boost::rational<std::int64_t>;

enum class Reading {
  Gated,    // RERR term only counts when the repair failed
  Literal,  // the additive form as printed
};

inline void require_nonnegative(std::int64_t v, const char* what) {
  if (v < 0) throw std::invalid_argument(std::string(what) + " must be >= 0");
}
inline void require_nonnegative(const Cost& v, const char* what) {
  if (v < 0) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

/// 1 + 2 + ... + n
inline Cost triangular(std::int64_t n) {
  require_nonnegative(n, "count");
  return Cost(n * (n + 1) / 2);
}

inline Cost sgn_abs(std::int64_t indicator) { return Cost(indicator != 0 ? 1 : 0); }

/// One ring of an expanding ring search: the source broadcast plus the
/// rebroadcasts of the ring's n_k nodes, each reaching d_avg neighbors.
inline Cost ce_ring(const Cost& d_avg, std::int64_t n_k) {
  require_nonnegative(d_avg, "d_avg");
  return d_avg + d_avg * triangular(n_k);
}

inline Cost ce_rd(const Cost& d_avg, const std::vector<std::int64_t>& rings) {
  Cost total = 0;
  for (std::int64_t n : rings) total += ce_ring(d_avg, n);
  return total;
}

inline Cost ce_hello(const Cost& tau_route, const Cost& tau_interval, std::int64_t n_rn) {
  require_nonnegative(tau_route, "tau_route_in_use");
  require_nonnegative(n_rn, "n_rn");
  if (tau_interval <= 0) throw std::invalid_argument("tau_hello_interval must be > 0");
  return tau_route / tau_interval * n_rn;
}

inline Cost ce_rm_dsr(std::int64_t n_ps) { return triangular(n_ps); }

struct CostParams {
  Cost d_avg = 0;
  std::vector<std::int64_t> ring_populations;
  Cost tau_route_in_use = 0;
  Cost tau_hello_interval = 1;
  std::int64_t n_rn = 0;
  std::int64_t lb_rn = 0;
  std::int64_t lb_ar = 0;
  std::int64_t n_llr = 0;
  std::int64_t p_us_llr = 0;
  std::int64_t n_rerr = 0;
  std::int64_t n_ps = 0;

  void validate() const {
    require_nonnegative(d_avg, "d_avg");
    for (std::int64_t n : ring_populations) require_nonnegative(n, "ring population");
    require_nonnegative(tau_route_in_use, "tau_route_in_use");
    if (tau_hello_interval <= 0) throw std::invalid_argument("tau_hello_interval must be > 0");
    require_nonnegative(n_rn, "n_rn");
    require_nonnegative(n_llr, "n_llr");
    require_nonnegative(n_rerr, "n_rerr");
    require_nonnegative(n_ps, "n_ps");
    for (auto [v, name] : {std::pair{lb_rn, "lb_rn"}, {lb_ar, "lb_ar"}, {p_us_llr, "p_us_llr"}}) {
      if (v != 0 && v != 1) throw std::invalid_argument(std::string(name) + " must be 0 or 1");
    }
  }

  Cost hello() const { return ce_hello(tau_route_in_use, tau_hello_interval, n_rn); }
};

// Break handling shared by AODV and AODV-LL: repair flood, then RERR.
inline Cost repair_terms(std::int64_t gate, const CostParams& p, Reading r) {
  const Cost llr = sgn_abs(gate) * triangular(p.n_llr);
  if (r == Reading::Gated) return llr + sgn_abs(p.p_us_llr) * triangular(p.n_rerr);
  return llr + sgn_abs(p.p_us_llr) + triangular(p.n_rerr);
}

inline Cost ce_rm_aodv(const CostParams& p, Reading r = Reading::Gated) {
  p.validate();
  return p.hello() + repair_terms(p.lb_rn, p, r);
}

inline Cost ce_rm_aodv_ll(const CostParams& p, Reading r = Reading::Gated) {
  p.validate();
  return repair_terms(p.lb_ar, p, r);
}

inline Cost ce_rm_dymo(const CostParams& p) {
  p.validate();
  return p.hello() + sgn_abs(p.lb_ar) * triangular(p.n_rerr);
}

struct CostReport {
  Cost ce_rd = 0;
  Cost ce_rm = 0;
  Cost ce_total() const { return ce_rd + ce_rm; }
};

inline double to_double(const Cost& c) {
  return static_cast<double>(c.numerator()) / static_cast<double>(c.denominator());
}

}  // namespace rrsim::cost
