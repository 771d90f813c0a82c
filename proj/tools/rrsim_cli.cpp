#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "rrsim.hpp"
#include "rrsim/cost_config.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string protocol;
  bool literal = false;
  std::size_t source = 0;
  double range = 250.0;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

// CSV goes to --out (manifest alongside) or to stdout.
void emit(const Options& o, const std::vector<rrsim::MatrixRow>& rows, std::string_view axis, bool with_means) {
  if (o.out.empty()) {
    rrsim::write_csv(std::cout, rows, axis, with_means);
    return;
  }
  auto csv = open_out(o.out);
  rrsim::write_csv(csv, rows, axis, with_means);
  auto manifest = open_out(o.out + ".manifest");
  rrsim::write_manifest(manifest, rows);
}

rrsim::ConfigFile load(const Options& o) {
  rrsim::ConfigFile cfg = o.config.empty() ? rrsim::ConfigFile{} : rrsim::load_config(o.config);
  auto patch = [&](rrsim::ScenarioConfig& c) {
    if (o.seed) c.seed = *o.seed;
    if (!o.protocol.empty()) c.protocol = rrsim::parse_protocol(o.protocol);
    if (o.literal) c.literal_formulas = true;
  };
  patch(cfg.scenario);
  if (cfg.matrix) {
    patch(cfg.matrix->base);
    if (o.seed) cfg.matrix->seeds = {*o.seed};
    if (!o.protocol.empty()) cfg.matrix->protocols = {rrsim::parse_protocol(o.protocol)};
  }
  return cfg;
}

int cmd_run(const Options& o) {
  const rrsim::ConfigFile cfg = load(o);
  std::vector<rrsim::MatrixRow> rows(1);
  rows[0].point = rrsim::MatrixPoint{cfg.scenario.protocol, 0.0, cfg.scenario.seed, cfg.scenario};
  try {
    rows[0].outcome = rrsim::run_scenario(cfg.scenario);
  } catch (const std::exception& e) {
    rows[0].error = e.what();
  }
  emit(o, rows, "none", false);
  if (!rows[0].outcome) {
    std::cerr << "run failed: " << rows[0].error << '\n';
    return 1;
  }
  return 0;
}

int cmd_matrix(const Options& o) {
  const rrsim::ConfigFile cfg = load(o);
  if (!cfg.matrix) throw rrsim::ConfigError("matrix", "config has no [matrix] section");
  const auto rows = rrsim::run_matrix(*cfg.matrix);
  emit(o, rows, rrsim::to_string(cfg.matrix->axis), true);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.outcome ? 0 : 1;
  if (failed) std::cerr << failed << " of " << rows.size() << " runs failed\n";
  return 0;
}

int cmd_cost(const Options& o) {
  rrsim::cost::CostParams p;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw rrsim::ConfigError("config", "cannot open '" + o.config + "'");
    p = rrsim::cost::parse_cost_params(in);
  }
  const auto reading = o.literal ? rrsim::cost::Reading::Literal : rrsim::cost::Reading::Gated;
  std::ofstream file;
  if (!o.out.empty()) file = open_out(o.out);
  std::ostream& out = o.out.empty() ? std::cout : file;
  out << "protocol,ce_rd,ce_rm,ce_total,ce_rd_exact,ce_rm_exact,ce_total_exact\n";
  for (const auto& [name, r] : rrsim::cost::evaluate_all(p, reading)) {
    using rrsim::cost::exact_str;
    using rrsim::cost::to_double;
    out << name << ',' << rrsim::fixed6(to_double(r.ce_rd)) << ',' << rrsim::fixed6(to_double(r.ce_rm)) << ','
        << rrsim::fixed6(to_double(r.ce_total())) << ',' << exact_str(r.ce_rd) << ',' << exact_str(r.ce_rm) << ','
        << exact_str(r.ce_total()) << '\n';
  }
  return 0;
}

int cmd_oracle(const Options& o) {
  if (o.config.empty()) throw rrsim::ConfigError("--config", "oracle needs a placement file");
  const auto pos = rrsim::load_placement(o.config);
  if (o.source >= pos.size()) throw rrsim::ConfigError("--source", "no such node");
  const auto g = rrsim::Graph::unit_disk(pos, o.range);
  const auto rings = rrsim::ring_populations(g, o.source);
  std::ofstream file;
  if (!o.out.empty()) file = open_out(o.out);
  std::ostream& out = o.out.empty() ? std::cout : file;
  out << "nodes = " << g.size() << "\nedges = " << g.edge_count() << "\nd_avg = " << rrsim::cost::exact_str(rings.d_avg)
      << " (" << rrsim::fixed6(rrsim::cost::to_double(rings.d_avg)) << ")\n";
  std::int64_t reached = 0;
  for (std::size_t k = 0; k < rings.shells.size(); ++k) {
    out << "N_" << k + 1 << " = " << rings.shells[k] << '\n';
    reached += rings.shells[k];
  }
  out << "component = " << reached + 1 << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packet-level simulator for reactive MANET routing with analytical cost columns"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Config file (key = value with [sections])");
    sub->add_option("--out", o.out, "Output path (default stdout)");
    sub->add_flag("--literal-formulas", o.literal, "Use the additive reading of the repair/RERR terms");
  };
  auto sim_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Override the seed");
    sub->add_option("--protocol", o.protocol, "aodv | aodv_ll | dsr | dsr_m | dymo");
  };

  auto* run = app.add_subcommand("run", "Run one scenario and print its CSV row");
  common(run);
  sim_flags(run);
  auto* matrix = app.add_subcommand("matrix", "Run the [matrix] sweep of a config");
  common(matrix);
  sim_flags(matrix);
  auto* cost = app.add_subcommand("cost", "Evaluate the cost model for a [params] file");
  common(cost);
  auto* oracle = app.add_subcommand("oracle", "Ring populations of a placement file");
  common(oracle);
  oracle->add_option("--source", o.source, "Source node id");
  oracle->add_option("--range", o.range, "Radio range in metres");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(o);
    if (*matrix) return cmd_matrix(o);
    if (*cost) return cmd_cost(o);
    if (*oracle) return cmd_oracle(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
