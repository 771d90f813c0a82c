#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace rrsim;
using namespace rrsim::testing;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string column(const std::string& line, const std::string& name) {
  const auto& cols = csv_columns();
  const auto idx = static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
  return fields(line).at(idx);
}

std::string csv_for(const ScenarioConfig& cfg) {
  MatrixRow row{MatrixPoint{cfg.protocol, 0.0, cfg.seed, cfg}, run_scenario(cfg), {}};
  return csv_row(row, "none");
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const ConfigFile f = parse_config_text(
      "[scenario]\nprotocol = dsr_m\nnodes = 30\nspeed_max = 30\npause_time = 0\nduration = 120\nseed = 9\n"
      "[traffic]\nflows = 5\nrate = 8\n[radio]\nrange = 200\n[ers]\nttl_start = 2\n");
  EXPECT_EQ(f.scenario.protocol, Protocol::DsrM);
  EXPECT_EQ(f.scenario.node_count, 30);
  EXPECT_EQ(f.scenario.seed, 9u);
  EXPECT_EQ(f.scenario.traffic.rate_pps, 8.0);
  EXPECT_EQ(f.scenario.traffic.payload_bytes, 512u);
  EXPECT_EQ(f.scenario.radio.range_m, 200.0);
  EXPECT_EQ(f.scenario.ers.ttl_start, 2);
  EXPECT_FALSE(f.matrix);
}

TEST(Config, RejectsWithFieldNames) {
  auto field_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  EXPECT_EQ(field_of("[scenario]\nnodes = 1\n"), "scenario.nodes");
  EXPECT_EQ(field_of("[scenario]\nspeed_max = -3\n"), "scenario.speed_max");
  EXPECT_EQ(field_of("[scenario]\nprotocol = olsr\n"), "scenario.protocol");
  EXPECT_EQ(field_of("[traffic]\nrate = abc\n"), "traffic.rate");
  EXPECT_EQ(field_of("[scenario]\nnodez = 5\n"), "scenario.nodez");
  EXPECT_EQ(field_of("[bogus]\nx = 1\n"), "bogus");
  EXPECT_EQ(field_of("[scenario]\nnodes = 3\n[traffic]\nflows = 7\n"), "traffic.flows");
  EXPECT_EQ(field_of("[matrix]\naxis = pause_time\nvalues = 0\nseeds =\n"), "matrix.seeds");
  EXPECT_EQ(field_of("[matrix]\naxis = colour\nvalues = 1\n"), "matrix.axis");
}

TEST(Config, ResolvedConfigRoundTrips) {
  ScenarioConfig c = small_scenario(Protocol::Dymo, 77);
  c.radio.base_delay = SimTime::micros(1500);
  c.literal_formulas = true;
  const ConfigFile back = parse_config_text(to_ini(c));
  EXPECT_EQ(to_ini(back.scenario), to_ini(c));
}

TEST(Matrix, CrossProductOrderedProtocolValueSeed) {
  const ConfigFile f = parse_config_text(
      "[matrix]\naxis = traffic_rate\nvalues = 2, 4, 8, 16, 32\nprotocols = aodv, aodv_ll, dsr, dsr_m, dymo\n");
  ASSERT_TRUE(f.matrix);
  const auto pts = f.matrix->points();
  ASSERT_EQ(pts.size(), 125u);
  EXPECT_EQ(pts[0].protocol, Protocol::Aodv);
  EXPECT_EQ(pts[0].config.traffic.rate_pps, 2.0);
  EXPECT_EQ(pts[4].seed, 5u);
  EXPECT_EQ(pts[5].config.traffic.rate_pps, 4.0);
  EXPECT_EQ(pts[25].protocol, Protocol::AodvLl);
  EXPECT_EQ(pts[124].config.seed, 5u);
}

TEST(Matrix, AxesApplyToTheirField) {
  ExperimentMatrix m;
  m.values = {7};
  m.protocols = {Protocol::Aodv};
  m.seeds = {1};
  for (auto [axis, check] : std::vector<std::pair<MatrixAxis, double ScenarioConfig::*>>{
           {MatrixAxis::PauseTime, &ScenarioConfig::pause_time_s}, {MatrixAxis::Speed, &ScenarioConfig::speed_max}}) {
    m.axis = axis;
    EXPECT_EQ(m.points().front().config.*check, 7.0);
  }
  m.axis = MatrixAxis::Scalability;
  EXPECT_EQ(m.points().front().config.node_count, 7);
  m.seeds.clear();
  EXPECT_THROW(m.validate(), ConfigError);
}

TEST(Placement, ParsesAndValidates) {
  std::istringstream ok("# id x y\n0 10 20\n1, 30.5, 40\n\n2 0 0 # trailing\n");
  const auto pos = parse_placement(ok);
  ASSERT_EQ(pos.size(), 3u);
  EXPECT_EQ(pos[1].x, 30.5);
  std::istringstream gap("0 1 1\n2 1 1\n");
  EXPECT_THROW(parse_placement(gap), ConfigError);
  std::istringstream junk("0 1\n");
  EXPECT_THROW(parse_placement(junk), ConfigError);
}

TEST(Csv, SameSeedSameBytes) {
  for (Protocol p : {Protocol::Aodv, Protocol::AodvLl, Protocol::Dsr, Protocol::DsrM, Protocol::Dymo}) {
    const ScenarioConfig c = small_scenario(p, 3);
    EXPECT_EQ(csv_for(c), csv_for(c)) << to_string(p);
  }
  EXPECT_NE(csv_for(small_scenario(Protocol::Aodv, 3)), csv_for(small_scenario(Protocol::Aodv, 4)));
}

TEST(Csv, RowShapeAndFixedDecimals) {
  const std::string row = csv_for(small_scenario(Protocol::Aodv));
  EXPECT_EQ(fields(row).size(), csv_columns().size());
  EXPECT_EQ(column(row, "status"), "ok");
  const std::string tput = column(row, "throughput_bps");
  ASSERT_NE(tput.find('.'), std::string::npos);
  EXPECT_EQ(tput.size() - tput.find('.') - 1, 6u);
  EXPECT_EQ(fixed6(1.0 / 3.0), "0.333333");
  EXPECT_EQ(micro_str(-1'500'000), "-1.500000");
}

TEST(Csv, MatrixWritesMeansAndManifest) {
  ExperimentMatrix m;
  m.base = small_scenario(Protocol::Aodv);
  m.base.duration_s = 20;
  m.axis = MatrixAxis::TrafficRate;
  m.values = {2, 4};
  m.protocols = {Protocol::Aodv, Protocol::AodvLl};
  m.seeds = {1, 2};
  m.threads = 3;
  const auto rows = run_matrix(m);
  std::ostringstream csv, manifest;
  write_csv(csv, rows, "traffic_rate");
  write_manifest(manifest, rows);
  const auto ls = lines(csv.str());
  ASSERT_EQ(ls.size(), 1u + 8u + 4u);
  EXPECT_EQ(ls[0], csv_header());
  EXPECT_EQ(column(ls[9], "seed"), "mean");
  EXPECT_EQ(column(ls[9], "protocol"), "aodv");
  EXPECT_EQ(column(ls[12], "protocol"), "aodv_ll");
  EXPECT_EQ(column(ls[12], "rate"), "4.000000");

  // Parallel execution does not change any row.
  m.threads = 1;
  std::ostringstream serial;
  write_csv(serial, run_matrix(m), "traffic_rate");
  EXPECT_EQ(serial.str(), csv.str());

  EXPECT_NE(manifest.str().find("; row 8"), std::string::npos);
  EXPECT_NE(manifest.str().find("rate = 4"), std::string::npos);
}

TEST(Csv, FailingCellBecomesErrorRow) {
  MatrixRow r;
  r.point = MatrixPoint{Protocol::Dsr, 1.0, 2, small_scenario(Protocol::Dsr)};
  r.error = "boom, again";
  const std::string row = csv_row(r, "speed_max");
  EXPECT_NE(row.find("error: \"boom, again\""), std::string::npos);
  std::ostringstream out;
  write_csv(out, {r}, "speed_max");
  EXPECT_NE(out.str().find("error: no successful seeds"), std::string::npos);
}

TEST(Scenario, StaticSingleFlowHasNoRerr) {
  ScenarioConfig c;
  c.protocol = Protocol::Aodv;
  c.pause_time_s = 900;
  c.duration_s = 900;
  c.speed_max = 2;
  c.traffic.flows = 1;
  const RunOutcome o = run_scenario(c);
  EXPECT_EQ(o.metrics.control_tx.rerr, 0u);
  EXPECT_TRUE(o.metrics.conserved());
  EXPECT_GT(o.metrics.control_tx.hello, 0u);
}

TEST(Scenario, LinkLayerVariantSendsNoHello) {
  const RunOutcome o = run_scenario(small_scenario(Protocol::AodvLl));
  EXPECT_EQ(o.metrics.control_tx.hello, 0u);
  EXPECT_EQ(column(csv_for(small_scenario(Protocol::AodvLl)), "hello_tx"), "0");
}

TEST(Scenario, PlacementMustMatchNodeCount) {
  ScenarioConfig c = small_scenario(Protocol::Aodv);
  const std::vector<Vec2> three = chain(3);
  EXPECT_THROW(run_scenario(c, &three), ConfigError);
}

TEST(Scenario, CostColumnsAreConsistent) {
  for (Protocol p : {Protocol::Aodv, Protocol::AodvLl, Protocol::Dsr, Protocol::Dymo}) {
    const RunOutcome o = run_scenario(small_scenario(p));
    EXPECT_EQ(o.cost.ce_total(), o.cost.ce_rd + o.cost.ce_rm);
    EXPECT_GT(o.cost.ce_rd, 0) << to_string(p);
    if (p == Protocol::AodvLl || p == Protocol::Dsr) continue;
    EXPECT_GT(o.cost.ce_rm, 0) << to_string(p);
  }
}
