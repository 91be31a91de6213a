#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "tavdc/config.hpp"
#include "tavdc/embedding.hpp"
#include "tavdc/error.hpp"
#include "tavdc/io.hpp"

namespace tavdc {
namespace {

const std::string kConfigDir = TAVDC_CONFIG_DIR;

TEST(Config, KeyValueSyntax) {
  const auto kv = KeyValues::parse("# top\ncase = caseA  # trailing\n[workload]\nvdcs = 5, 10\n\n");
  EXPECT_EQ(kv.values().at("case"), "caseA");
  EXPECT_EQ(kv.values().at("vdcs"), "5, 10");
  EXPECT_THROW(KeyValues::parse("case = a\ncase = b\n"), ConfigError);
  EXPECT_THROW(KeyValues::parse("just words\n"), ConfigError);
  EXPECT_THROW(KeyValues::parse("[open\n"), ConfigError);
  EXPECT_THROW(KeyValues::parse(" = 3\n"), ConfigError);
  EXPECT_THROW(KeyValues::load("/nonexistent/x.cfg"), ConfigError);
}

TEST(Config, CaseIsRequiredAndKeysAreChecked) {
  EXPECT_THROW(make_config(KeyValues::parse("racks = 3\n")), ConfigError);
  EXPECT_THROW(make_config(KeyValues::parse("case = caseA\nrackz = 3\n")), ConfigError);
  EXPECT_THROW(make_config(KeyValues::parse("case = caseC\n")), ConfigError);
  EXPECT_THROW(make_config(KeyValues::parse("case = custom\nracks = 3\n")), ConfigError);
  EXPECT_THROW(make_config(KeyValues::parse("case = caseA\nalpha = x\n")), ConfigError);
  EXPECT_THROW(make_config(KeyValues::parse("case = caseA\nseeds = \n")), ConfigError);
  EXPECT_THROW(make_config(KeyValues::parse("case = caseA\nalgorithm = best\n")), ConfigError);
}

TEST(Config, ListsAndInfinity) {
  const auto cfg = make_config(KeyValues::parse("case = caseB\nlambda = 40, 60\nthreshold_c = 35, inf\nseeds = 1,2,3\n"));
  EXPECT_EQ(cfg.lambdas, (std::vector<double>{40, 60}));
  ASSERT_EQ(cfg.thresholds.size(), 2u);
  EXPECT_TRUE(std::isinf(cfg.thresholds[1]));
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(cfg.topology.racks, 40);
  EXPECT_EQ(cfg.workload.m_max, 12);
}

TEST(Config, ShippedConfigsCarryTheReferenceValues) {
  const auto a = make_config(KeyValues::load(kConfigDir + "/caseA.cfg"));
  EXPECT_EQ(a.topology.racks, 4);
  EXPECT_EQ(a.topology.servers_per_rack, 5);
  EXPECT_EQ(a.topology.n_agg, 2);
  EXPECT_EQ(a.topology.n_core, 2);
  EXPECT_EQ(a.workload, WorkloadParams::case_a());
  EXPECT_EQ(a.thermal, ThermalModel{});
  EXPECT_EQ(a.alpha, 0.1);
  const auto b = make_config(KeyValues::load(kConfigDir + "/caseB.cfg"));
  EXPECT_EQ(b.topology.racks, 40);
  EXPECT_EQ(b.topology.servers_per_rack, 10);
  EXPECT_EQ(b.topology.n_agg, 20);
  EXPECT_EQ(b.topology.n_core, 10);
  EXPECT_EQ(b.workload, WorkloadParams::case_b());
  EXPECT_EQ(b.lambdas, std::vector<double>{80});
  EXPECT_EQ(b.thresholds, std::vector<double>{35});
  EXPECT_EQ(b.mean_holding_h, 3.0);
  const auto t = make_config(KeyValues::load(kConfigDir + "/tiny.cfg"));
  EXPECT_EQ(t.topology.racks * t.topology.servers_per_rack, 6);
  t.validate();
}

TEST(Io, VdcRoundTrip) {
  Rng rng(4);
  const auto batch = generate_static_batch(20, WorkloadParams::case_b(), rng);
  std::stringstream ss;
  write_vdcs_jsonl(ss, batch);
  EXPECT_EQ(read_vdcs_jsonl(ss), batch);
}

TEST(Io, TraceRoundTripIsExact) {
  Rng rng(4);
  const auto trace = generate_dynamic_trace(50, 80.0, 3.0, WorkloadParams::case_a(), rng);
  std::stringstream ss;
  write_trace_jsonl(ss, trace);
  const auto back = read_trace_jsonl(ss);
  EXPECT_EQ(back, trace);
  back.validate();
}

TEST(Io, EmbeddingRoundTrip) {
  auto s = build_vl2(TopologyConfig::case_a());
  Rng rng(6);
  std::vector<Embedding> es;
  for (const auto& v : generate_static_batch(6, WorkloadParams::case_a(), rng)) {
    if (auto r = embed(s, v, Algorithm::temperature_aware, ThermalModel{})) es.push_back(*r.embedding);
  }
  std::stringstream ss;
  write_embeddings_jsonl(ss, es);
  EXPECT_EQ(read_embeddings_jsonl(ss), es);
}

TEST(Io, MalformedLinesNameTheLine) {
  std::stringstream ss("{\"id\":0,\"vms\":[],\"vlinks\":[]}\nnot json\n");
  try {
    read_vdcs_jsonl(ss);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  std::stringstream missing("{\"vdc_id\":0}\n");
  EXPECT_THROW(read_embeddings_jsonl(missing), InputError);
}

TEST(Io, CsvHeadersAndRows) {
  const auto s = build_vl2(TopologyConfig::case_a());
  std::stringstream nodes, links;
  write_nodes_csv(nodes, s);
  write_links_csv(links, s);
  std::string line;
  std::getline(nodes, line);
  EXPECT_EQ(line, "node_id,kind,rack_id,cpu,mem,disk,inlet_c");
  int rows = 0;
  while (std::getline(nodes, line)) ++rows;
  EXPECT_EQ(rows, 28);
  std::getline(links, line);
  EXPECT_EQ(line, "link_id,a,b,capacity_mbps,medium");
  rows = 0;
  while (std::getline(links, line)) ++rows;
  EXPECT_EQ(rows, 32);
}

TEST(Io, DoublesRoundTripThroughText) {
  for (double v : {0.1, 1.0 / 3.0, 29.348613, 1e-300}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(80.0), "80");
}

}  // namespace
}  // namespace tavdc
