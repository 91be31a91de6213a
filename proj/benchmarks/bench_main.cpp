#include <benchmark/benchmark.h>

#include <random>

#include "tavdc/embedding.hpp"
#include "tavdc/exactopt.hpp"
#include "tavdc/routing.hpp"
#include "tavdc/simulation.hpp"
#include "tavdc/thermal.hpp"
#include "tavdc/topology.hpp"
#include "tavdc/workload.hpp"

using namespace tavdc;

namespace {

// Case B after a mixed batch, so most links carry traffic.
DataCenterState busy_case_b() {
  Rng rng(1);
  auto state = build_vl2(TopologyConfig::case_b(), rng);
  const auto batch = generate_static_batch(150, WorkloadParams::case_b(), rng);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    embed(state, batch[i], i % 2 ? Algorithm::temperature_aware : Algorithm::load_balanced, ThermalModel{});
  }
  return state;
}

std::vector<std::pair<NodeId, NodeId>> server_pairs(const DataCenterState& s, std::size_t n) {
  Rng rng(2);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(s.server_count()) - 1);
  std::vector<std::pair<NodeId, NodeId>> out;
  while (out.size() < n) {
    const NodeId a = pick(rng), b = pick(rng);
    if (a != b) out.emplace_back(a, b);
  }
  return out;
}

void BM_FindPath(benchmark::State& st) {
  const auto s = busy_case_b();
  const auto pairs = server_pairs(s, 1024);
  std::size_t i = 0;
  for (auto _ : st) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(find_path(s, a, b, 40));
  }
}
BENCHMARK(BM_FindPath);

void BM_FindWidestPath(benchmark::State& st) {
  const auto s = busy_case_b();
  const auto pairs = server_pairs(s, 1024);
  std::size_t i = 0;
  for (auto _ : st) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(find_widest_path(s, a, b, 40));
  }
}
BENCHMARK(BM_FindWidestPath);

void BM_EmbedRelease(benchmark::State& st) {
  const auto algo = static_cast<Algorithm>(st.range(0));
  auto s = busy_case_b();
  Rng rng(3);
  std::vector<VdcRequest> pool;
  for (int i = 0; i < 256; ++i) pool.push_back(generate_vdc(WorkloadParams::case_b(), rng, 100000 + i));
  std::size_t i = 0;
  for (auto _ : st) {
    const auto& v = pool[i++ % pool.size()];
    if (embed(s, v, algo, ThermalModel{})) release_vdc(s, v.id);
  }
  st.SetLabel(to_string(algo));
}
BENCHMARK(BM_EmbedRelease)->Arg(0)->Arg(1);

void BM_ThermalReport(benchmark::State& st) {
  const auto s = busy_case_b();
  for (auto _ : st) benchmark::DoNotOptimize(thermal_report(s, ThermalModel{}));
}
BENCHMARK(BM_ThermalReport);

void BM_StaticCaseB(benchmark::State& st) {
  const auto algo = static_cast<Algorithm>(st.range(0));
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        replicate_static(TopologyConfig::case_b(), WorkloadParams::case_b(), 200, algo, ThermalModel{}, 1));
  }
  st.SetLabel(to_string(algo));
}
BENCHMARK(BM_StaticCaseB)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BruteForceTiny(benchmark::State& st) {
  TopologyConfig cfg;
  cfg.racks = cfg.n_tor = 2;
  cfg.servers_per_rack = 3;
  Rng rng(4);
  MilpInstance inst;
  inst.topology = build_vl2(cfg, rng);
  WorkloadParams w;
  w.m_min = w.m_max = 3;
  inst.vdcs = generate_static_batch(2, w, rng);
  for (auto _ : st) benchmark::DoNotOptimize(brute_force_optimal(inst));
}
BENCHMARK(BM_BruteForceTiny)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
