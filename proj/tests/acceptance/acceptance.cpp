// One check per acceptance criterion. Prints a PASS/FAIL line for each
// selected criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tavdc/embedding.hpp"
#include "tavdc/error.hpp"
#include "tavdc/exactopt.hpp"
#include "tavdc/lp_format.hpp"
#include "tavdc/simulation.hpp"
#include "tavdc/thermal.hpp"
#include "tavdc/topology.hpp"
#include "tavdc/workload.hpp"

using namespace tavdc;

namespace {

// Pinned tolerances and thresholds.
constexpr double kPowerTolKw = 1e-12;
constexpr double kRiseRelTol = 1e-9;
constexpr double kPrintedRhoFCp = 0.2934861;  // 7 significant digits
constexpr double kPrintedRelTol = 1e-6;
constexpr double kObjectiveTol = 1e-9;
constexpr std::size_t kTinyInstances = 100;
constexpr std::size_t kUniqueInstances = 12;
constexpr double kCaseAPeakReduction = 0.08;
constexpr double kCaseBPeakReduction = 0.15;
constexpr double kTrendSlack = 0.005;  // allowed rise of the reduction between adjacent counts
constexpr double kSpreadTaMax = 1.5;
constexpr double kSpreadLbMin = 3.0;
constexpr double kPowerReductionA = 0.30;
constexpr double kPowerReductionB = 0.50;
constexpr double kGapExcessC = 2.0;

const ThermalModel kModel{};
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << std::fixed << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << v;
  return os.str();
}

std::string pct(double v) { return fmt(100.0 * v, 1) + "%"; }

// ---------------------------------------------------------------------------
// 1

Outcome criterion_1() {
  ServerState s;
  s.capacity = {100, 1000, 10000};
  s.residual = {50, 1000, 10000};
  s.active = true;
  const double ps = server_power(s, kModel.power);

  SwitchState sw;
  sw.active = true;
  sw.used_electronic_ports = 3;
  sw.used_optical_ports = 2;
  const double pw = switch_power(sw, kModel.power);

  const double rise = outlet_temperature(0.0, 1.0, kModel.thermo);
  const double exact = 1.0 / (1.19 * 0.2454 * 1.005);
  const double rel = std::abs(rise - exact) / exact;
  const double rel_printed = std::abs(rise - 1.0 / kPrintedRhoFCp) * kPrintedRhoFCp;

  Outcome o;
  o.pass = std::abs(ps - 0.35) <= kPowerTolKw && std::abs(pw - 0.23) <= kPowerTolKw && rel <= kRiseRelTol &&
           rel_printed <= kPrintedRelTol;
  o.detail = "server=" + fmt(ps, 12) + "kW switch=" + fmt(pw, 12) + "kW rise/kW=" + fmt(rise, 9) +
             "C rel_err=" + sci(rel) + " rel_err_vs_printed=" + sci(rel_printed);
  return o;
}

// ---------------------------------------------------------------------------
// 2

struct OracleCase {
  MilpInstance instance;
  bool forced_unique = false;
};

TopologyConfig tiny(int servers_per_rack) {
  TopologyConfig cfg;
  cfg.name = "tiny";
  cfg.racks = 2;
  cfg.n_tor = 2;
  cfg.servers_per_rack = servers_per_rack;
  cfg.n_agg = 2;
  cfg.n_core = 2;
  return cfg;
}

OracleCase random_tiny(std::uint64_t seed) {
  Rng rng(seed);
  OracleCase c;
  const int spr = std::uniform_int_distribution<int>(2, 3)(rng);
  c.instance.topology = build_vl2(tiny(spr), rng);
  WorkloadParams w;
  w.m_min = 2;
  w.m_max = 3;
  c.instance.vdcs = generate_static_batch(std::uniform_int_distribution<std::size_t>(1, 2)(rng), w, rng);
  return c;
}

// VM i fits only on server slot[i]: memory rises and disk falls with i on
// both sides, so the capacity check pins each VM to one server.
OracleCase unique_tiny(std::uint64_t seed) {
  Rng rng(seed);
  OracleCase c;
  c.forced_unique = true;
  c.instance.topology = build_vl2(tiny(2), rng);
  const int m = std::uniform_int_distribution<int>(2, 3)(rng);
  std::vector<NodeId> slot{0, 1, 2, 3};
  std::shuffle(slot.begin(), slot.end(), rng);
  for (NodeId n = 0; n < 4; ++n) c.instance.topology.set_server_capacity(n, {100, 0, 0});
  VdcRequest v;
  v.id = 0;
  for (int i = 0; i < m; ++i) {
    const std::int64_t mem = 100 * (i + 1), disk = 100 * (m - i);
    c.instance.topology.set_server_capacity(slot[static_cast<std::size_t>(i)], {100, mem, disk});
    v.vms.push_back({i, {std::uniform_int_distribution<std::int64_t>(5, 30)(rng), mem, disk}});
  }
  for (int i = 1; i < m; ++i) {
    const VmId peer = std::uniform_int_distribution<VmId>(0, i - 1)(rng);
    v.vlinks.push_back({i, peer, std::uniform_int_distribution<Mbps>(10, 70)(rng)});
  }
  c.instance.vdcs = {v};
  return c;
}

Outcome criterion_2() {
  std::vector<OracleCase> cases;
  for (std::uint64_t s = 1; s <= kTinyInstances; ++s) cases.push_back(random_tiny(s));
  for (std::uint64_t s = 1; s <= kUniqueInstances; ++s) cases.push_back(unique_tiny(1000 + s));

  std::size_t embedded = 0, invalid = 0, below_optimum = 0, unique = 0, unique_nonzero = 0, forced_not_unique = 0;
  double gap_sum = 0.0, gap_max = 0.0;
  for (const auto& c : cases) {
    const auto exact = brute_force_optimal(c.instance);
    if (c.forced_unique && exact.feasible_placements != 1) ++forced_not_unique;
    if (!exact.feasible) continue;

    auto state = c.instance.topology;
    const auto report = run_static(state, c.instance.vdcs, Algorithm::temperature_aware, kModel);
    if (report.failed != 0) continue;
    ++embedded;
    Candidate cand;
    for (const auto& [id, e] : state.embeddings()) cand.embeddings.push_back(e);
    cand.max_outlet_c = report.max_outlet_c;
    cand.objective = report.max_outlet_c + c.instance.alpha * report.total_it_power_kw;
    const auto v = validate_solution(c.instance, cand);
    if (!v.ok()) {
      ++invalid;
      std::cerr << "  invalid embedding: " << v.summary();
    }
    const double obj = v.recomputed.objective;
    if (obj < exact.objective - kObjectiveTol) ++below_optimum;
    const double gap = (obj - exact.objective) / exact.objective;
    gap_sum += gap;
    gap_max = std::max(gap_max, gap);
    if (exact.feasible_placements == 1) {
      ++unique;
      if (obj != exact.objective) ++unique_nonzero;
    }
  }
  Outcome o;
  o.pass = cases.size() >= kTinyInstances && embedded >= kTinyInstances && invalid == 0 && below_optimum == 0 &&
           unique >= kUniqueInstances && unique_nonzero == 0 && forced_not_unique == 0;
  o.detail = std::to_string(cases.size()) + " instances, " + std::to_string(embedded) +
             " embedded by temperature-aware, invalid=" + std::to_string(invalid) +
             " below_optimum=" + std::to_string(below_optimum) + " mean_gap=" + pct(gap_sum / std::max<std::size_t>(embedded, 1)) +
             " max_gap=" + pct(gap_max) + " single-placement=" + std::to_string(unique) +
             " (nonzero gap " + std::to_string(unique_nonzero) + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 3-6: static sweeps

struct Means {
  double max_outlet = 0.0;
  double power = 0.0;
  double spread = 0.0;
  double failed = 0.0;
};

struct SweepPoint {
  std::size_t vdcs = 0;
  Means ta, lb;
  double temp_reduction() const { return (lb.max_outlet - ta.max_outlet) / lb.max_outlet; }
  double power_reduction() const { return (lb.power - ta.power) / lb.power; }
};

std::vector<SweepPoint> static_sweep(const TopologyConfig& topo, const WorkloadParams& wl,
                                     const std::vector<std::size_t>& counts, std::uint64_t seeds) {
  std::vector<SweepPoint> out;
  for (auto n : counts) {
    SweepPoint p;
    p.vdcs = n;
    for (auto [algo, means] : {std::pair{Algorithm::temperature_aware, &p.ta}, std::pair{Algorithm::load_balanced, &p.lb}}) {
      for (std::uint64_t s = 1; s <= seeds; ++s) {
        const auto r = replicate_static(topo, wl, n, algo, kModel, s);
        means->max_outlet += r.max_outlet_c / static_cast<double>(seeds);
        means->power += r.total_it_power_kw / static_cast<double>(seeds);
        means->spread += r.active_spread_c / static_cast<double>(seeds);
        means->failed += static_cast<double>(r.failed) / static_cast<double>(seeds);
      }
    }
    out.push_back(p);
  }
  return out;
}

std::vector<SweepPoint> case_a_sweep() {
  return static_sweep(TopologyConfig::case_a(), WorkloadParams::case_a(), {5, 10, 15, 20, 25, 30}, 30);
}

std::vector<SweepPoint> case_b_sweep() {
  return static_sweep(TopologyConfig::case_b(), WorkloadParams::case_b(), {50, 100, 150, 200, 250, 300}, 10);
}

std::string table(const std::vector<SweepPoint>& sweep) {
  std::string s;
  for (const auto& p : sweep) {
    s += "\n    vdcs=" + std::to_string(p.vdcs) + " T_ta=" + fmt(p.ta.max_outlet, 3) + " T_lb=" + fmt(p.lb.max_outlet, 3) +
         " dT=" + pct(p.temp_reduction()) + " P_ta=" + fmt(p.ta.power, 2) + " P_lb=" + fmt(p.lb.power, 2) +
         " dP=" + pct(p.power_reduction()) + " failed_ta=" + fmt(p.ta.failed, 2) + " failed_lb=" + fmt(p.lb.failed, 2);
  }
  return s;
}

Outcome temperature_trend(const std::vector<SweepPoint>& sweep, double peak_min, bool check_trend) {
  bool lower_everywhere = true, shrinking = true;
  std::size_t peak = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    lower_everywhere = lower_everywhere && sweep[i].ta.max_outlet < sweep[i].lb.max_outlet;
    if (sweep[i].temp_reduction() > sweep[peak].temp_reduction()) peak = i;
    if (i > 0) shrinking = shrinking && sweep[i].temp_reduction() <= sweep[i - 1].temp_reduction() + kTrendSlack;
  }
  const double peak_red = sweep[peak].temp_reduction();
  Outcome o;
  o.pass = peak_red >= peak_min && (!check_trend || (lower_everywhere && peak == 0 && shrinking));
  o.detail = "peak reduction " + pct(peak_red) + " at " + std::to_string(sweep[peak].vdcs) + " VDCs";
  if (check_trend) {
    o.detail += std::string(", lower at every count: ") + (lower_everywhere ? "yes" : "no") +
                ", shrinking with load: " + (shrinking ? "yes" : "no");
  }
  o.detail += table(sweep);
  return o;
}

Outcome criterion_3() { return temperature_trend(case_a_sweep(), kCaseAPeakReduction, true); }

Outcome criterion_4() { return temperature_trend(case_b_sweep(), kCaseBPeakReduction, false); }

Outcome criterion_5() {
  const auto sweep = static_sweep(TopologyConfig::case_b(), WorkloadParams::case_b(), {200}, 10);
  const auto& p = sweep.front();
  Outcome o;
  o.pass = p.ta.spread <= kSpreadTaMax && p.lb.spread >= kSpreadLbMin;
  o.detail = "mean active-rack spread temperature-aware=" + fmt(p.ta.spread, 3) + "C load-balanced=" +
             fmt(p.lb.spread, 3) + "C";
  return o;
}

// Mid-range loads are the two central VDC counts of each sweep.
Outcome criterion_6() {
  const auto a = case_a_sweep();
  const auto b = case_b_sweep();
  auto mid = [](const std::vector<SweepPoint>& s) {
    return (s[s.size() / 2 - 1].power_reduction() + s[s.size() / 2].power_reduction()) / 2.0;
  };
  auto best = [](const std::vector<SweepPoint>& s) {
    double m = -kInf;
    for (const auto& p : s) m = std::max(m, p.power_reduction());
    return m;
  };
  const double ma = mid(a), mb = mid(b);
  Outcome o;
  o.pass = ma >= kPowerReductionA && mb >= kPowerReductionB;
  o.detail = "mid-range power reduction case A=" + pct(ma) + " (need " + pct(kPowerReductionA) + "), case B=" + pct(mb) +
             " (need " + pct(kPowerReductionB) + "); lowest-load reduction A=" + pct(best(a)) + " B=" + pct(best(b)) +
             table(a) + table(b);
  return o;
}

// ---------------------------------------------------------------------------
// 7-8: dynamic

DynamicReport dynamic_run(double lambda, double threshold, Algorithm algo, std::uint64_t seed, std::size_t requests,
                          bool sample) {
  DynamicScenario sc;
  sc.lambda_per_hour = lambda;
  sc.mean_holding_h = 3.0;
  sc.requests = requests;
  sc.options.threshold_c = threshold;
  sc.options.warmup = 1000;
  sc.options.record_series = false;
  sc.options.sample_thermal = sample;
  return replicate_dynamic(TopologyConfig::case_b(), WorkloadParams::case_b(), sc, algo, kModel, seed);
}

Outcome criterion_7() {
  using clock = std::chrono::steady_clock;
  const std::size_t requests = 100000;
  bool dominance = true;
  std::string detail = "lambda sweep (threshold 35C, seed 1):";
  auto t0 = clock::now();
  for (double lambda : {40.0, 60.0, 80.0, 100.0}) {
    const auto ta = dynamic_run(lambda, 35.0, Algorithm::temperature_aware, 1, requests, false);
    const auto lb = dynamic_run(lambda, 35.0, Algorithm::load_balanced, 1, requests, false);
    dominance = dominance && ta.rejection_ratio() <= lb.rejection_ratio();
    detail += "\n    lambda=" + fmt(lambda, 0) + " ratio_ta=" + fmt(ta.rejection_ratio(), 5) +
              " ratio_lb=" + fmt(lb.rejection_ratio(), 5);
  }
  const double lambda_s = std::chrono::duration<double>(clock::now() - t0).count();

  t0 = clock::now();
  const std::uint64_t seeds = 5;
  bool monotone = true;
  detail += "\n  threshold sweep (lambda 80, " + std::to_string(seeds) + " seeds, mean):";
  for (auto algo : {Algorithm::temperature_aware, Algorithm::load_balanced}) {
    double prev = kInf;
    detail += std::string("\n    ") + to_string(algo) + ":";
    for (double th : {33.0, 34.0, 35.0, 36.0}) {
      double mean = 0.0;
      for (std::uint64_t s = 1; s <= seeds; ++s) {
        mean += dynamic_run(80.0, th, algo, s, requests, false).rejection_ratio() / static_cast<double>(seeds);
      }
      monotone = monotone && mean <= prev;
      prev = mean;
      detail += " " + fmt(th, 0) + "C=" + fmt(mean, 5);
    }
  }
  const double threshold_s = std::chrono::duration<double>(clock::now() - t0).count();
  Outcome o;
  o.pass = dominance && monotone;
  o.detail = std::string("temperature-aware <= load-balanced at every lambda: ") + (dominance ? "yes" : "no") +
             ", non-increasing in threshold: " + (monotone ? "yes" : "no") + " (lambda sweep " + fmt(lambda_s, 0) +
             "s, threshold sweep " + fmt(threshold_s, 0) + "s)\n  " + detail;
  return o;
}

Outcome criterion_8() {
  const std::uint64_t seeds = 3;
  const std::size_t requests = 20000;
  double ta = 0.0, lb = 0.0;
  for (std::uint64_t s = 1; s <= seeds; ++s) {
    ta += dynamic_run(80.0, kInf, Algorithm::temperature_aware, s, requests, true).mean_active_gap_c / seeds;
    lb += dynamic_run(80.0, kInf, Algorithm::load_balanced, s, requests, true).mean_active_gap_c / seeds;
  }
  Outcome o;
  o.pass = lb - ta >= kGapExcessC;
  o.detail = "time-averaged active-rack gap temperature-aware=" + fmt(ta, 3) + "C load-balanced=" + fmt(lb, 3) +
             "C excess=" + fmt(lb - ta, 3) + "C";
  return o;
}

// ---------------------------------------------------------------------------
// 9

bool union_find_connected(const VdcRequest& v) {
  std::vector<std::size_t> parent(v.vms.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::size_t components = v.vms.size();
  for (const auto& l : v.vlinks) {
    const auto a = find(static_cast<std::size_t>(v.vm_index(l.s)));
    const auto b = find(static_cast<std::size_t>(v.vm_index(l.d)));
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components <= 1;
}

Outcome criterion_9() {
  std::vector<std::string> failures;

  // Conservation: random embed/release cycles on both cases.
  std::size_t cycles = 0;
  for (const auto& [topo, wl] : {std::pair{TopologyConfig::case_a(), WorkloadParams::case_a()},
                                 std::pair{TopologyConfig::case_b(), WorkloadParams::case_b()}}) {
    Rng rng(77);
    auto state = build_vl2(topo, rng);
    const auto pristine = state;
    std::vector<VdcId> live;
    VdcId next = 0;
    std::size_t embedded_here = 0;
    for (int step = 0; embedded_here < 10000; ++step) {
      // Release more often once the data center is busy.
      const int odds = live.size() > 40 ? 1 : 2;
      if (!live.empty() && std::uniform_int_distribution<int>(0, odds)(rng) == 0) {
        const auto k = std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng);
        release_vdc(state, live[k]);
        live[k] = live.back();
        live.pop_back();
        continue;
      }
      const auto v = generate_vdc(wl, rng, next++);
      if (embed(state, v, step % 2 ? Algorithm::temperature_aware : Algorithm::load_balanced, kModel)) {
        live.push_back(v.id);
        ++cycles;
        ++embedded_here;
      }
    }
    for (auto id : live) release_vdc(state, id);
    if (!(state == pristine)) failures.push_back("conservation broken on " + topo.name);
  }

  // Rollback at every reservation index.
  std::size_t injections = 0;
  {
    Rng rng(78);
    auto state = build_vl2(TopologyConfig::case_a(), rng);
    for (const auto& v : generate_static_batch(6, WorkloadParams::case_a(), rng)) embed(state, v, Algorithm::load_balanced, kModel);
    for (int trial = 0; trial < 50; ++trial) {
      const auto v = generate_vdc(WorkloadParams::case_a(), rng, 1000 + trial);
      for (auto algo : {Algorithm::temperature_aware, Algorithm::load_balanced}) {
        for (long k = 0;; ++k) {
          const auto before = state;
          const auto r = embed(state, v, algo, kModel, EmbedOptions{k});
          if (r) {
            release_vdc(state, v.id);
            break;
          }
          if (r.failure != EmbedFailure::injected) break;
          ++injections;
          if (!(state == before)) {
            failures.push_back("rollback left residue at reservation " + std::to_string(k));
            break;
          }
        }
      }
    }
  }

  // Every embedding produced by a static run passes the validator.
  std::size_t validated = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (auto algo : {Algorithm::temperature_aware, Algorithm::load_balanced}) {
      Rng rng(seed);
      MilpInstance inst;
      inst.topology = build_vl2(TopologyConfig::case_a(), rng);
      const auto batch = generate_static_batch(20, WorkloadParams::case_a(), rng);
      auto state = inst.topology;
      run_static(state, batch, algo, kModel);
      Candidate cand;
      for (const auto& [id, e] : state.embeddings()) {
        cand.embeddings.push_back(e);
        inst.vdcs.push_back(batch[static_cast<std::size_t>(id)]);
      }
      const auto report = validate_solution(inst, cand);
      validated += cand.embeddings.size();
      for (const char* f : {"3", "4", "5", "6", "7", "8", "9"}) {
        if (!report.family(f).pass()) failures.push_back(std::string("family ") + f + " violated: " + report.family(f).first_violation);
      }
    }
  }
  // And the emitted model accepts tiny heuristic layouts row by row.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto c = random_tiny(500 + seed).instance;
    auto state = c.topology;
    std::vector<Embedding> es;
    for (const auto& v : c.vdcs) {
      if (auto r = embed(state, v, Algorithm::temperature_aware, kModel)) es.push_back(*r.embedding);
    }
    if (es.size() != c.vdcs.size()) continue;
    const auto report = validate_assignment(c, to_assignment(c, es));
    if (!report.ok()) failures.push_back("LP rows reject a heuristic layout: " + report.summary());
  }

  // Connectivity of generated virtual topologies.
  std::size_t disconnected = 0;
  {
    Rng rng(79);
    for (int i = 0; i < 10000; ++i) {
      disconnected += !union_find_connected(generate_vdc(i % 2 ? WorkloadParams::case_b() : WorkloadParams::case_a(), rng, i));
    }
    if (disconnected) failures.push_back(std::to_string(disconnected) + " disconnected VDCs");
  }

  // Flow-variable count against the closed form.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = random_tiny(900 + seed).instance;
    std::size_t pairs = 0;
    for (const auto& v : inst.vdcs) pairs += v.vms.size() * (v.vms.size() - 1);
    const std::size_t closed_form = pairs * 2 * inst.topology.links().size();
    const auto model = lp::parse(emit_milp(inst));
    if (model.count_variables_with_prefix("mu_") != closed_form || expected_mu_count(inst) != closed_form) {
      failures.push_back("mu count mismatch on instance " + std::to_string(seed));
    }
  }

  Outcome o;
  o.pass = failures.empty();
  o.detail = std::to_string(cycles) + " embed/release cycles, " + std::to_string(injections) + " injected faults, " +
             std::to_string(validated) + " embeddings validated, 10000 VDC graphs, 10 LP instances";
  for (const auto& f : failures) o.detail += "\n    " + f;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criterion number (repeatable); all when omitted")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::map<int, std::function<Outcome()>> checks = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5},
      {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {9, criterion_9}};

  bool all = true;
  for (int n : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = checks.at(n)();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " [" << fmt(secs, 1) << "s] " << o.detail
              << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
