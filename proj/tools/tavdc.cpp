#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tavdc/config.hpp"
#include "tavdc/embedding.hpp"
#include "tavdc/error.hpp"
#include "tavdc/exactopt.hpp"
#include "tavdc/io.hpp"
#include "tavdc/lp_format.hpp"
#include "tavdc/simulation.hpp"
#include "tavdc/topology.hpp"
#include "tavdc/workload.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tavdc;

namespace {

// Keys that may be repeated on the command line; repeats are joined into a
// comma-separated list and swept as a cross product.
const std::map<std::string, std::string> kListKeys = {
    {"seeds", "seed"}, {"vdcs", ""}, {"lambda", ""}, {"threshold_c", "threshold"}};

struct Invocation {
  std::string config_path;
  std::map<std::string, std::vector<std::string>> overrides;
};

void add_config_options(CLI::App* sub, Invocation& inv) {
  sub->add_option("--config", inv.config_path, "Key/value configuration file")->check(CLI::ExistingFile);
  for (const auto& key : config_keys()) {
    std::string names = "--" + key;
    if (auto it = kListKeys.find(key); it != kListKeys.end() && !it->second.empty()) names += ",--" + it->second;
    if (key == "output_dir") names += ",--out";
    sub->add_option(names, inv.overrides[key], "Overrides config key '" + key + "'")->allow_extra_args(false);
  }
}

RunConfig resolve(const Invocation& inv) {
  KeyValues kv = inv.config_path.empty() ? KeyValues{} : KeyValues::load(inv.config_path);
  for (const auto& [key, values] : inv.overrides) {
    if (values.empty()) continue;
    if (values.size() > 1 && !kListKeys.count(key)) throw ConfigError("key '" + key + "' given more than once");
    std::string joined;
    for (const auto& v : values) joined += (joined.empty() ? "" : ",") + v;
    kv.set(key, joined);
  }
  RunConfig cfg = make_config(kv);
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open '" + path.string() + "' for writing");
  body(os);
  if (!os) throw InputError("failed writing '" + path.string() + "'");
  std::cout << "wrote " << path.string() << '\n';
}

void write_json(const fs::path& path, const json& j) {
  write_file(path, [&j](std::ostream& os) { os << j.dump(2) << '\n'; });
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// `n_vdcs` VDCs drawn after the inlet temperatures, exactly as a
// replication with the same seed draws them.
MilpInstance make_instance(const RunConfig& cfg, std::size_t n_vdcs, std::uint64_t seed) {
  Rng rng(seed);
  MilpInstance inst;
  inst.topology = build_vl2(cfg.topology, rng);
  inst.vdcs = generate_static_batch(n_vdcs, cfg.workload, rng);
  inst.alpha = cfg.alpha;
  inst.big_m = cfg.big_m;
  inst.model = cfg.thermal;
  return inst;
}

std::string cell(std::size_t n, std::uint64_t seed) { return "n" + std::to_string(n) + "_s" + std::to_string(seed); }

std::vector<Embedding> committed(const DataCenterState& state) {
  std::vector<Embedding> out;
  for (const auto& [id, e] : state.embeddings()) out.push_back(e);
  return out;
}

int gen_topology(const RunConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  for (auto seed : cfg.seeds) {
    Rng rng(seed);
    const auto state = build_vl2(cfg.topology, rng);
    const std::string stem = "topology_" + cfg.topology.name + "_s" + std::to_string(seed);
    write_file(dir / (stem + "_nodes.csv"), [&](std::ostream& os) { write_nodes_csv(os, state); });
    write_file(dir / (stem + "_links.csv"), [&](std::ostream& os) { write_links_csv(os, state); });
    write_json(dir / (stem + "_summary.json"), topology_summary(state));
  }
  return 0;
}

int gen_workload(const RunConfig& cfg, const std::string& kind) {
  const fs::path dir = cfg.output_dir;
  for (auto seed : cfg.seeds) {
    if (kind == "static") {
      for (auto n : cfg.vdc_counts) {
        const auto inst = make_instance(cfg, n, seed);
        write_file(dir / ("workload_" + cfg.topology.name + "_" + cell(n, seed) + ".jsonl"),
                   [&](std::ostream& os) { write_vdcs_jsonl(os, inst.vdcs); });
      }
    } else {
      for (double lambda : cfg.lambdas) {
        Rng rng(seed);
        (void)build_vl2(cfg.topology, rng);
        const auto trace = generate_dynamic_trace(cfg.requests, lambda, cfg.mean_holding_h, cfg.workload, rng);
        write_file(dir / ("trace_" + cfg.topology.name + "_l" + format_double(lambda) + "_s" + std::to_string(seed) +
                          ".jsonl"),
                   [&](std::ostream& os) { write_trace_jsonl(os, trace); });
      }
    }
  }
  return 0;
}

int run_static_cmd(const RunConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  const std::string prefix = "static_" + cfg.topology.name + "_" + to_string(cfg.algorithm);
  json rows = json::array();
  std::ostringstream table;
  table << "vdcs,seed,embedded,failed,max_outlet_c,min_active_outlet_c,max_active_outlet_c,active_spread_c,"
           "total_it_power_kw\n";
  for (auto n : cfg.vdc_counts) {
    for (auto seed : cfg.seeds) {
      Rng rng(seed);
      auto state = build_vl2(cfg.topology, rng);
      const auto vdcs = generate_static_batch(n, cfg.workload, rng);
      const auto report = run_static(state, vdcs, cfg.algorithm, cfg.thermal);
      const std::string stem = prefix + "_" + cell(n, seed);
      write_file(dir / (stem + "_racks.csv"), [&](std::ostream& os) { write_racks_csv(os, report.thermal); });
      write_file(dir / (stem + "_histogram.csv"), [&](std::ostream& os) { write_histogram_csv(os, report.histogram); });
      write_file(dir / (stem + "_embeddings.jsonl"),
                 [&](std::ostream& os) { write_embeddings_jsonl(os, committed(state)); });
      json summary = summary_json(report);
      summary["case"] = cfg.topology.name;
      summary["vdcs"] = n;
      summary["seed"] = seed;
      write_json(dir / (stem + "_summary.json"), summary);
      table << n << ',' << seed << ',' << report.embedded << ',' << report.failed << ','
            << format_double(report.max_outlet_c) << ',' << format_double(report.thermal.min_active_outlet_c()) << ','
            << format_double(report.thermal.max_active_outlet_c()) << ',' << format_double(report.active_spread_c)
            << ',' << format_double(report.total_it_power_kw) << '\n';
      rows.push_back({{"vdcs", n},
                      {"seed", seed},
                      {"embedded", report.embedded},
                      {"failed", report.failed},
                      {"max_outlet_c", report.max_outlet_c},
                      {"active_spread_c", report.active_spread_c},
                      {"total_it_power_kw", report.total_it_power_kw}});
    }
  }
  write_file(dir / (prefix + "_sweep.csv"), [&](std::ostream& os) { os << table.str(); });
  write_json(dir / (prefix + "_sweep.json"), rows);
  return 0;
}

json threshold_json(double t) { return std::isinf(t) ? json(nullptr) : json(t); }

int run_dynamic_cmd(const RunConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  const std::string prefix = "dynamic_" + cfg.topology.name + "_" + to_string(cfg.algorithm);
  json rows = json::array();
  std::ostringstream table;
  table << "lambda,threshold_c,seed,arrivals,accepted,rejected_resources,rejected_temperature,measured_arrivals,"
           "measured_rejections,rejection_ratio,mean_power_kw,mean_gap_c,mean_active_gap_c\n";
  for (double lambda : cfg.lambdas) {
    for (double threshold : cfg.thresholds) {
      for (auto seed : cfg.seeds) {
        DynamicScenario scenario;
        scenario.lambda_per_hour = lambda;
        scenario.mean_holding_h = cfg.mean_holding_h;
        scenario.requests = cfg.requests;
        scenario.options.threshold_c = threshold;
        scenario.options.warmup = cfg.warmup;
        scenario.options.record_series = cfg.write_series;
        const auto report = replicate_dynamic(cfg.topology, cfg.workload, scenario, cfg.algorithm, cfg.thermal, seed);
        const std::string stem = prefix + "_l" + format_double(lambda) + "_t" + format_double(threshold) + "_s" +
                                 std::to_string(seed);
        if (cfg.write_series) {
          write_file(dir / (stem + "_series.csv"), [&](std::ostream& os) { write_series_csv(os, report.series); });
        }
        json summary = summary_json(report);
        summary["case"] = cfg.topology.name;
        summary["lambda"] = lambda;
        summary["mean_holding_h"] = cfg.mean_holding_h;
        summary["seed"] = seed;
        write_json(dir / (stem + "_summary.json"), summary);
        table << format_double(lambda) << ',' << format_double(threshold) << ',' << seed << ',' << report.arrivals
              << ',' << report.accepted << ',' << report.rejected_resources << ',' << report.rejected_temperature << ','
              << report.measured_arrivals << ',' << report.measured_rejections << ','
              << format_double(report.rejection_ratio()) << ',' << format_double(report.mean_power_kw) << ','
              << format_double(report.mean_gap_c) << ',' << format_double(report.mean_active_gap_c) << '\n';
        rows.push_back({{"lambda", lambda},
                        {"threshold_c", threshold_json(threshold)},
                        {"seed", seed},
                        {"arrivals", report.arrivals},
                        {"rejected", report.rejected()},
                        {"rejection_ratio", report.rejection_ratio()},
                        {"mean_power_kw", report.mean_power_kw},
                        {"mean_active_gap_c", report.mean_active_gap_c}});
      }
    }
  }
  write_file(dir / (prefix + "_sweep.csv"), [&](std::ostream& os) { os << table.str(); });
  write_json(dir / (prefix + "_sweep.json"), rows);
  return 0;
}

int emit_milp_cmd(const RunConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  for (auto n : cfg.vdc_counts) {
    for (auto seed : cfg.seeds) {
      const auto inst = make_instance(cfg, n, seed);
      const std::string text = emit_milp(inst);
      write_file(dir / ("milp_" + cfg.topology.name + "_" + cell(n, seed) + ".lp"),
                 [&](std::ostream& os) { os << text; });
    }
  }
  return 0;
}

int oracle_cmd(const RunConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  BruteForceLimits limits;
  limits.max_path_hops = cfg.max_path_hops;
  for (auto n : cfg.vdc_counts) {
    for (auto seed : cfg.seeds) {
      const auto inst = make_instance(cfg, n, seed);
      const auto exact = brute_force_optimal(inst, limits);
      json summary = to_json(exact);
      summary["case"] = cfg.topology.name;
      summary["vdcs"] = n;
      summary["seed"] = seed;

      // The heuristic on the same instance, for the optimality gap.
      auto state = inst.topology;
      std::vector<Embedding> heuristic;
      for (const auto& vdc : inst.vdcs) {
        if (auto r = embed(state, vdc, cfg.algorithm, cfg.thermal)) heuristic.push_back(*r.embedding);
      }
      json h = {{"algorithm", to_string(cfg.algorithm)}, {"embedded", heuristic.size()}};
      if (heuristic.size() == inst.vdcs.size()) {
        const double obj = evaluate_embeddings(inst, heuristic).objective;
        h["objective"] = obj;
        if (exact.feasible) h["relative_gap"] = (obj - exact.objective) / exact.objective;
      }
      summary["heuristic"] = h;

      const std::string stem = "oracle_" + cfg.topology.name + "_" + cell(n, seed);
      write_json(dir / (stem + "_summary.json"), summary);
      if (exact.feasible) {
        write_file(dir / (stem + "_embeddings.jsonl"),
                   [&](std::ostream& os) { write_embeddings_jsonl(os, exact.embeddings); });
        write_file(dir / (stem + "_solution.txt"),
                   [&](std::ostream& os) { os << lp::write_assignment(to_assignment(inst, exact.embeddings)); });
      }
      std::cout << stem << ": feasible=" << exact.feasible << " objective=" << format_double(exact.objective) << '\n';
    }
  }
  return 0;
}

int validate_cmd(const RunConfig& cfg, const std::string& embeddings_path, const std::string& solution_path,
                 double tol) {
  if (cfg.seeds.size() != 1 || cfg.vdc_counts.size() != 1) {
    throw ConfigError("validate needs exactly one seed and one vdcs count");
  }
  if (embeddings_path.empty() == solution_path.empty()) {
    throw ConfigError("validate needs exactly one of --embeddings or --solution");
  }
  const auto n = cfg.vdc_counts.front();
  const auto seed = cfg.seeds.front();
  const auto inst = make_instance(cfg, n, seed);
  ValidationReport report;
  if (!embeddings_path.empty()) {
    std::istringstream is(read_file(embeddings_path));
    Candidate candidate;
    candidate.embeddings = read_embeddings_jsonl(is);
    report = validate_solution(inst, candidate, tol);
  } else {
    report = validate_assignment(inst, lp::parse_assignment(read_file(solution_path)), tol);
  }
  write_json(fs::path(cfg.output_dir) / ("validate_" + cfg.topology.name + "_" + cell(n, seed) + ".json"),
             to_json(report));
  std::cout << report.summary();
  std::cout << "result: " << (report.ok() ? "valid" : "invalid") << '\n';
  return report.ok() ? 0 : 1;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

int fail(const char* kind, const std::string& message) {
  std::cerr << "error: kind=" << kind << " message=\"" << escape(message) << "\"\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temperature-aware virtual data center embedding simulator"};
  app.require_subcommand(1);
  Invocation inv;

  auto* topo = app.add_subcommand("gen-topology", "Write the physical topology as CSV");
  topo->alias("dump-topology");
  auto* workload = app.add_subcommand("gen-workload", "Write a static batch or a dynamic trace as JSONL");
  std::string kind = "static";
  workload->add_option("--kind", kind, "static or dynamic")->check(CLI::IsMember({"static", "dynamic"}));
  auto* rs = app.add_subcommand("run-static", "Embed static batches and report temperatures and power");
  auto* rd = app.add_subcommand("run-dynamic", "Simulate arrivals and departures with admission control");
  auto* milp = app.add_subcommand("emit-milp", "Write the exact model of a static batch in LP format");
  auto* oracle = app.add_subcommand("oracle", "Solve a tiny static batch exactly by enumeration");
  auto* val = app.add_subcommand("validate", "Check a stored embedding or variable assignment");
  std::string embeddings_path, solution_path;
  double tol = 1e-6;
  val->add_option("--embeddings", embeddings_path, "Embeddings JSONL")->check(CLI::ExistingFile);
  val->add_option("--solution", solution_path, "name=value assignment file")->check(CLI::ExistingFile);
  val->add_option("--tol", tol, "Feasibility tolerance");

  for (auto* sub : {topo, workload, rs, rd, milp, oracle, val}) add_config_options(sub, inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    const RunConfig cfg = resolve(inv);
    if (topo->parsed()) return gen_topology(cfg);
    if (workload->parsed()) return gen_workload(cfg, kind);
    if (rs->parsed()) return run_static_cmd(cfg);
    if (rd->parsed()) return run_dynamic_cmd(cfg);
    if (milp->parsed()) return emit_milp_cmd(cfg);
    if (oracle->parsed()) return oracle_cmd(cfg);
    return validate_cmd(cfg, embeddings_path, solution_path, tol);
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  } catch (const fs::filesystem_error& e) {
    return fail("io", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}
