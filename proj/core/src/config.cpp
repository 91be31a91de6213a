#include "tavdc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tavdc/error.hpp"

namespace tavdc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

template <typename T>
T parse_integer(const std::string& key, std::string_view text) {
  T v{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

double parse_double(const std::string& key, std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "infinity" || text == "none") {
    return std::numeric_limits<double>::infinity();
  }
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || std::isnan(v)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + text + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& value, F one) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) out.push_back(one(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  std::istringstream is{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!kv.values_.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' repeated");
    }
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "case", "racks", "servers_per_rack", "n_tor", "n_agg", "n_core", "access_rate_mbps", "trunk_rate_mbps",
      "server_cpu", "server_mem", "server_disk", "inlet_min_c", "inlet_max_c",
      "vms_min", "vms_max", "vm_cpu_min", "vm_cpu_max", "vm_mem_min", "vm_mem_max", "vm_disk_min", "vm_disk_max",
      "vlink_bw_min", "vlink_bw_max", "vdcs",
      "server_idle_kw", "server_max_kw", "switch_idle_kw", "electronic_port_kw", "optical_port_kw",
      "air_density", "airflow", "specific_heat",
      "alpha", "big_m",
      "lambda", "mean_holding_h", "threshold_c", "requests", "warmup", "write_series",
      "algorithm", "seeds", "output_dir", "max_path_hops"};
  return keys;
}

void RunConfig::validate() const {
  topology.validate();
  workload.validate();
  thermal.power.validate();
  thermal.thermo.validate();
  if (!(alpha >= 0.0) || std::isinf(alpha)) throw ConfigError("alpha must be finite and >= 0");
  if (big_m != 0 && big_m < std::max(topology.access_rate_mbps, topology.trunk_rate_mbps)) {
    throw ConfigError("big_m must be 0 (auto) or at least the largest link capacity");
  }
  if (vdc_counts.empty() || seeds.empty() || lambdas.empty() || thresholds.empty()) {
    throw ConfigError("vdcs, seeds, lambda and threshold_c need at least one value");
  }
  for (double l : lambdas) {
    if (!(l > 0.0) || std::isinf(l)) throw ConfigError("lambda must be finite and > 0");
  }
  for (double t : thresholds) {
    if (std::isnan(t)) throw ConfigError("threshold_c must be a number or inf");
  }
  if (!(mean_holding_h > 0.0) || std::isinf(mean_holding_h)) throw ConfigError("mean_holding_h must be finite and > 0");
  if (max_path_hops < 1) throw ConfigError("max_path_hops must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

RunConfig make_config(const KeyValues& kv) {
  const auto& values = kv.values();
  for (const auto& [key, value] : values) {
    (void)value;
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  auto it = values.find("case");
  if (it == values.end()) throw ConfigError("missing key 'case'");
  RunConfig cfg;
  const std::string& name = it->second;
  if (name == "caseA") {
    cfg.topology = TopologyConfig::case_a();
    cfg.workload = WorkloadParams::case_a();
  } else if (name == "caseB") {
    cfg.topology = TopologyConfig::case_b();
    cfg.workload = WorkloadParams::case_b();
  } else if (name == "custom" || name.rfind("custom", 0) == 0) {
    for (const char* required : {"racks", "servers_per_rack", "n_agg", "n_core"}) {
      if (!values.count(required)) throw ConfigError(std::string("missing key '") + required + "' for a custom case");
    }
    cfg.topology = TopologyConfig::case_a();
    cfg.workload = WorkloadParams::case_a();
    cfg.topology.name = name;
  } else {
    throw ConfigError("key 'case': expected caseA, caseB or custom*, got '" + name + "'");
  }

  auto get = [&values](const std::string& key) -> const std::string* {
    auto found = values.find(key);
    return found == values.end() ? nullptr : &found->second;
  };
  auto set_int = [&get](const std::string& key, auto& field) {
    if (const auto* v = get(key)) field = parse_integer<std::remove_reference_t<decltype(field)>>(key, *v);
  };
  auto set_double = [&get](const std::string& key, double& field) {
    if (const auto* v = get(key)) field = parse_double(key, *v);
  };

  set_int("racks", cfg.topology.racks);
  cfg.topology.n_tor = cfg.topology.racks;
  set_int("n_tor", cfg.topology.n_tor);
  set_int("servers_per_rack", cfg.topology.servers_per_rack);
  set_int("n_agg", cfg.topology.n_agg);
  set_int("n_core", cfg.topology.n_core);
  set_int("access_rate_mbps", cfg.topology.access_rate_mbps);
  set_int("trunk_rate_mbps", cfg.topology.trunk_rate_mbps);
  set_int("server_cpu", cfg.topology.server_capacity.cpu);
  set_int("server_mem", cfg.topology.server_capacity.mem);
  set_int("server_disk", cfg.topology.server_capacity.disk);
  set_double("inlet_min_c", cfg.topology.inlet_min_c);
  set_double("inlet_max_c", cfg.topology.inlet_max_c);

  set_int("vms_min", cfg.workload.m_min);
  set_int("vms_max", cfg.workload.m_max);
  set_int("vm_cpu_min", cfg.workload.cpu.min);
  set_int("vm_cpu_max", cfg.workload.cpu.max);
  set_int("vm_mem_min", cfg.workload.mem.min);
  set_int("vm_mem_max", cfg.workload.mem.max);
  set_int("vm_disk_min", cfg.workload.disk.min);
  set_int("vm_disk_max", cfg.workload.disk.max);
  set_int("vlink_bw_min", cfg.workload.bandwidth.min);
  set_int("vlink_bw_max", cfg.workload.bandwidth.max);
  if (const auto* v = get("vdcs")) {
    cfg.vdc_counts = parse_list<std::size_t>("vdcs", *v, [](const std::string& k, const std::string& s) {
      return parse_integer<std::size_t>(k, s);
    });
  }

  set_double("server_idle_kw", cfg.thermal.power.server_idle_kw);
  set_double("server_max_kw", cfg.thermal.power.server_max_kw);
  set_double("switch_idle_kw", cfg.thermal.power.switch_idle_kw);
  set_double("electronic_port_kw", cfg.thermal.power.electronic_port_kw);
  set_double("optical_port_kw", cfg.thermal.power.optical_port_kw);
  set_double("air_density", cfg.thermal.thermo.rho);
  set_double("airflow", cfg.thermal.thermo.airflow);
  set_double("specific_heat", cfg.thermal.thermo.cp);

  set_double("alpha", cfg.alpha);
  set_int("big_m", cfg.big_m);

  if (const auto* v = get("lambda")) cfg.lambdas = parse_list<double>("lambda", *v, parse_double);
  if (const auto* v = get("threshold_c")) cfg.thresholds = parse_list<double>("threshold_c", *v, parse_double);
  set_double("mean_holding_h", cfg.mean_holding_h);
  set_int("requests", cfg.requests);
  set_int("warmup", cfg.warmup);
  if (const auto* v = get("write_series")) cfg.write_series = parse_bool("write_series", *v);

  if (const auto* v = get("algorithm")) cfg.algorithm = parse_algorithm(*v);
  if (const auto* v = get("seeds")) {
    cfg.seeds = parse_list<std::uint64_t>("seeds", *v, [](const std::string& k, const std::string& s) {
      return parse_integer<std::uint64_t>(k, s);
    });
  }
  if (const auto* v = get("output_dir")) cfg.output_dir = *v;
  set_int("max_path_hops", cfg.max_path_hops);

  cfg.validate();
  return cfg;
}

}  // namespace tavdc
