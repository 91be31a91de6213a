#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tavdc/embedding.hpp"
#include "tavdc/thermal.hpp"
#include "tavdc/topology.hpp"
#include "tavdc/workload.hpp"

namespace tavdc {

// Flat key/value text: `key = value` lines, '#' comments, `[section]`
// headers that only group keys visually. Keys are unique across the file.
class KeyValues {
 public:
  // Throws ConfigError on malformed lines or repeated keys.
  static KeyValues parse(std::string_view text);
  static KeyValues load(const std::string& path);

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct RunConfig {
  TopologyConfig topology;
  WorkloadParams workload;
  ThermalModel thermal;
  double alpha = 0.1;
  Mbps big_m = 0;
  Algorithm algorithm = Algorithm::temperature_aware;
  std::vector<std::size_t> vdc_counts{10};
  std::vector<double> lambdas{80.0};
  std::vector<double> thresholds{35.0};
  double mean_holding_h = 3.0;
  std::size_t requests = 100000;
  std::size_t warmup = 1000;
  bool write_series = true;
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = "out";
  int max_path_hops = 6;

  // Throws ConfigError if any value is out of range.
  void validate() const;
};

// Keys understood by apply_config, in documentation order.
const std::vector<std::string>& config_keys();

// The `case` key (caseA, caseB or custom) selects the preset every other
// key overrides; it is required. A custom case also requires racks,
// servers_per_rack, n_agg and n_core. Unknown keys are an error.
RunConfig make_config(const KeyValues& kv);

}  // namespace tavdc
