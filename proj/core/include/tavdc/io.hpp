#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tavdc/exactopt.hpp"
#include "tavdc/model.hpp"
#include "tavdc/simulation.hpp"
#include "tavdc/thermal.hpp"
#include "tavdc/topology.hpp"
#include "tavdc/workload.hpp"

namespace tavdc {

// Shortest decimal text that reads back to the same double; "inf"/"-inf"
// for infinities.
std::string format_double(double v);

nlohmann::json to_json(const VdcRequest& vdc);
VdcRequest vdc_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Embedding& e);
Embedding embedding_from_json(const nlohmann::json& j);

// One JSON object per line. Readers throw InputError naming the bad line.
void write_vdcs_jsonl(std::ostream& os, const std::vector<VdcRequest>& vdcs);
std::vector<VdcRequest> read_vdcs_jsonl(std::istream& is);
void write_embeddings_jsonl(std::ostream& os, const std::vector<Embedding>& embeddings);
std::vector<Embedding> read_embeddings_jsonl(std::istream& is);
// Requests first ({"type":"vdc",...}), then events ({"type":"event",...}).
void write_trace_jsonl(std::ostream& os, const EventTrace& trace);
EventTrace read_trace_jsonl(std::istream& is);

void write_nodes_csv(std::ostream& os, const DataCenterState& state);
void write_links_csv(std::ostream& os, const DataCenterState& state);
void write_racks_csv(std::ostream& os, const ThermalReport& report);
void write_histogram_csv(std::ostream& os, const Histogram& histogram);
void write_series_csv(std::ostream& os, const std::vector<SeriesPoint>& series);

nlohmann::json topology_summary(const DataCenterState& state);
nlohmann::json to_json(const ThermalReport& report);
nlohmann::json to_json(const Histogram& histogram);
nlohmann::json summary_json(const StaticReport& report);
nlohmann::json summary_json(const DynamicReport& report);
nlohmann::json to_json(const ExactSolution& solution);
nlohmann::json to_json(const ValidationReport& report);

}  // namespace tavdc
