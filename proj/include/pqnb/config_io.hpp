#pragma once

// JSON documents: experiment configs, suite catalogs, calibration anchors
// and run results. Field names mirror the C++ structs.

#include <string>
#include <vector>

#include <json.hpp>

#include "pqnb/calibration.hpp"
#include "pqnb/sim_engine.hpp"
#include "pqnb/suite_catalog.hpp"

namespace pqnb {

using Json = nlohmann::json;

Json to_json(const ChannelConfig& c);
Json to_json(const OverheadSplitPolicy& p);
Json to_json(const SimConfig& c);
Json to_json(const CipherSuite& s);
Json to_json(const SuiteCatalog& catalog);
Json to_json(const DeviceRecord& r);
Json to_json(const AggregateMetrics& m);
Json to_json(const RunResult& r);
Json to_json(const CalibrationAnchor& a);
Json to_json(const CalibrationResult& r);

// Each reader starts from `base` and overrides only the fields present.
// Unknown keys and ill-typed values raise ConfigError naming the field path.
ChannelConfig channel_from_json(const Json& j, ChannelConfig base = {}, const std::string& path = "channel");
OverheadSplitPolicy split_from_json(const Json& j, const std::string& path = "split_policy");
SimConfig sim_config_from_json(const Json& j, SimConfig base = {});
SearchSpace search_space_from_json(const Json& j, SearchSpace base = {});

CipherSuite suite_from_json(const Json& j);
// {"suites": [...]} or a bare array of suite records.
SuiteCatalog catalog_from_json(const Json& j);

// {"anchors": [...]} or a bare array.
std::vector<CalibrationAnchor> anchors_from_json(const Json& j);

// Parses text, reporting syntax errors as ConfigError("document", ...).
Json parse_document(const std::string& text);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace pqnb
