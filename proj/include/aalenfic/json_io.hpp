#pragma once

#include <json.hpp>
#include <string>

#include "aalenfic/aalen.hpp"
#include "aalenfic/dataset.hpp"
#include "aalenfic/fic.hpp"
#include "aalenfic/oracle.hpp"
#include "aalenfic/simulate.hpp"

// JSON (de)serialization of the public types and configuration documents.
// Schemas are documented in the README; parse failures throw
// ValidationError with a message naming the offending field.

namespace aalenfic {

using json = nlohmann::json;

json dataset_to_json(const Dataset& data);  // array of {time, status, x:[...]}
Dataset dataset_from_json(const json& doc);

json step_estimate_to_json(const StepEstimate& est);  // {index_set, r, grid, increments}
StepEstimate step_estimate_from_json(const json& doc);

json fic_report_to_json(const FicReport& report);  // {focal, candidates, winner}

WeightSpec weight_spec_from_json(const json& doc, int r);
json weight_spec_to_json(const WeightSpec& w);

SimConfig sim_config_from_json(const json& doc);
OracleConfig oracle_config_from_json(const json& doc);

json parse_json(const std::string& text);  // wraps nlohmann parse errors

}  // namespace aalenfic
