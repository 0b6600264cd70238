#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "chorefair/exact_solver.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/instance.hpp"

namespace chorefair {

/// Parses JSON with exact numbers: integer tokens stay integers and every
/// float token is kept as its raw string, so "0.1" can become the rational
/// 1/10 instead of the nearest double.
nlohmann::json parse_exact(const std::string& text);

/// Cost values serialize as integers when they fit, otherwise as "p/q"
/// strings; INF serializes as "inf".
nlohmann::json cost_to_json(const CostValue& value);
CostValue cost_from_json(const nlohmann::json& value);

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& doc);
Instance parse_instance(const std::string& text);

nlohmann::json allocation_to_json(const Allocation& alloc);
Allocation allocation_from_json(const nlohmann::json& doc);
Allocation parse_allocation(const std::string& text);

nlohmann::json report_to_json(const FairnessReport& report);
nlohmann::json solve_result_to_json(const SolveResult& result);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

} // namespace chorefair
