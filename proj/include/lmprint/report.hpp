#pragma once

#include <span>

#include "json.hpp"
#include "lmprint/circuit_check.hpp"
#include "lmprint/core_model.hpp"
#include "lmprint/planner.hpp"
#include "lmprint/print_sim.hpp"

// JSON views of pipeline results for the report file.
namespace lmprint::report {

nlohmann::json to_json(const SettingsVerdict& verdict);
nlohmann::json to_json(const plan::Toolpath& toolpath);
nlohmann::json to_json(const plan::Estimate& estimate);
nlohmann::json to_json(const sim::SimulationResult& result);
nlohmann::json to_json(std::span<const circuit::Net> nets);
nlohmann::json to_json(const circuit::DrcResult& drc);

}  // namespace lmprint::report
