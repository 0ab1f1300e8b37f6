#pragma once

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace gfq::cli {

// Each command writes its artifacts into cfg.run_dir() and returns a summary.
nlohmann::ordered_json cmd_run(const RunConfig& cfg);
nlohmann::ordered_json cmd_converge(const RunConfig& cfg);
nlohmann::ordered_json cmd_symbols(const RunConfig& cfg);
nlohmann::ordered_json cmd_project(const RunConfig& cfg);
nlohmann::ordered_json cmd_kernel_audit(const RunConfig& cfg);

}  // namespace gfq::cli
