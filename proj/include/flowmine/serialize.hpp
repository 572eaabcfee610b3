#pragma once

#include <string>

#include "flowmine/pipeline.hpp"
#include "flowmine/synth.hpp"

namespace flowmine {

/// Roles file: {"initial": ["(src:dest:cmd:req)", ...], "terminal": [...]}.
RoleConfig parse_roles_json(const std::string& text);
std::string roles_json(const RoleConfig& roles);

std::string model_json(const MessageTable& table, const MineResult& result);
std::string report_json(const MineResult& result);
std::string patterns_json(const MessageTable& table, const LocalMiningResult& local);
std::string model_dot(const MessageTable& table, const FlowModel& model);

/// "path_length,instance_count" rows sorted by length.
std::string histogram_csv(const AcceptanceReport& report);

}  // namespace flowmine
