#pragma once

#include "json.hpp"
#include "mats/platforms/platform.hpp"

namespace mats {

// {"platform": name, "agents": [{"id", "role", "home"?}], "bootstrap": [ids],
//  "message_alphabet": [...], "unique_posts": bool}
nlohmann::ordered_json to_json(const PlatformConfig& cfg);
/// Throws ConfigError on anything malformed.
PlatformConfig platform_config_from_json(const nlohmann::json& j);

}  // namespace mats
