#pragma once

#include <optional>
#include <string_view>

namespace synrag {

/// Target SIEM platform. QRadar speaks AQL, Google SecOps speaks YARA-L 2.0.
enum class Platform { qradar, secops };

inline constexpr Platform kAllPlatforms[] = {Platform::qradar, Platform::secops};

std::string_view to_string(Platform platform);
std::optional<Platform> parse_platform(std::string_view name);

}  // namespace synrag
