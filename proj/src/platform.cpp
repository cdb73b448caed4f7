#include <synrag/platform.hpp>

namespace synrag {

std::string_view to_string(Platform platform) {
    switch (platform) {
        case Platform::qradar: return "qradar";
        case Platform::secops: return "secops";
    }
    return "qradar";
}

std::optional<Platform> parse_platform(std::string_view name) {
    if (name == "qradar") return Platform::qradar;
    if (name == "secops") return Platform::secops;
    return std::nullopt;
}

}  // namespace synrag
