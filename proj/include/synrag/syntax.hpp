#pragma once

#include <synrag/platform.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace synrag {

/// Curated AQL vocabulary. Lists keep file order (used verbatim in prompts).
struct AqlCatalog {
    std::vector<std::string> keywords;
    std::vector<std::string> fields;
    std::vector<std::string> functions;
    std::vector<std::string> databases;

    bool operator==(const AqlCatalog&) const = default;
};

/// Curated YARA-L 2.0 vocabulary.
struct YaralCatalog {
    std::vector<std::string> sections;
    std::vector<std::string> functions;
    std::vector<std::string> udm_fields;

    bool operator==(const YaralCatalog&) const = default;
};

/// Immutable per-platform catalog handed to the prompt builder and the
/// validators.
class SyntaxBundle {
public:
    explicit SyntaxBundle(AqlCatalog catalog);
    explicit SyntaxBundle(YaralCatalog catalog);

    Platform platform() const;
    const AqlCatalog& aql() const;      ///< throws Error(PlatformMismatch) for secops
    const YaralCatalog& yaral() const;  ///< throws Error(PlatformMismatch) for qradar

    /// Component names in prompt order.
    std::vector<std::string> component_names() const;

private:
    std::variant<AqlCatalog, YaralCatalog> catalog_;
};

/// Sections every YARA-L catalog must list, in rule order.
inline constexpr std::string_view kRequiredYaralSections[] = {"meta", "events", "match", "outcome",
                                                              "condition"};

/// Parses a catalog JSON object: {"platform": "...", "<component>": [..], ...}.
/// Throws Error(MalformedCatalog), Error(EmptyComponent) or
/// Error(PlatformMismatch) when the file's platform differs from `platform`.
SyntaxBundle parse_catalog(std::string_view json_text, Platform platform);
SyntaxBundle load_catalog(const std::filesystem::path& path, Platform platform);

/// The curated list for a component. Throws Error(UnknownComponent).
const std::vector<std::string>& allowed_tokens(const SyntaxBundle& bundle, std::string_view component);

/// Membership test. AQL keywords, functions and databases compare
/// case-insensitively; AQL fields and every YARA-L component compare exactly.
bool is_member(const SyntaxBundle& bundle, std::string_view component, std::string_view token);

}  // namespace synrag
