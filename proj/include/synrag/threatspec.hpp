#pragma once

#include <synrag/error.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace synrag {

/// Platform-agnostic detection specification as authored by an analyst.
///
/// YAML keys: `description`, `fields`, `source`, `logic`, optional `id`.
/// Any other top-level key is kept verbatim (as re-emitted YAML) in `extra`.
struct ThreatSpec {
    std::string id;
    std::string description;
    std::vector<std::string> select_fields;
    std::string source;
    std::string logic;
    std::map<std::string, std::string> extra;

    bool operator==(const ThreatSpec&) const = default;
};

/// Parses one YAML document. `fallback_id` is used when the document has no
/// `id` key (callers pass the filename stem). Unknown keys are logged as
/// warnings and preserved in `extra`.
ThreatSpec parse_spec(std::string_view yaml_text, std::string_view fallback_id = "spec");

/// Emits a YAML document that parses back into an equal ThreatSpec.
std::string to_yaml(const ThreatSpec& spec);

/// Names of the keys that are not part of the schema, sorted.
std::vector<std::string> unknown_keys(const ThreatSpec& spec);

struct SpecLoadError {
    std::filesystem::path path;
    Error error;
};

struct SpecDirectory {
    std::vector<ThreatSpec> specs;  ///< sorted by id, then path
    std::vector<SpecLoadError> errors;  ///< sorted by path
};

/// Loads every `.yaml` / `.yml` file directly inside `dir`. Throws
/// Error(DirNotFound) when `dir` is not a directory; parse failures are
/// collected in `errors` and do not abort the batch.
SpecDirectory load_spec_dir(const std::filesystem::path& dir);

}  // namespace synrag
