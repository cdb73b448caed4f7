#pragma once

#include <synrag/completion.hpp>
#include <synrag/platform.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synrag {

struct ProviderSettings {
    std::string kind = "stub";  ///< "stub" or "remote"
    std::string provider_id;    ///< defaults to the implementation's id
    std::string endpoint;
    std::string model;
    std::string api_key_env;    ///< credentials are read from the environment only
    double timeout_s = 60.0;
    int retries = 2;
};

struct RunConfig {
    std::filesystem::path base_dir;  ///< relative paths resolve against this
    std::vector<Platform> platforms = {Platform::qradar, Platform::secops};
    std::map<Platform, std::filesystem::path> corpus_roots;
    std::map<Platform, std::filesystem::path> catalogs;
    std::map<Platform, std::filesystem::path> prompt_templates;
    std::filesystem::path output_dir = "out";
    std::filesystem::path index_path;  ///< defaults to <output_dir>/index.jsonl
    std::size_t chunk_size = 500;
    std::size_t chunk_overlap = 100;
    std::size_t parallelism = 1;

    ProviderSettings embedding;
    std::size_t embedding_dimension = 32;

    ProviderSettings completion;
    DecodingParams decoding;
    std::filesystem::path stub_replies;
    bool stub_fence = false;
    bool stub_unavailable = false;

    std::filesystem::path resolve(const std::filesystem::path& p) const;
    std::filesystem::path resolved_index_path() const;
};

/// Reads the TOML subset used by run configs: `[section]` headers and
/// `key = value` lines where value is a "string", number, true/false or a
/// flat array of strings; `#` starts a comment. Unknown keys are rejected.
/// Throws Error(ConfigError).
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace synrag
