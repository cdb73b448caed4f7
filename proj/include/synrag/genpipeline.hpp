#pragma once

#include <synrag/completion.hpp>
#include <synrag/embedding.hpp>
#include <synrag/error.hpp>
#include <synrag/ingest.hpp>
#include <synrag/syntax.hpp>
#include <synrag/threatspec.hpp>
#include <synrag/vectorstore.hpp>

#include <chrono>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace synrag {

inline constexpr std::size_t kContextChunks = 5;

struct PromptBundle {
    Platform platform = Platform::qradar;
    std::string spec_id;
    std::string rendered_prompt;
    std::vector<std::string> context_chunk_ids;
    std::vector<std::string> catalog_components_included;
};

/// Built-in prompt template for a platform. Placeholders are `{{name}}`.
std::string_view default_prompt_template(Platform platform);

/// Substitutes `{{name}}` placeholders. Throws Error(TemplateError) for an
/// unknown or unterminated placeholder.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars);

/// Renders the syntax-constrained prompt. Constraint lists are compact JSON
/// arrays of catalog tokens; context chunks appear in the given (rank)
/// order, or "N/A" when there are none. Throws Error(InvalidArgument) for
/// more than five chunks, Error(CatalogMissing) when the bundle is for
/// another platform.
PromptBundle build_prompt(const ThreatSpec& spec, const SyntaxBundle& bundle,
                          std::span<const DocumentChunk> context, Platform target,
                          std::optional<std::string_view> template_override = std::nullopt);

/// Text embedded for retrieval: description and logic.
std::string retrieval_text(const ThreatSpec& spec);

/// Top-`k` chunks of `platform` origin for the spec, best first.
std::vector<DocumentChunk> retrieve_context(const ThreatSpec& spec, const VectorIndex& index,
                                            const EmbeddingProvider& provider, Platform platform,
                                            std::size_t k = kContextChunks);

/// Removes one surrounding pair of ``` fences (with optional language tag on
/// the opening fence). Text without both fences is returned unchanged.
std::string strip_code_fences(std::string_view completion);

struct GeneratedQuery {
    Platform platform = Platform::qradar;
    std::string spec_id;
    std::string query_text;
    std::string provider_id;
    std::string prompt_hash;  ///< SHA-256 of the rendered prompt
    std::chrono::system_clock::time_point created_at;
};

struct Generation {
    GeneratedQuery query;
    PromptBundle prompt;
    std::string completion_raw;
    CompletionResponse response;
};

struct PipelineDeps {
    const VectorIndex* index = nullptr;
    const EmbeddingProvider* embedder = nullptr;
    const CompletionProvider* completer = nullptr;
    std::map<Platform, SyntaxBundle> catalogs;
    std::map<Platform, std::string> template_overrides;
    DecodingParams decoding;
    std::size_t context_k = kContextChunks;
};

/// retrieve → build_prompt → complete → strip fences. Throws
/// Error(EmptyCompletion) when nothing but whitespace remains.
Generation generate(const ThreatSpec& spec, Platform platform, const PipelineDeps& deps);

struct GenerationFailure {
    std::string spec_id;
    Platform platform = Platform::qradar;
    ErrorCode code = ErrorCode::ProviderUnavailable;
    std::string message;
};

using GenerationOutcome = std::variant<Generation, GenerationFailure>;

/// Runs every (spec, platform) pair with at most `parallelism` workers.
/// Output order is spec order, then platform order, regardless of
/// scheduling. Failures are captured per pair.
std::vector<GenerationOutcome> generate_all(std::span<const ThreatSpec> specs, std::span<const Platform> platforms,
                                            const PipelineDeps& deps, std::size_t parallelism);

/// One archive line (no trailing newline).
std::string archive_record(const Generation& generation);
std::string failure_record(const GenerationFailure& failure);

/// A parsed archive line.
struct ArchivedQuery {
    std::string spec_id;
    Platform platform = Platform::qradar;
    std::string provider_id;
    std::string query_text;
};

/// Parses a generation archive (JSON Lines). Throws Error(IoError) on
/// malformed lines.
std::vector<ArchivedQuery> parse_archive(std::string_view jsonl);

}  // namespace synrag
