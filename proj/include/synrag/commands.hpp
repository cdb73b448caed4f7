#pragma once

#include <synrag/completion.hpp>
#include <synrag/config.hpp>
#include <synrag/embedding.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

namespace synrag {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidationFailed = 1,
    kExitConfigError = 2,
    kExitProviderError = 3,
};

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const RunConfig& config);
std::unique_ptr<CompletionProvider> make_completion_provider(const RunConfig& config);

/// Loads, chunks and embeds every configured corpus and writes the index.
int cmd_ingest(const RunConfig& config, std::ostream& out);

/// One archive record per (spec, platform) in <output_dir>/generations.jsonl;
/// failures go to <output_dir>/generation_failures.jsonl.
int cmd_generate(const RunConfig& config, const std::filesystem::path& specs_dir,
                 std::optional<Platform> only_platform, std::ostream& out);

/// Validates every archived query; reports go to <output_dir>/validation.jsonl.
int cmd_validate(const RunConfig& config, const std::filesystem::path& archive, std::ostream& out);

struct EvaluateOptions {
    /// Generation archives; the i-th archive is run i+1.
    std::vector<std::filesystem::path> archives;
    std::filesystem::path references_dir;  ///< <dir>/<platform>/<spec_id>.aql|.yaral
    std::string model_id;                  ///< defaults to the archive's provider id
    /// Pre-paired candidate/reference lines, scored as given.
    std::optional<std::filesystem::path> inputs;
    /// Already-scored EvalRecord lines, summarized as given.
    std::optional<std::filesystem::path> records;
};

/// Scores and summarizes; writes eval_records.jsonl, eval_table.md and
/// eval_table.csv under the output directory.
int cmd_evaluate(const RunConfig& config, const EvaluateOptions& options, std::ostream& out);

}  // namespace synrag
