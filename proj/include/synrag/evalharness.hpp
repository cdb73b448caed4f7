#pragma once

#include <synrag/platform.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synrag {

/// One candidate/reference pair awaiting scoring (evaluation input line).
struct EvalInput {
    std::string model_id;
    int run_index = 1;
    std::string spec_id;
    Platform platform = Platform::qradar;
    std::string candidate_query;
    std::string reference_query;
};

struct EvalRecord {
    std::string model_id;
    int run_index = 1;
    std::string spec_id;
    Platform platform = Platform::qradar;
    double bleu = 0.0;
    double rouge_l = 0.0;

    bool operator==(const EvalRecord&) const = default;
};

/// Scores one pair with the shared metric tokenizer. A candidate that
/// tokenizes to nothing scores 0 on both metrics; an empty reference throws
/// Error(EmptyReference).
EvalRecord score(const EvalInput& input);

struct RunSummary {
    std::string model_id;
    std::vector<int> run_indices;     ///< ascending
    std::vector<double> run_bleu;     ///< per-run mean over specs
    std::vector<double> run_rouge_l;
    double average_bleu = 0.0;        ///< arithmetic mean of run_bleu
    double average_rouge_l = 0.0;
};

/// Per-run means over specs, then the cross-run average. Models keep their
/// first-appearance order. Throws Error(UnbalancedRuns) when the runs of a
/// model do not cover the same (spec, platform) set, or a pair repeats
/// within a run; Error(InvalidArgument) for run_index < 1 or empty input.
std::vector<RunSummary> summarize(std::span<const EvalRecord> records);

/// Model-comparison table, one row per model: Run 1..N (BLEU, ROUGE-L)
/// followed by the Average pair, four decimals.
std::string render_markdown(std::span<const RunSummary> summaries);
std::string render_csv(std::span<const RunSummary> summaries);

std::string to_json(const EvalRecord& record);
/// JSON Lines readers; throw Error(IoError) naming the bad line.
std::vector<EvalInput> parse_eval_inputs(std::string_view jsonl);
std::vector<EvalRecord> parse_eval_records(std::string_view jsonl);

}  // namespace synrag
