#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synrag::metrics {

/// Lowercases, splits on whitespace and makes each of `(){}=,<>'"` a
/// standalone token.
std::vector<std::string> tokenize_for_metrics(std::string_view text);

/// Zero n-gram precisions are replaced by this value before the geometric mean.
inline constexpr double kBleuEpsilon = 1e-9;

/// Sentence-level BLEU: geometric mean of clipped n-gram precisions for
/// n = 1..max_n times the brevity penalty. Throws Error(EmptyCandidate),
/// Error(EmptyReference) or Error(InvalidArgument) for max_n == 0.
double bleu(std::span<const std::string> candidate, std::span<const std::string> reference, int max_n = 4);

/// Length of the longest common subsequence.
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// ROUGE-L F1 over the LCS. Throws Error(EmptyCandidate) / Error(EmptyReference).
double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

}  // namespace synrag::metrics
