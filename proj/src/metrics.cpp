#include <synrag/error.hpp>
#include <synrag/metrics.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace synrag::metrics {

std::vector<std::string> tokenize_for_metrics(std::string_view text) {
    static constexpr std::string_view kSplitChars = "(){}=,<>'\"";
    std::vector<std::string> tokens;
    std::string current;
    const auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isspace(c)) {
            flush();
        } else if (kSplitChars.find(raw) != std::string_view::npos) {
            flush();
            tokens.emplace_back(1, raw);
        } else {
            current.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    flush();
    return tokens;
}

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(std::span<const std::string> tokens, std::size_t n) {
    std::map<Ngram, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                       tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
    }
    return counts;
}

void require_non_empty(std::span<const std::string> candidate, std::span<const std::string> reference) {
    if (candidate.empty()) throw Error(ErrorCode::EmptyCandidate, "");
    if (reference.empty()) throw Error(ErrorCode::EmptyReference, "");
}

}  // namespace

double bleu(std::span<const std::string> candidate, std::span<const std::string> reference, int max_n) {
    require_non_empty(candidate, reference);
    if (max_n < 1) throw Error(ErrorCode::InvalidArgument, "max_n", "must be at least 1");

    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        const auto cand = ngram_counts(candidate, static_cast<std::size_t>(n));
        const auto ref = ngram_counts(reference, static_cast<std::size_t>(n));
        std::size_t matched = 0;
        std::size_t total = 0;
        for (const auto& [gram, count] : cand) {
            total += count;
            if (const auto it = ref.find(gram); it != ref.end()) matched += std::min(count, it->second);
        }
        const double precision = total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total);
        log_sum += std::log(precision > 0.0 ? precision : kBleuEpsilon);
    }
    const double c = static_cast<double>(candidate.size());
    const double r = static_cast<double>(reference.size());
    const double brevity = c < r ? std::exp(1.0 - r / c) : 1.0;
    return std::clamp(brevity * std::exp(log_sum / max_n), 0.0, 1.0);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    std::vector<std::size_t> row(b.size() + 1, 0);
    for (const auto& x : a) {
        std::size_t diag = 0;  // row[j-1] from the previous iteration of the outer loop
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
            diag = up;
        }
    }
    return row[b.size()];
}

double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
    require_non_empty(candidate, reference);
    const auto l = static_cast<double>(lcs_length(candidate, reference));
    if (l == 0.0) return 0.0;
    const double precision = l / static_cast<double>(candidate.size());
    const double recall = l / static_cast<double>(reference.size());
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace synrag::metrics
