#pragma once

#include <synrag/platform.hpp>
#include <synrag/syntax.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace synrag {

enum class Severity { warning, error };
enum class Verdict { valid, valid_with_warnings, invalid };

std::string_view to_string(Severity severity);
std::string_view to_string(Verdict verdict);

/// Byte range into the validated query text.
struct Span {
    std::size_t offset = 0;
    std::size_t length = 0;
    bool operator==(const Span&) const = default;
};

struct Diagnostic {
    Severity severity = Severity::error;
    std::string code;
    std::string message;
    Span span;
    bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
    std::string spec_id;
    Platform platform = Platform::qradar;
    Verdict verdict = Verdict::valid;
    std::vector<Diagnostic> diagnostics;

    void add(Severity severity, std::string code, std::string message, Span span);
    bool has(std::string_view code) const;
    /// Recomputes `verdict` from the diagnostics.
    void finalize();
    bool operator==(const ValidationReport&) const = default;
};

std::string to_json(const ValidationReport& report);
/// Human-readable rendering with line:column positions and span text.
std::string format_report(const ValidationReport& report, std::string_view query_text);

// ---------------------------------------------------------------------------
// AQL
// ---------------------------------------------------------------------------

enum class AqlTokenKind { keyword, identifier, quoted_identifier, string_literal, number, op, punctuation };

std::string_view to_string(AqlTokenKind kind);

struct AqlToken {
    AqlTokenKind kind = AqlTokenKind::identifier;
    std::string text;  ///< quoted tokens carry their unquoted content
    std::size_t offset = 0;
    std::size_t length = 0;  ///< bytes in the source, quotes included
    bool operator==(const AqlToken&) const = default;
};

/// Lexes AQL. Words in the reserved-word table become `keyword` tokens,
/// other words `identifier`; "double quotes" make a quoted identifier,
/// 'single quotes' a string literal ('' escapes a quote). `--` comments are
/// dropped. Throws Error(UnterminatedQuote) with the byte position as subject.
std::vector<AqlToken> tokenize_aql(std::string_view query);

/// Structural and vocabulary checks: clause order, FROM target, identifier
/// resolution (fields, functions, `AS` aliases), quoting of multi-word field
/// names, parenthesis balance. Never throws on query content.
ValidationReport validate_aql(std::string_view query, const AqlCatalog& catalog, std::string spec_id = {});

// ---------------------------------------------------------------------------
// YARA-L
// ---------------------------------------------------------------------------

/// Checks the rule wrapper, required and ordered sections, placeholder
/// binding, dotted function names and brace balance. Never throws on query
/// content.
ValidationReport validate_yaral(std::string_view query, const YaralCatalog& catalog, std::string spec_id = {});

/// Dispatches on the bundle platform.
ValidationReport validate_query(std::string_view query, const SyntaxBundle& bundle, std::string spec_id = {});

}  // namespace synrag
