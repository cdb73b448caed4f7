#include <synrag/validators.hpp>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>

namespace synrag {

std::string_view to_string(Severity severity) {
    return severity == Severity::error ? "error" : "warning";
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::valid: return "valid";
        case Verdict::valid_with_warnings: return "valid_with_warnings";
        case Verdict::invalid: return "invalid";
    }
    return "invalid";
}

void ValidationReport::add(Severity severity, std::string code, std::string message, Span span) {
    diagnostics.push_back({severity, std::move(code), std::move(message), span});
}

bool ValidationReport::has(std::string_view code) const {
    return std::any_of(diagnostics.begin(), diagnostics.end(), [&](const Diagnostic& d) { return d.code == code; });
}

void ValidationReport::finalize() {
    const bool any_error = std::any_of(diagnostics.begin(), diagnostics.end(),
                                       [](const Diagnostic& d) { return d.severity == Severity::error; });
    if (any_error) {
        verdict = Verdict::invalid;
    } else if (!diagnostics.empty()) {
        verdict = Verdict::valid_with_warnings;
    } else {
        verdict = Verdict::valid;
    }
}

std::string to_json(const ValidationReport& report) {
    nlohmann::ordered_json diags = nlohmann::ordered_json::array();
    for (const auto& d : report.diagnostics) {
        diags.push_back({{"severity", to_string(d.severity)},
                         {"code", d.code},
                         {"message", d.message},
                         {"span", {{"offset", d.span.offset}, {"length", d.span.length}}}});
    }
    nlohmann::ordered_json out = {{"spec_id", report.spec_id},
                                  {"platform", to_string(report.platform)},
                                  {"verdict", to_string(report.verdict)},
                                  {"diagnostics", diags}};
    return out.dump();
}

std::string format_report(const ValidationReport& report, std::string_view query_text) {
    std::string out = fmt::format("{} [{}]: {}\n", report.spec_id.empty() ? "<query>" : report.spec_id,
                                  to_string(report.platform), to_string(report.verdict));
    for (const auto& d : report.diagnostics) {
        const std::size_t offset = std::min(d.span.offset, query_text.size());
        const auto before = query_text.substr(0, offset);
        const std::size_t line = 1 + static_cast<std::size_t>(std::count(before.begin(), before.end(), '\n'));
        const std::size_t line_start = before.rfind('\n');
        const std::size_t column = line_start == std::string_view::npos ? offset + 1 : offset - line_start;
        const auto excerpt = query_text.substr(offset, std::min<std::size_t>(d.span.length, 60));
        out += fmt::format("  {} {} at {}:{} [{}+{}] '{}': {}\n", to_string(d.severity), d.code, line, column,
                           d.span.offset, d.span.length, excerpt, d.message);
    }
    return out;
}

ValidationReport validate_query(std::string_view query, const SyntaxBundle& bundle, std::string spec_id) {
    if (bundle.platform() == Platform::qradar) return validate_aql(query, bundle.aql(), std::move(spec_id));
    return validate_yaral(query, bundle.yaral(), std::move(spec_id));
}

}  // namespace synrag
