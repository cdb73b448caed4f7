#include <synrag/text.hpp>
#include <synrag/validators.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace synrag {

namespace {

enum class Kind { word, placeholder, count_ref, string, regex, number, punct };

struct Token {
    Kind kind = Kind::word;
    std::string text;  // placeholder/count_ref: "$e"; word: full dotted name
    std::string path;  // placeholder field path without leading dot
    std::size_t offset = 0;
    std::size_t length = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Lexed {
    std::vector<Token> tokens;
    std::optional<Span> unterminated;
};

// Scans a dotted identifier path starting at i (which must be an ident start).
std::size_t scan_dotted(std::string_view q, std::size_t i) {
    while (i < q.size() && ident_char(q[i])) ++i;
    while (i + 1 < q.size() && q[i] == '.' && ident_start(q[i + 1])) {
        ++i;
        while (i < q.size() && ident_char(q[i])) ++i;
    }
    return i;
}

Lexed lex_yaral(std::string_view q) {
    Lexed out;
    auto& tokens = out.tokens;
    std::size_t i = 0;
    const auto regex_allowed = [&] {
        if (tokens.empty()) return true;
        const auto& prev = tokens.back();
        return prev.kind == Kind::punct &&
               (prev.text == "=" || prev.text == "!=" || prev.text == "(" || prev.text == ",");
    };
    while (i < q.size()) {
        const char c = q[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (q.compare(i, 2, "//") == 0) {
            while (i < q.size() && q[i] != '\n') ++i;
            continue;
        }
        if (q.compare(i, 2, "/*") == 0) {
            const std::size_t end = q.find("*/", i + 2);
            i = end == std::string_view::npos ? q.size() : end + 2;
            continue;
        }
        const std::size_t start = i;
        if (c == '"' || c == '`' || (c == '/' && regex_allowed())) {
            ++i;
            bool closed = false;
            while (i < q.size()) {
                if (q[i] == '\\' && c != '`') {
                    i += 2;
                    continue;
                }
                if (q[i] == c) {
                    closed = true;
                    ++i;
                    break;
                }
                ++i;
            }
            if (!closed) {
                out.unterminated = Span{start, q.size() - start};
                return out;
            }
            tokens.push_back({c == '/' ? Kind::regex : Kind::string, std::string(q.substr(start, i - start)), {},
                              start, i - start});
            continue;
        }
        if ((c == '$' || c == '#') && i + 1 < q.size() && ident_start(q[i + 1])) {
            ++i;
            while (i < q.size() && ident_char(q[i])) ++i;
            Token t{c == '$' ? Kind::placeholder : Kind::count_ref, "$" + std::string(q.substr(start + 1, i - start - 1)),
                    {}, start, 0};
            if (c == '$' && i + 1 < q.size() && q[i] == '.' && ident_start(q[i + 1])) {
                const std::size_t path_end = scan_dotted(q, i + 1);
                t.path = std::string(q.substr(i + 1, path_end - i - 1));
                i = path_end;
            }
            t.length = i - start;
            tokens.push_back(std::move(t));
            continue;
        }
        if (ident_start(c)) {
            i = scan_dotted(q, i);
            tokens.push_back({Kind::word, std::string(q.substr(start, i - start)), {}, start, i - start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < q.size() && (std::isalnum(static_cast<unsigned char>(q[i])) || q[i] == '.')) ++i;
            tokens.push_back({Kind::number, std::string(q.substr(start, i - start)), {}, start, i - start});
            continue;
        }
        static constexpr std::string_view kTwoChar[] = {"!=", "<=", ">="};
        std::size_t len = 1;
        for (auto op : kTwoChar) {
            if (q.compare(i, 2, op) == 0) len = 2;
        }
        tokens.push_back({Kind::punct, std::string(q.substr(i, len)), {}, start, len});
        i += len;
    }
    return out;
}

Span span_of(const Token& t) { return {t.offset, t.length}; }

struct Section {
    std::string name;
    std::size_t header;  // token index of the section name
    std::size_t begin;   // first body token
    std::size_t end;     // one past the last body token
};

class YaralChecker {
public:
    YaralChecker(std::vector<Token> tokens, const YaralCatalog& catalog, ValidationReport& report)
        : tokens_(std::move(tokens)), catalog_(catalog), report_(report) {}

    void run() {
        check_braces();
        check_wrapper();
        collect_sections();
        check_sections();
        check_placeholders();
        check_functions();
        check_udm_paths();
    }

private:
    bool is_punct(std::size_t i, std::string_view p) const {
        return i < tokens_.size() && tokens_[i].kind == Kind::punct && tokens_[i].text == p;
    }

    void check_braces() {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            if (is_punct(i, "{")) {
                open.push_back(i);
            } else if (is_punct(i, "}")) {
                if (open.empty()) {
                    report_.add(Severity::error, "UnbalancedBraces", "'}' without matching '{'", span_of(tokens_[i]));
                } else {
                    if (open.size() == 1 && body_close_ == npos) body_close_ = i;
                    open.pop_back();
                }
            }
        }
        for (std::size_t idx : open) {
            report_.add(Severity::error, "UnbalancedBraces", "'{' is never closed", span_of(tokens_[idx]));
        }
    }

    void check_wrapper() {
        const Span head = tokens_.empty() ? Span{} : span_of(tokens_.front());
        const bool header_ok = tokens_.size() >= 3 && tokens_[0].kind == Kind::word && tokens_[0].text == "rule" &&
                               tokens_[1].kind == Kind::word && tokens_[1].text.find('.') == std::string::npos &&
                               is_punct(2, "{");
        if (!header_ok) {
            report_.add(Severity::error, "MissingRuleWrapper", "query must start with 'rule <name> {'", head);
            body_begin_ = 0;
            body_end_ = tokens_.size();
            return;
        }
        body_begin_ = 3;
        body_end_ = body_close_ == npos ? tokens_.size() : body_close_;
        if (body_close_ != npos && body_close_ + 1 < tokens_.size()) {
            report_.add(Severity::error, "MissingRuleWrapper", "content after the closing brace of the rule",
                        span_of(tokens_[body_close_ + 1]));
        }
    }

    void collect_sections() {
        int depth = 0;
        for (std::size_t i = body_begin_; i < body_end_; ++i) {
            if (is_punct(i, "{") || is_punct(i, "(")) ++depth;
            if (is_punct(i, "}") || is_punct(i, ")")) --depth;
            if (depth != 0 || tokens_[i].kind != Kind::word || !is_punct(i + 1, ":")) continue;
            const auto& name = tokens_[i].text;
            if (std::find(catalog_.sections.begin(), catalog_.sections.end(), name) == catalog_.sections.end()) {
                report_.add(Severity::error, "UnknownSection", fmt::format("'{}' is not a YARA-L section", name),
                            span_of(tokens_[i]));
                continue;
            }
            if (!sections_.empty()) sections_.back().end = i;
            sections_.push_back({name, i, i + 2, body_end_});
        }
    }

    const Section* section(std::string_view name) const {
        for (const auto& s : sections_) {
            if (s.name == name) return &s;
        }
        return nullptr;
    }

    void check_sections() {
        const Span head = tokens_.empty() ? Span{} : span_of(tokens_.front());
        for (std::string_view required : {"events", "condition"}) {
            if (!section(required)) {
                report_.add(Severity::error, "MissingSection", fmt::format("required section '{}' is missing", required),
                            head);
            }
        }
        std::set<std::string> seen;
        std::ptrdiff_t previous = -1;
        std::string previous_name;
        for (const auto& s : sections_) {
            const auto header = span_of(tokens_[s.header]);
            if (!seen.insert(s.name).second) {
                report_.add(Severity::error, "DuplicateSection", fmt::format("section '{}' appears twice", s.name),
                            header);
                continue;
            }
            const auto rank = std::find(catalog_.sections.begin(), catalog_.sections.end(), s.name) -
                              catalog_.sections.begin();
            if (rank < previous) {
                report_.add(Severity::error, "SectionOrder",
                            fmt::format("section '{}' must come before '{}'", s.name, previous_name), header);
            } else {
                previous = rank;
                previous_name = s.name;
            }
        }
    }

    void check_placeholders() {
        std::set<std::string> bound;
        if (const auto* events = section("events")) {
            for (std::size_t i = events->begin; i < events->end; ++i) {
                if (tokens_[i].kind == Kind::placeholder) bound.insert(tokens_[i].text);
            }
        }
        std::set<std::string> outcome_vars;
        if (const auto* outcome = section("outcome")) {
            for (std::size_t i = outcome->begin; i < outcome->end; ++i) {
                const auto& t = tokens_[i];
                if (t.kind != Kind::placeholder || !t.path.empty() || !is_punct(i + 1, "=")) continue;
                outcome_vars.insert(t.text);
            }
            for (std::size_t i = outcome->begin; i < outcome->end; ++i) {
                const auto& t = tokens_[i];
                if (t.kind != Kind::placeholder || outcome_vars.contains(t.text)) continue;
                require_bound(t, bound, "outcome");
            }
        }
        if (const auto* match = section("match")) {
            for (std::size_t i = match->begin; i < match->end; ++i) {
                const auto& t = tokens_[i];
                if (t.kind == Kind::placeholder || t.kind == Kind::count_ref) require_bound(t, bound, "match");
            }
        }
        if (const auto* condition = section("condition")) {
            std::set<std::string> visible = bound;
            visible.insert(outcome_vars.begin(), outcome_vars.end());
            for (std::size_t i = condition->begin; i < condition->end; ++i) {
                const auto& t = tokens_[i];
                if (t.kind == Kind::placeholder || t.kind == Kind::count_ref) require_bound(t, visible, "condition");
            }
        }
    }

    void require_bound(const Token& t, const std::set<std::string>& bound, std::string_view where) {
        if (bound.contains(t.text)) return;
        report_.add(Severity::error, "UnboundPlaceholder",
                    fmt::format("{} used in {} is never bound in events", t.text, where), span_of(t));
    }

    void check_functions() {
        for (std::size_t i = body_begin_; i < body_end_; ++i) {
            const auto& t = tokens_[i];
            if (t.kind != Kind::word || t.text.find('.') == std::string::npos || !is_punct(i + 1, "(")) continue;
            if (std::find(catalog_.functions.begin(), catalog_.functions.end(), t.text) == catalog_.functions.end()) {
                report_.add(Severity::error, "UnknownFunction",
                            fmt::format("function '{}' is not in the allowed function list", t.text), span_of(t));
            }
        }
    }

    void check_udm_paths() {
        for (std::size_t i = body_begin_; i < body_end_; ++i) {
            const auto& t = tokens_[i];
            if (t.kind != Kind::placeholder || t.path.empty()) continue;
            if (std::find(catalog_.udm_fields.begin(), catalog_.udm_fields.end(), t.path) ==
                catalog_.udm_fields.end()) {
                report_.add(Severity::warning, "UnknownUdmField",
                            fmt::format("'{}' is not in the allowed UDM field list", t.path), span_of(t));
            }
        }
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::vector<Token> tokens_;
    const YaralCatalog& catalog_;
    ValidationReport& report_;
    std::size_t body_close_ = npos;
    std::size_t body_begin_ = 0;
    std::size_t body_end_ = 0;
    std::vector<Section> sections_;
};

}  // namespace

ValidationReport validate_yaral(std::string_view query, const YaralCatalog& catalog, std::string spec_id) {
    ValidationReport report;
    report.spec_id = std::move(spec_id);
    report.platform = Platform::secops;
    if (text::trim(query).empty()) {
        report.add(Severity::error, "EmptyQuery", "query text is empty", {0, query.size()});
        report.finalize();
        return report;
    }
    auto lexed = lex_yaral(query);
    if (lexed.unterminated) {
        report.add(Severity::error, "UnterminatedQuote",
                   fmt::format("literal opened at byte {} is never closed", lexed.unterminated->offset),
                   *lexed.unterminated);
        report.finalize();
        return report;
    }
    YaralChecker(std::move(lexed.tokens), catalog, report).run();
    report.finalize();
    return report;
}

}  // namespace synrag
