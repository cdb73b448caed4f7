#include <synrag/error.hpp>
#include <synrag/text.hpp>
#include <synrag/validators.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <unordered_set>

namespace synrag {

std::string_view to_string(AqlTokenKind kind) {
    switch (kind) {
        case AqlTokenKind::keyword: return "keyword";
        case AqlTokenKind::identifier: return "identifier";
        case AqlTokenKind::quoted_identifier: return "quoted_identifier";
        case AqlTokenKind::string_literal: return "string_literal";
        case AqlTokenKind::number: return "number";
        case AqlTokenKind::op: return "operator";
        case AqlTokenKind::punctuation: return "punctuation";
    }
    return "identifier";
}

namespace {

bool is_reserved(std::string_view upper) {
    static const std::unordered_set<std::string_view> kReserved = {
        "SELECT", "FROM",    "WHERE",   "GROUP",   "BY",     "HAVING", "ORDER",  "LIMIT",  "LAST",
        "START",  "STOP",    "AND",     "OR",      "NOT",    "AS",     "IS",     "NULL",   "IN",
        "LIKE",   "ILIKE",   "MATCHES", "IMATCHES", "BETWEEN", "ASC",  "DESC",   "DISTINCT", "TRUE",
        "FALSE",  "SECONDS", "MINUTES", "HOURS",   "DAYS",   "INTO",   "PARAMETERS", "TEXT", "SEARCH",
        "INOFFENSE", "INCIDR", "COLLATE"};
    return kReserved.contains(upper);
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

bool is_word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<AqlToken> tokenize_aql(std::string_view q) {
    std::vector<AqlToken> tokens;
    std::size_t i = 0;
    while (i < q.size()) {
        const char c = q[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '-' && i + 1 < q.size() && q[i + 1] == '-') {
            while (i < q.size() && q[i] != '\n') ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_word_start(c)) {
            while (i < q.size() && is_word_char(q[i])) ++i;
            std::string word(q.substr(start, i - start));
            const auto kind = is_reserved(upper(word)) ? AqlTokenKind::keyword : AqlTokenKind::identifier;
            tokens.push_back({kind, std::move(word), start, i - start});
            continue;
        }
        if (is_digit(c) || (c == '.' && i + 1 < q.size() && is_digit(q[i + 1]))) {
            while (i < q.size() && (is_digit(q[i]) || q[i] == '.')) ++i;
            tokens.push_back({AqlTokenKind::number, std::string(q.substr(start, i - start)), start, i - start});
            continue;
        }
        if (c == '\'' || c == '"') {
            std::string content;
            ++i;
            bool closed = false;
            while (i < q.size()) {
                if (q[i] == c) {
                    if (i + 1 < q.size() && q[i + 1] == c) {  // doubled quote escape
                        content.push_back(c);
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                content.push_back(q[i++]);
            }
            if (!closed) {
                throw Error(ErrorCode::UnterminatedQuote, std::to_string(start),
                            fmt::format("quote opened at byte {} is never closed", start));
            }
            tokens.push_back({c == '"' ? AqlTokenKind::quoted_identifier : AqlTokenKind::string_literal,
                              std::move(content), start, i - start});
            continue;
        }
        static constexpr std::string_view kTwoCharOps[] = {"<=", ">=", "<>", "!=", "||"};
        bool matched = false;
        for (auto op : kTwoCharOps) {
            if (q.compare(i, 2, op) == 0) {
                tokens.push_back({AqlTokenKind::op, std::string(op), start, 2});
                i += 2;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string_view("=<>+-*/%").find(c) != std::string_view::npos) {
            tokens.push_back({AqlTokenKind::op, std::string(1, c), start, 1});
        } else {
            tokens.push_back({AqlTokenKind::punctuation, std::string(1, c), start, 1});
        }
        ++i;
    }
    return tokens;
}

namespace {

enum class Clause { select, from, where, group_by, having, order_by, limit, last, start, stop };

struct ClauseMark {
    Clause clause;
    std::size_t token;  // index of the clause's first token
    Span span;
};

std::string_view clause_name(Clause c) {
    switch (c) {
        case Clause::select: return "SELECT";
        case Clause::from: return "FROM";
        case Clause::where: return "WHERE";
        case Clause::group_by: return "GROUP BY";
        case Clause::having: return "HAVING";
        case Clause::order_by: return "ORDER BY";
        case Clause::limit: return "LIMIT";
        case Clause::last: return "LAST";
        case Clause::start: return "START";
        case Clause::stop: return "STOP";
    }
    return "?";
}

// Position in the canonical order SELECT → FROM → WHERE → GROUP BY → HAVING
// → ORDER BY → LIMIT → LAST | START … STOP.
int clause_rank(Clause c) {
    switch (c) {
        case Clause::select: return 0;
        case Clause::from: return 1;
        case Clause::where: return 2;
        case Clause::group_by: return 3;
        case Clause::having: return 4;
        case Clause::order_by: return 5;
        case Clause::limit: return 6;
        case Clause::last: return 7;
        case Clause::start: return 7;
        case Clause::stop: return 8;
    }
    return 0;
}

Span span_of(const AqlToken& t) { return {t.offset, t.length}; }

Span span_between(const AqlToken& a, const AqlToken& b) { return {a.offset, b.offset + b.length - a.offset}; }

class AqlChecker {
public:
    AqlChecker(std::vector<AqlToken> tokens, const AqlCatalog& catalog, ValidationReport& report)
        : tokens_(std::move(tokens)), catalog_(catalog), report_(report) {
        for (const auto& kw : catalog_.keywords) {
            // Multi-word catalog keywords ("GROUP BY") admit each word.
            std::string word;
            for (char ch : upper(kw) + " ") {
                if (ch == ' ') {
                    if (!word.empty()) keyword_words_.insert(word);
                    word.clear();
                } else {
                    word.push_back(ch);
                }
            }
        }
        for (const auto& f : catalog_.fields) fields_.insert(f);
        for (const auto& f : catalog_.functions) functions_.insert(upper(f));
        for (const auto& d : catalog_.databases) databases_.insert(upper(d));
        for (const auto& f : catalog_.fields) {
            if (f.find(' ') != std::string::npos) multi_word_fields_.push_back(f);
        }
        // Longest names first so the greedy match prefers them.
        std::sort(multi_word_fields_.begin(), multi_word_fields_.end(),
                  [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
    }

    void run() {
        check_clauses();
        check_from_target();
        check_identifiers();
        check_parentheses();
    }

private:
    const AqlToken* at(std::size_t i) const { return i < tokens_.size() ? &tokens_[i] : nullptr; }

    bool is_keyword(std::size_t i, std::string_view word) const {
        const auto* t = at(i);
        return t && t->kind == AqlTokenKind::keyword && text::iequals(t->text, word);
    }

    bool is_punct(std::size_t i, std::string_view p) const {
        const auto* t = at(i);
        return t && t->kind == AqlTokenKind::punctuation && t->text == p;
    }

    void check_clauses() {
        int depth = 0;
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            const auto& t = tokens_[i];
            if (t.kind == AqlTokenKind::punctuation) {
                if (t.text == "(") ++depth;
                if (t.text == ")") --depth;
                continue;
            }
            if (t.kind != AqlTokenKind::keyword || depth != 0) continue;
            const std::string word = upper(t.text);
            std::optional<Clause> clause;
            Span span = span_of(t);
            if (word == "SELECT") clause = Clause::select;
            else if (word == "FROM") clause = Clause::from;
            else if (word == "WHERE") clause = Clause::where;
            else if (word == "HAVING") clause = Clause::having;
            else if (word == "LIMIT") clause = Clause::limit;
            else if (word == "LAST") clause = Clause::last;
            else if (word == "START") clause = Clause::start;
            else if (word == "STOP") clause = Clause::stop;
            else if (word == "GROUP" || word == "ORDER") {
                if (!is_keyword(i + 1, "BY")) {
                    report_.add(Severity::error, "ClauseOrder", word + " must be followed by BY", span);
                    continue;
                }
                clause = word == "GROUP" ? Clause::group_by : Clause::order_by;
                span = span_between(t, tokens_[i + 1]);
            }
            if (clause) clauses_.push_back({*clause, i, span});
        }

        const auto has = [&](Clause c) {
            return std::any_of(clauses_.begin(), clauses_.end(), [&](const ClauseMark& m) { return m.clause == c; });
        };
        const Span head = tokens_.empty() ? Span{} : span_of(tokens_.front());
        if (!has(Clause::select)) report_.add(Severity::error, "MissingClause", "query has no SELECT clause", head);
        if (!has(Clause::from)) report_.add(Severity::error, "MissingClause", "query has no FROM clause", head);

        if (!clauses_.empty() && clauses_.front().clause != Clause::select) {
            report_.add(Severity::error, "ClauseOrder",
                        fmt::format("query must begin with SELECT, found {}", clause_name(clauses_.front().clause)),
                        clauses_.front().span);
        } else if (!clauses_.empty() && clauses_.front().token != 0) {
            report_.add(Severity::error, "ClauseOrder", "unexpected tokens before SELECT", head);
        }

        int previous = -1;
        std::optional<Clause> previous_clause;
        for (const auto& mark : clauses_) {
            const int rank = clause_rank(mark.clause);
            if (mark.clause == Clause::stop && previous_clause != Clause::start) {
                report_.add(Severity::error, "ClauseOrder", "STOP must directly follow START", mark.span);
            } else if (previous_clause && rank <= previous) {
                report_.add(Severity::error, "ClauseOrder",
                            fmt::format("{} cannot follow {}; expected order SELECT → FROM → WHERE → GROUP BY → "
                                        "HAVING → ORDER BY → LIMIT → LAST",
                                        clause_name(mark.clause), clause_name(*previous_clause)),
                            mark.span);
            }
            if (mark.clause == Clause::start && !std::any_of(clauses_.begin(), clauses_.end(), [](const ClauseMark& m) {
                    return m.clause == Clause::stop;
                })) {
                report_.add(Severity::error, "ClauseOrder", "START requires a matching STOP", mark.span);
            }
            previous = std::max(previous, rank);
            previous_clause = mark.clause;
        }
    }

    void check_from_target() {
        for (const auto& mark : clauses_) {
            if (mark.clause != Clause::from) continue;
            from_target_ = mark.token + 1;
            const auto* target = at(mark.token + 1);
            if (!target || (target->kind != AqlTokenKind::identifier &&
                            target->kind != AqlTokenKind::quoted_identifier)) {
                report_.add(Severity::error, "UnknownDatabase", "FROM must name a database", mark.span);
                continue;
            }
            if (!databases_.contains(upper(target->text))) {
                report_.add(Severity::error, "UnknownDatabase",
                            fmt::format("'{}' is not an allowed database", target->text), span_of(*target));
            }
        }
    }

    // Length (in tokens) of an unquoted multi-word field starting at i, or 0.
    std::size_t multi_word_field_at(std::size_t i) const {
        for (const auto& field : multi_word_fields_) {
            std::size_t j = i;
            std::size_t pos = 0;
            bool ok = true;
            while (pos < field.size()) {
                const auto* t = at(j);
                const std::size_t space = field.find(' ', pos);
                const std::string_view word =
                    std::string_view(field).substr(pos, space == std::string::npos ? std::string::npos : space - pos);
                if (!t || (t->kind != AqlTokenKind::identifier && t->kind != AqlTokenKind::keyword) ||
                    t->text != word) {
                    ok = false;
                    break;
                }
                ++j;
                pos = space == std::string::npos ? field.size() : space + 1;
            }
            if (ok && j - i > 1) return j - i;
        }
        return 0;
    }

    void check_identifiers() {
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            const auto& t = tokens_[i];
            if (i == from_target_) continue;

            if (t.kind == AqlTokenKind::identifier || t.kind == AqlTokenKind::keyword) {
                if (const std::size_t n = multi_word_field_at(i)) {
                    const auto span = span_between(t, tokens_[i + n - 1]);
                    report_.add(Severity::warning, "MissingQuotes",
                                fmt::format("multi-word field '{}' must be double-quoted", words_in(span)), span);
                    i += n - 1;
                    continue;
                }
            }

            const bool after_as = i > 0 && is_keyword(i - 1, "AS");
            switch (t.kind) {
                case AqlTokenKind::keyword:
                    if (!keyword_words_.contains(upper(t.text))) {
                        report_.add(Severity::error, "UnknownKeyword",
                                    fmt::format("keyword '{}' is not in the allowed keyword list", t.text),
                                    span_of(t));
                    }
                    break;
                case AqlTokenKind::identifier:
                    if (after_as) {
                        aliases_.insert(t.text);
                    } else if (is_punct(i + 1, "(")) {
                        if (!functions_.contains(upper(t.text))) {
                            report_.add(Severity::error, "UnknownFunction",
                                        fmt::format("function '{}' is not in the allowed function list", t.text),
                                        span_of(t));
                        }
                    } else if (!fields_.contains(t.text) && !aliases_.contains(t.text)) {
                        report_.add(Severity::error, "UnknownField",
                                    fmt::format("'{}' is not a known field, function or alias", t.text), span_of(t));
                    }
                    break;
                case AqlTokenKind::quoted_identifier:
                    if (after_as) {
                        aliases_.insert(t.text);
                    } else if (!fields_.contains(t.text) && !aliases_.contains(t.text)) {
                        report_.add(Severity::error, "UnknownField",
                                    fmt::format("\"{}\" is not a known field or alias", t.text), span_of(t));
                    }
                    break;
                default:
                    break;
            }
        }
    }

    void check_parentheses() {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            if (is_punct(i, "(")) {
                open.push_back(i);
            } else if (is_punct(i, ")")) {
                if (open.empty()) {
                    report_.add(Severity::error, "UnbalancedParentheses", "')' without matching '('",
                                span_of(tokens_[i]));
                } else {
                    open.pop_back();
                }
            }
        }
        for (std::size_t idx : open) {
            report_.add(Severity::error, "UnbalancedParentheses", "'(' is never closed", span_of(tokens_[idx]));
        }
    }

    std::string words_in(Span span) const {
        std::string out;
        for (const auto& t : tokens_) {
            if (t.offset >= span.offset && t.offset + t.length <= span.offset + span.length) {
                if (!out.empty()) out.push_back(' ');
                out += t.text;
            }
        }
        return out;
    }

    std::vector<AqlToken> tokens_;
    const AqlCatalog& catalog_;
    ValidationReport& report_;
    std::vector<ClauseMark> clauses_;
    std::size_t from_target_ = static_cast<std::size_t>(-1);
    std::set<std::string> keyword_words_;
    std::set<std::string> fields_;
    std::set<std::string> functions_;
    std::set<std::string> databases_;
    std::set<std::string> aliases_;
    std::vector<std::string> multi_word_fields_;
};

}  // namespace

ValidationReport validate_aql(std::string_view query, const AqlCatalog& catalog, std::string spec_id) {
    ValidationReport report;
    report.spec_id = std::move(spec_id);
    report.platform = Platform::qradar;
    if (text::trim(query).empty()) {
        report.add(Severity::error, "EmptyQuery", "query text is empty", {0, query.size()});
        report.finalize();
        return report;
    }
    std::vector<AqlToken> tokens;
    try {
        tokens = tokenize_aql(query);
    } catch (const Error& e) {
        const std::size_t pos = std::stoul(e.subject());
        report.add(Severity::error, "UnterminatedQuote", e.what(), {pos, query.size() - pos});
        report.finalize();
        return report;
    }
    AqlChecker(std::move(tokens), catalog, report).run();
    report.finalize();
    return report;
}

}  // namespace synrag
