#include <synrag/ingest.hpp>
#include <synrag/text.hpp>

#include <boost/uuid/name_generator_sha1.hpp>
#include <boost/uuid/string_generator.hpp>
#include <boost/uuid/uuid_io.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <deque>
#include <unordered_set>

namespace synrag {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Corpus loading
// ---------------------------------------------------------------------------

std::string document_uuid(Platform origin, std::string_view relative_path) {
    static const boost::uuids::uuid kNamespace =
        boost::uuids::string_generator()("6f1c2a4e-9b1d-5c3e-8a7f-2d4b6e8f0a1c");
    boost::uuids::name_generator_sha1 gen(kNamespace);
    const std::string name = fmt::format("{}/{}", to_string(origin), relative_path);
    return boost::uuids::to_string(gen(name));
}

namespace {

bool has_extension(const fs::path& p, std::initializer_list<std::string_view> exts) {
    const std::string ext = text::to_lower(p.extension().string());
    return std::find(exts.begin(), exts.end(), ext) != exts.end();
}

CorpusLoad load_dir(const fs::path& root, Platform origin, bool include_html) {
    if (!fs::is_directory(root)) {
        throw Error(ErrorCode::DirNotFound, root.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        const auto& p = entry.path();
        if (has_extension(p, {".md"}) || (include_html && has_extension(p, {".html", ".htm"}))) {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());

    CorpusLoad out;
    for (const auto& file : files) {
        const auto started = std::chrono::steady_clock::now();
        std::string contents = text::read_file(file);
        if (!text::decode_utf8(contents)) {
            out.issues.push_back({file, ErrorCode::DecodeError, "not valid UTF-8"});
            spdlog::error("failed to decode {}: not valid UTF-8", file.generic_string());
            continue;
        }
        if (has_extension(file, {".html", ".htm"})) {
            try {
                contents = extract_article_html(contents);
            } catch (const Error& e) {
                out.issues.push_back({file, e.code(), e.what()});
                spdlog::warn("skipping {}: {}", file.generic_string(), e.what());
                continue;
            }
        }
        if (text::trim(contents).empty()) {
            out.issues.push_back({file, ErrorCode::EmptyDocument, "empty document"});
            spdlog::warn("skipping {}: empty document", file.generic_string());
            continue;
        }
        const std::string rel = fs::relative(file, root).generic_string();
        out.documents.push_back({document_uuid(origin, rel), origin, file.generic_string(),
                                 std::move(contents)});
        const auto elapsed = std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - started);
        spdlog::info("loaded {} in {:.3f}ms", file.generic_string(), elapsed.count());
    }
    return out;
}

}  // namespace

CorpusLoad load_markdown_dir(const fs::path& root, Platform origin) {
    return load_dir(root, origin, false);
}

CorpusLoad load_corpus_dir(const fs::path& root, Platform origin) {
    return load_dir(root, origin, true);
}

// ---------------------------------------------------------------------------
// <article> extraction
// ---------------------------------------------------------------------------

namespace {

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == ':';
}

bool is_block_tag(std::string_view name) {
    static const std::unordered_set<std::string_view> kBlocks = {
        "address", "article", "aside", "blockquote", "br", "dd", "details", "dialog",
        "div", "dl", "dt", "fieldset", "figcaption", "figure", "footer", "form",
        "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main",
        "nav", "ol", "p", "pre", "section", "summary", "table", "tbody", "td",
        "tfoot", "th", "thead", "tr", "ul"};
    return kBlocks.contains(name);
}

bool is_raw_text_tag(std::string_view name) {
    return name == "script" || name == "style" || name == "noscript" || name == "template";
}

struct Tag {
    std::string name;  // lowercase
    bool closing = false;
    std::size_t end = 0;  // one past '>'
};

// Parses a tag starting at html[pos] == '<'. Returns nullopt for text that
// merely looks like '<'.
std::optional<Tag> parse_tag(std::string_view html, std::size_t pos) {
    std::size_t i = pos + 1;
    Tag tag;
    if (i < html.size() && html[i] == '/') {
        tag.closing = true;
        ++i;
    }
    const std::size_t name_start = i;
    while (i < html.size() && is_name_char(html[i])) ++i;
    if (i == name_start) return std::nullopt;
    tag.name = text::to_lower(html.substr(name_start, i - name_start));
    char quote = 0;
    for (; i < html.size(); ++i) {
        const char c = html[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '>') {
            tag.end = i + 1;
            return tag;
        }
    }
    tag.end = html.size();
    return tag;
}

std::optional<char32_t> named_entity(std::string_view name) {
    if (name == "amp") return U'&';
    if (name == "lt") return U'<';
    if (name == "gt") return U'>';
    if (name == "quot") return U'"';
    if (name == "apos") return U'\'';
    if (name == "nbsp") return U' ';
    if (name == "copy") return U'©';
    if (name == "mdash") return U'—';
    if (name == "ndash") return U'–';
    if (name == "hellip") return U'…';
    return std::nullopt;
}

// Decodes an entity at html[pos] == '&'; returns consumed length, or 0.
std::size_t decode_entity(std::string_view html, std::size_t pos, std::string& out) {
    const std::size_t semi = html.find(';', pos);
    if (semi == std::string_view::npos || semi - pos > 10) return 0;
    const std::string_view body = html.substr(pos + 1, semi - pos - 1);
    std::optional<char32_t> cp;
    if (body.size() > 1 && body[0] == '#') {
        const bool hex = body[1] == 'x' || body[1] == 'X';
        const std::string digits(body.substr(hex ? 2 : 1));
        if (digits.empty()) return 0;
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(digits, &used, hex ? 16 : 10);
            if (used != digits.size() || v > 0x10FFFF || (v >= 0xD800 && v <= 0xDFFF)) return 0;
            cp = static_cast<char32_t>(v);
        } catch (const std::exception&) {
            return 0;
        }
    } else {
        cp = named_entity(body);
    }
    if (!cp) return 0;
    text::append_utf8(out, *cp);
    return semi - pos + 1;
}

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
    const std::string lower = text::to_lower(hay);
    return lower.find(needle, from);
}

}  // namespace

std::string extract_article_html(std::string_view html) {
    // One pass over the markup; text is kept only while inside the first
    // <article>. Comments and raw-text elements are skipped everywhere so
    // that tag-like text inside them is never mistaken for markup.
    std::string raw;  // '\n' only at block boundaries
    bool found = false;
    int depth = 0;
    std::size_t i = 0;
    while (i < html.size()) {
        const char c = html[i];
        if (c == '<') {
            if (html.compare(i, 4, "<!--") == 0) {
                const std::size_t close = html.find("-->", i + 4);
                i = close == std::string_view::npos ? html.size() : close + 3;
                continue;
            }
            if (auto tag = parse_tag(html, i)) {
                if (tag->name == "article") {
                    if (!tag->closing) {
                        found = true;
                        ++depth;
                    } else if (depth > 0 && --depth == 0) {
                        break;
                    }
                }
                if (depth > 0 && is_block_tag(tag->name)) raw.push_back('\n');
                i = tag->end;
                if (!tag->closing && is_raw_text_tag(tag->name)) {
                    const std::size_t close = find_ci(html, "</" + tag->name, i);
                    if (close == std::string_view::npos) break;
                    auto end_tag = parse_tag(html, close);
                    i = end_tag ? end_tag->end : close + 1;
                }
                continue;
            }
        }
        if (depth == 0) {
            ++i;
            continue;
        }
        if (c == '&') {
            if (std::size_t used = decode_entity(html, i, raw)) {
                i += used;
                continue;
            }
        }
        raw.push_back(c == '\n' || c == '\r' ? ' ' : c);
        ++i;
    }
    if (!found) {
        throw Error(ErrorCode::NoArticleTag, "", "page has no <article> element");
    }

    // Collapse whitespace inside each line and drop blank lines.
    std::string out;
    std::size_t start = 0;
    while (start <= raw.size()) {
        std::size_t end = raw.find('\n', start);
        if (end == std::string::npos) end = raw.size();
        std::string line;
        bool pending_space = false;
        for (std::size_t k = start; k < end; ++k) {
            const char ch = raw[k];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                pending_space = !line.empty();
            } else {
                if (pending_space) line.push_back(' ');
                pending_space = false;
                line.push_back(ch);
            }
        }
        if (!line.empty()) {
            if (!out.empty()) out.push_back('\n');
            out += line;
        }
        start = end + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chunking
// ---------------------------------------------------------------------------

namespace {

constexpr std::u32string_view kSeparators[] = {U"\n\n", U"\n", U" ", U""};
constexpr std::size_t kSeparatorCount = std::size(kSeparators);

class Splitter {
public:
    Splitter(std::u32string_view text, ChunkParams params) : text_(text), params_(params) {}

    std::vector<ChunkSpan> run() {
        if (!text_.empty()) split(0, text_.size(), 0);
        return std::move(out_);
    }

private:
    void split(std::size_t begin, std::size_t end, std::size_t first_sep) {
        const std::u32string_view segment = text_.substr(begin, end - begin);
        std::size_t chosen = kSeparatorCount - 1;
        for (std::size_t s = first_sep; s < kSeparatorCount; ++s) {
            if (kSeparators[s].empty() || segment.find(kSeparators[s]) != std::u32string_view::npos) {
                chosen = s;
                break;
            }
        }
        const std::u32string_view sep = kSeparators[chosen];
        const bool has_finer = !sep.empty() && chosen + 1 < kSeparatorCount;

        std::vector<ChunkSpan> pieces;
        if (sep.empty()) {
            for (std::size_t k = begin; k < end; ++k) pieces.push_back({k, 1});
        } else {
            std::size_t piece_start = begin;
            std::size_t search = 0;
            while (true) {
                const std::size_t hit = segment.find(sep, search);
                if (hit == std::u32string_view::npos) break;
                if (begin + hit > piece_start) pieces.push_back({piece_start, begin + hit - piece_start});
                piece_start = begin + hit;
                search = hit + sep.size();
            }
            if (end > piece_start) pieces.push_back({piece_start, end - piece_start});
        }

        std::vector<ChunkSpan> good;
        for (const auto& piece : pieces) {
            if (piece.length < params_.chunk_size) {
                good.push_back(piece);
                continue;
            }
            if (!good.empty()) {
                merge(good);
                good.clear();
            }
            if (has_finer) {
                split(piece.start, piece.start + piece.length, chosen + 1);
            } else {
                out_.push_back(piece);
            }
        }
        if (!good.empty()) merge(good);
    }

    // Pieces are contiguous, so a run of them is a single span.
    void merge(const std::vector<ChunkSpan>& pieces) {
        std::deque<ChunkSpan> current;
        std::size_t total = 0;
        const auto emit = [&] {
            const std::size_t start = current.front().start;
            const std::size_t stop = current.back().start + current.back().length;
            out_.push_back({start, stop - start});
        };
        for (const auto& piece : pieces) {
            if (total + piece.length > params_.chunk_size && !current.empty()) {
                emit();
                while (total > params_.overlap ||
                       (total + piece.length > params_.chunk_size && total > 0)) {
                    total -= current.front().length;
                    current.pop_front();
                }
            }
            current.push_back(piece);
            total += piece.length;
        }
        if (!current.empty()) emit();
    }

    std::u32string_view text_;
    ChunkParams params_;
    std::vector<ChunkSpan> out_;
};

void check_params(ChunkParams params) {
    if (params.overlap == 0 || params.overlap >= params.chunk_size) {
        throw Error(ErrorCode::InvalidChunkParams,
                    fmt::format("chunk_size={}, overlap={}", params.chunk_size, params.overlap),
                    "require 0 < overlap < chunk_size");
    }
}

}  // namespace

std::vector<ChunkSpan> split_spans(std::u32string_view text, ChunkParams params) {
    check_params(params);
    return Splitter(text, params).run();
}

std::vector<DocumentChunk> chunk_document(const SourceDocument& doc, ChunkParams params) {
    check_params(params);
    const auto decoded = text::decode_utf8(doc.text);
    if (!decoded) {
        throw Error(ErrorCode::DecodeError, doc.source_path, "not valid UTF-8");
    }
    const auto spans = split_spans(*decoded, params);
    std::vector<DocumentChunk> chunks;
    chunks.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        DocumentChunk chunk;
        chunk.chunk_id = fmt::format("{}:{:05d}", doc.doc_id, i);
        chunk.doc_id = doc.doc_id;
        chunk.origin = doc.origin;
        chunk.source_path = doc.source_path;
        chunk.ordinal = i;
        chunk.start_offset = spans[i].start;
        chunk.text = text::encode_utf8(std::u32string_view(*decoded).substr(spans[i].start, spans[i].length));
        chunks.push_back(std::move(chunk));
    }
    spdlog::info("chunked {} into {} chunks", doc.doc_id, chunks.size());
    return chunks;
}

}  // namespace synrag
