#include "test_util.hpp"

#include <synrag/ingest.hpp>
#include <synrag/text.hpp>

#include <random>

using namespace synrag;

namespace {

std::u32string random_document(std::mt19937& rng, std::size_t length) {
    static const std::u32string alphabet = U"abcdefghij klmno\n\n\npqrs  tuv\nwxyzé中 ";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::u32string out;
    for (std::size_t i = 0; i < length; ++i) out.push_back(alphabet[pick(rng)]);
    return out;
}

void check_span_invariants(std::u32string_view doc, const std::vector<ChunkSpan>& spans, ChunkParams params) {
    if (doc.empty()) {
        CHECK(spans.empty());
        return;
    }
    REQUIRE_FALSE(spans.empty());
    CHECK(spans.front().start == 0);
    CHECK(spans.back().start + spans.back().length == doc.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        CHECK(spans[i].length > 0);
        CHECK(spans[i].length <= params.chunk_size);
        if (i == 0) continue;
        CHECK(spans[i].start > spans[i - 1].start);
        // No gaps: each chunk starts at or before the previous end.
        CHECK(spans[i].start <= spans[i - 1].start + spans[i - 1].length);
    }
}

}  // namespace

TEST_SUITE("ingest") {
    TEST_CASE("no-separator text falls back to a sliding window") {
        const std::u32string doc(1200, U'x');
        const auto spans = split_spans(doc, {500, 100});
        std::vector<std::size_t> starts;
        for (const auto& s : spans) starts.push_back(s.start);
        // Window 500, stride 500 - 100: starts 0, 400, 800 cover 1200.
        CHECK(starts == std::vector<std::size_t>{0, 400, 800});
        CHECK(spans.back().length == 400);
    }

    TEST_CASE("short text is one chunk") {
        const auto spans = split_spans(U"hello world", {500, 100});
        REQUIRE(spans.size() == 1);
        CHECK(spans[0] == ChunkSpan{0, 11});
    }

    TEST_CASE("paragraph boundaries are preferred") {
        const std::u32string para(300, U'a');
        const std::u32string doc = para + U"\n\n" + para;
        const auto spans = split_spans(doc, {500, 100});
        REQUIRE(spans.size() == 2);
        CHECK(spans[0] == ChunkSpan{0, 300});
        CHECK(spans[1].start == 300);
    }

    TEST_CASE("invalid parameters") {
        SourceDocument doc{"d", Platform::qradar, "a.md", "text"};
        CHECK_ERROR_CODE(chunk_document(doc, {500, 0}), ErrorCode::InvalidChunkParams);
        CHECK_ERROR_CODE(chunk_document(doc, {500, 500}), ErrorCode::InvalidChunkParams);
        CHECK_ERROR_CODE(chunk_document(doc, {0, 0}), ErrorCode::InvalidChunkParams);
    }

    TEST_CASE("random documents keep coverage, bound and monotonicity") {
        std::mt19937 rng(7);
        std::uniform_int_distribution<std::size_t> len(0, 3000);
        for (int i = 0; i < 30; ++i) {
            const auto doc = random_document(rng, len(rng));
            for (ChunkParams params : {ChunkParams{500, 100}, ChunkParams{64, 16}}) {
                check_span_invariants(doc, split_spans(doc, params), params);
            }
        }
    }

    TEST_CASE("chunk ids, ordinals and offsets") {
        SourceDocument doc{"doc", Platform::secops, "x.md", std::string(1200, 'y')};
        const auto chunks = chunk_document(doc);
        REQUIRE(chunks.size() == 3);
        CHECK(chunks[0].chunk_id == "doc:00000");
        CHECK(chunks[2].chunk_id == "doc:00002");
        CHECK(chunks[1].ordinal == 1);
        CHECK(chunks[1].start_offset == 400);
        CHECK(chunks[1].origin == Platform::secops);
        CHECK(chunks[1].text == std::string(500, 'y'));
    }

    TEST_CASE("offsets count code points, not bytes") {
        std::string text;
        for (int i = 0; i < 600; ++i) text += "é";
        SourceDocument doc{"d", Platform::qradar, "u.md", text};
        const auto chunks = chunk_document(doc);
        REQUIRE(chunks.size() == 2);
        CHECK(chunks[1].start_offset == 400);
        CHECK(chunks[0].text.size() == 1000);  // 500 two-byte scalars
    }

    TEST_CASE("article extraction") {
        const std::string html = R"(<html><head><script>var x = "<article>";</script></head>
<body><nav>menu</nav><article><h1>Title</h1><p>First &amp; <b>bold</b>
   paragraph &#x41;&#66;</p><!-- <p>hidden</p> --><ul><li>one</li><li>two</li></ul></article>
<article><p>second article</p></article></body></html>)";
        // Expected values frozen from tools/oracles/article_text.py.
        CHECK(extract_article_html(html) == "Title\nFirst & bold paragraph AB\none\ntwo");
        CHECK_ERROR_CODE(extract_article_html("<html><body><p>none</p></body></html>"), ErrorCode::NoArticleTag);

        const auto page = text::read_file(testutil::data_dir() / "corpus" / "secops" / "yaral_functions.html");
        CHECK(extract_article_html(page) ==
              "Functions\nRegular expressions: re.regex(field, `pattern`) tests a field, and re.capture(field, "
              "`(group)`) extracts the first capture group into a placeholder.\nStrings: strings.lower, "
              "strings.concat and strings.coalesce.\nNetworks: net.ip_in_range_cidr($e.target.ip, \"10.0.0.0/8\") "
              "is true for private addresses & can be negated with not.\nOutcome aggregates\ncount and "
              "count_distinct\nsum, max and min\narray_distinct");
    }

    TEST_CASE("corpus loading reports bad files and keeps going") {
        const auto dir = testutil::scratch("corpus");
        text::write_file(dir / "good.md", "# Heading\n\nBody text.");
        text::write_file(dir / "sub" / "nested.md", "Nested.");
        text::write_file(dir / "empty.md", "   \n");
        text::write_file(dir / "binary.md", std::string("\xff\xfe bad", 6));
        text::write_file(dir / "page.html", "<article><p>Page</p></article>");
        text::write_file(dir / "noarticle.html", "<p>x</p>");
        text::write_file(dir / "skip.txt", "not loaded");

        const auto md = load_markdown_dir(dir, Platform::qradar);
        CHECK(md.documents.size() == 2);
        CHECK(md.issues.size() == 2);

        const auto all = load_corpus_dir(dir, Platform::qradar);
        REQUIRE(all.documents.size() == 3);
        CHECK(all.issues.size() == 3);
        std::vector<ErrorCode> codes;
        for (const auto& issue : all.issues) codes.push_back(issue.code);
        CHECK(std::count(codes.begin(), codes.end(), ErrorCode::DecodeError) == 1);
        CHECK(std::count(codes.begin(), codes.end(), ErrorCode::EmptyDocument) == 1);
        CHECK(std::count(codes.begin(), codes.end(), ErrorCode::NoArticleTag) == 1);
        CHECK(all.documents[0].source_path < all.documents[1].source_path);
    }

    TEST_CASE("document ids are stable name-based uuids") {
        const auto a = document_uuid(Platform::qradar, "docs/a.md");
        CHECK(a == document_uuid(Platform::qradar, "docs/a.md"));
        CHECK(a != document_uuid(Platform::secops, "docs/a.md"));
        CHECK(a.size() == 36);
        CHECK(a[14] == '5');  // version 5 (SHA-1)
    }
}
