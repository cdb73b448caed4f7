#pragma once

#include <synrag/error.hpp>
#include <synrag/platform.hpp>

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace synrag {

struct SourceDocument {
    std::string doc_id;
    Platform origin = Platform::qradar;
    std::string source_path;
    std::string text;
};

/// A retrieval unit. Offsets and lengths count Unicode scalar values.
struct DocumentChunk {
    std::string chunk_id;
    std::string doc_id;
    Platform origin = Platform::qradar;
    std::string source_path;
    std::size_t ordinal = 0;
    std::size_t start_offset = 0;
    std::string text;

    bool operator==(const DocumentChunk&) const = default;
};

struct IngestIssue {
    std::filesystem::path path;
    ErrorCode code;
    std::string message;
};

struct CorpusLoad {
    std::vector<SourceDocument> documents;  ///< ordered by source_path
    std::vector<IngestIssue> issues;        ///< DecodeError / EmptyDocument / NoArticleTag
};

/// Recursively loads every `.md` file below `root`.
CorpusLoad load_markdown_dir(const std::filesystem::path& root, Platform origin);

/// Recursively loads `.md` files plus saved `.html`/`.htm` pages, the latter
/// reduced to the text of their first `<article>` element.
CorpusLoad load_corpus_dir(const std::filesystem::path& root, Platform origin);

/// Name-based UUID for a document, stable for a given origin and path
/// relative to the corpus root.
std::string document_uuid(Platform origin, std::string_view relative_path);

/// Text content of the first `<article>` element: tags stripped, block
/// elements on their own lines, entities decoded. Throws Error(NoArticleTag).
std::string extract_article_html(std::string_view html);

struct ChunkParams {
    std::size_t chunk_size = 500;
    std::size_t overlap = 100;
};

/// Recursive separator split ("\n\n", "\n", " ", then single characters)
/// followed by a greedy merge with up to `overlap` characters carried between
/// consecutive chunks. Separators stay attached to the front of the piece
/// that follows them, so chunk ranges tile the document.
std::vector<DocumentChunk> chunk_document(const SourceDocument& doc, ChunkParams params = {});

/// Chunk boundaries only, as (start, length) pairs in scalar values.
struct ChunkSpan {
    std::size_t start = 0;
    std::size_t length = 0;
    bool operator==(const ChunkSpan&) const = default;
};
std::vector<ChunkSpan> split_spans(std::u32string_view text, ChunkParams params = {});

}  // namespace synrag
