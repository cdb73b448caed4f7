#pragma once

#include <synrag/embedding.hpp>
#include <synrag/ingest.hpp>
#include <synrag/platform.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace synrag {

struct IndexEntry {
    DocumentChunk chunk;
    EmbeddingVector vector;

    bool operator==(const IndexEntry&) const = default;
};

/// Exact-search store of chunk embeddings. Entries keep insertion order;
/// every vector has the index dimension, values are finite and chunk ids
/// are unique.
class VectorIndex {
public:
    VectorIndex(std::size_t dimension, std::string provider_id);

    /// Throws Error(DimensionMismatch) or Error(InvalidArgument) (duplicate
    /// id, non-finite value).
    void add(DocumentChunk chunk, EmbeddingVector vector);

    std::size_t dimension() const { return dimension_; }
    const std::string& provider_id() const { return provider_id_; }
    const std::vector<IndexEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const IndexEntry* find(const std::string& chunk_id) const;

    friend bool operator==(const VectorIndex& a, const VectorIndex& b) {
        return a.dimension_ == b.dimension_ && a.provider_id_ == b.provider_id_ && a.entries_ == b.entries_;
    }

private:
    std::size_t dimension_;
    std::string provider_id_;
    std::vector<IndexEntry> entries_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

/// dot(a, b) / (|a| |b|). Throws Error(DimensionMismatch) or Error(ZeroVector).
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct ScoredChunk {
    std::string chunk_id;
    double score = 0.0;

    bool operator==(const ScoredChunk&) const = default;
};

/// The k best entries by cosine score (descending, ties by ascending
/// chunk id) among entries whose origin matches `origin_filter` (all
/// entries when nullopt). Stored zero vectors score 0. Throws
/// Error(EmptyIndex), Error(ZeroVector) for a zero query,
/// Error(InvalidArgument) when k == 0.
std::vector<ScoredChunk> top_k(const VectorIndex& index, const EmbeddingVector& query, std::size_t k,
                               std::optional<Platform> origin_filter);

/// JSON Lines: a header object {format, version, dimension, provider_id,
/// count} followed by one object per entry. Every line ends with '\n'.
void write_index(const VectorIndex& index, std::ostream& out);
std::string serialize_index(const VectorIndex& index);
void persist(const VectorIndex& index, const std::filesystem::path& path);

struct IndexLoad {
    VectorIndex index;
    std::vector<std::string> warnings;  ///< ProviderMismatch and similar
};

/// Parses the JSON Lines form. Throws Error(CorruptIndexFile) on any
/// structural problem, including a missing final newline or an entry count
/// that disagrees with the header. A provider id different from
/// `configured_provider` (when non-empty) yields a warning, not an error.
IndexLoad parse_index(std::string_view contents, std::string_view configured_provider = {});
IndexLoad load(const std::filesystem::path& path, std::string_view configured_provider = {});

}  // namespace synrag
