#include <synrag/error.hpp>
#include <synrag/text.hpp>
#include <synrag/vectorstore.hpp>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace synrag {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormatName = "synrag-index";
constexpr int kFormatVersion = 1;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

VectorIndex::VectorIndex(std::size_t dimension, std::string provider_id)
    : dimension_(dimension), provider_id_(std::move(provider_id)) {
    if (dimension_ == 0) {
        throw Error(ErrorCode::InvalidArgument, "dimension", "must be positive");
    }
}

void VectorIndex::add(DocumentChunk chunk, EmbeddingVector vector) {
    if (vector.dimension() != dimension_) {
        throw Error(ErrorCode::DimensionMismatch, chunk.chunk_id,
                    "expected " + std::to_string(dimension_) + ", got " + std::to_string(vector.dimension()));
    }
    if (!std::all_of(vector.values.begin(), vector.values.end(), [](double x) { return std::isfinite(x); })) {
        throw Error(ErrorCode::InvalidArgument, chunk.chunk_id, "non-finite vector value");
    }
    if (by_id_.contains(chunk.chunk_id)) {
        throw Error(ErrorCode::InvalidArgument, chunk.chunk_id, "duplicate chunk id");
    }
    by_id_.emplace(chunk.chunk_id, entries_.size());
    entries_.push_back({std::move(chunk), std::move(vector)});
}

const IndexEntry* VectorIndex::find(const std::string& chunk_id) const {
    const auto it = by_id_.find(chunk_id);
    return it == by_id_.end() ? nullptr : &entries_[it->second];
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "",
                    std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension()));
    }
    const double na = norm(a.values);
    const double nb = norm(b.values);
    if (na == 0.0 || nb == 0.0) {
        throw Error(ErrorCode::ZeroVector, "");
    }
    return std::clamp(dot(a.values, b.values) / (na * nb), -1.0, 1.0);
}

std::vector<ScoredChunk> top_k(const VectorIndex& index, const EmbeddingVector& query, std::size_t k,
                               std::optional<Platform> origin_filter) {
    if (k == 0) {
        throw Error(ErrorCode::InvalidArgument, "k", "must be at least 1");
    }
    if (index.empty()) {
        throw Error(ErrorCode::EmptyIndex, "");
    }
    if (query.dimension() != index.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "query",
                    std::to_string(query.dimension()) + " vs " + std::to_string(index.dimension()));
    }
    const double query_norm = norm(query.values);
    if (query_norm == 0.0) {
        throw Error(ErrorCode::ZeroVector, "query");
    }

    std::vector<ScoredChunk> scored;
    scored.reserve(index.size());
    for (const auto& entry : index.entries()) {
        if (origin_filter && entry.chunk.origin != *origin_filter) continue;
        const double entry_norm = norm(entry.vector.values);
        const double score =
            entry_norm == 0.0
                ? 0.0
                : std::clamp(dot(query.values, entry.vector.values) / (query_norm * entry_norm), -1.0, 1.0);
        scored.push_back({entry.chunk.chunk_id, score});
    }
    const auto better = [](const ScoredChunk& a, const ScoredChunk& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.chunk_id < b.chunk_id;
    };
    const std::size_t keep = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
    scored.resize(keep);
    return scored;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

void write_index(const VectorIndex& index, std::ostream& out) {
    ordered_json header = {{"format", kFormatName},
                           {"version", kFormatVersion},
                           {"dimension", index.dimension()},
                           {"provider_id", index.provider_id()},
                           {"count", index.size()}};
    out << header.dump() << '\n';
    for (const auto& entry : index.entries()) {
        const auto& c = entry.chunk;
        ordered_json record = {{"chunk_id", c.chunk_id},
                               {"doc_id", c.doc_id},
                               {"origin", to_string(c.origin)},
                               {"source_path", c.source_path},
                               {"ordinal", c.ordinal},
                               {"start_offset", c.start_offset},
                               {"text", c.text},
                               {"vector", entry.vector.values}};
        out << record.dump() << '\n';
    }
}

std::string serialize_index(const VectorIndex& index) {
    std::ostringstream out;
    write_index(index, out);
    return out.str();
}

void persist(const VectorIndex& index, const std::filesystem::path& path) {
    text::write_file(path, serialize_index(index));
}

namespace {

[[noreturn]] void corrupt(std::size_t line, const std::string& detail) {
    throw Error(ErrorCode::CorruptIndexFile, "line " + std::to_string(line), detail);
}

}  // namespace

IndexLoad parse_index(std::string_view contents, std::string_view configured_provider) {
    if (contents.empty() || contents.back() != '\n') {
        corrupt(0, "file is empty or truncated (no final newline)");
    }
    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start < contents.size();) {
        const std::size_t end = contents.find('\n', start);
        lines.push_back(contents.substr(start, end - start));
        start = end + 1;
    }

    ordered_json header;
    try {
        header = ordered_json::parse(lines.front());
    } catch (const ordered_json::exception& e) {
        corrupt(1, std::string("unparseable header: ") + e.what());
    }
    std::size_t dimension = 0;
    std::size_t count = 0;
    std::string provider_id;
    try {
        if (header.at("format").get<std::string>() != kFormatName ||
            header.at("version").get<int>() != kFormatVersion) {
            corrupt(1, "unknown format or version");
        }
        dimension = header.at("dimension").get<std::size_t>();
        count = header.at("count").get<std::size_t>();
        provider_id = header.at("provider_id").get<std::string>();
    } catch (const ordered_json::exception& e) {
        corrupt(1, std::string("bad header: ") + e.what());
    }
    if (lines.size() - 1 != count) {
        corrupt(lines.size(), "header declares " + std::to_string(count) + " entries, found " +
                                  std::to_string(lines.size() - 1));
    }
    if (dimension == 0) corrupt(1, "dimension must be positive");

    IndexLoad out{VectorIndex(dimension, provider_id), {}};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        try {
            const auto record = ordered_json::parse(lines[i]);
            DocumentChunk chunk;
            chunk.chunk_id = record.at("chunk_id").get<std::string>();
            chunk.doc_id = record.at("doc_id").get<std::string>();
            const auto origin = parse_platform(record.at("origin").get<std::string>());
            if (!origin) corrupt(i + 1, "unknown origin");
            chunk.origin = *origin;
            chunk.source_path = record.at("source_path").get<std::string>();
            chunk.ordinal = record.at("ordinal").get<std::size_t>();
            chunk.start_offset = record.at("start_offset").get<std::size_t>();
            chunk.text = record.at("text").get<std::string>();
            EmbeddingVector vector{record.at("vector").get<std::vector<double>>()};
            out.index.add(std::move(chunk), std::move(vector));
        } catch (const ordered_json::exception& e) {
            corrupt(i + 1, e.what());
        } catch (const Error& e) {
            if (e.code() == ErrorCode::CorruptIndexFile) throw;
            corrupt(i + 1, e.what());
        }
    }

    if (!configured_provider.empty() && configured_provider != provider_id) {
        std::string warning = std::string(to_string(ErrorCode::ProviderMismatch)) + ": index built by '" +
                              provider_id + "', configured provider is '" + std::string(configured_provider) +
                              "'";
        spdlog::warn("{}", warning);
        out.warnings.push_back(std::move(warning));
    }
    return out;
}

IndexLoad load(const std::filesystem::path& path, std::string_view configured_provider) {
    return parse_index(text::read_file(path), configured_provider);
}

}  // namespace synrag
