#pragma once

#include <synrag/http.hpp>

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace synrag {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dimension() const { return values.size(); }
    bool operator==(const EmbeddingVector&) const = default;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual std::string id() const = 0;
    virtual std::size_t dimension() const = 0;
    /// One vector per input, in input order.
    virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const = 0;
};

/// Hashed bag-of-tokens embedding: each whitespace-delimited token is hashed
/// (64-bit FNV-1a) into one of `dimension` buckets, counts are L2-normalized.
/// Text without tokens maps to the zero vector.
class StubEmbeddingProvider final : public EmbeddingProvider {
public:
    static constexpr const char* kId = "stub-v1";

    explicit StubEmbeddingProvider(std::size_t dimension = 32);

    std::string id() const override { return kId; }
    std::size_t dimension() const override { return dimension_; }
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override;

private:
    std::size_t dimension_;
};

struct RemoteEmbeddingConfig {
    std::string provider_id = "remote";
    std::string endpoint;      ///< full URL of an OpenAI-compatible /embeddings route
    std::string model;
    std::string api_key_env;   ///< environment variable holding the bearer token
    std::size_t dimension = 384;
    http::RetryPolicy retry;
};

/// Calls an OpenAI-compatible embeddings endpoint:
/// request {"model", "input": [...]}, response {"data": [{"index", "embedding"}]}.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(RemoteEmbeddingConfig config);

    std::string id() const override { return config_.provider_id; }
    std::size_t dimension() const override { return config_.dimension; }
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override;

private:
    RemoteEmbeddingConfig config_;
};

/// Embeds `texts` and checks the provider's dimension contract. Throws
/// Error(InvalidArgument) on an empty batch, Error(DimensionMismatch) when a
/// returned vector disagrees with provider.dimension().
std::vector<EmbeddingVector> embed(std::span<const std::string> texts, const EmbeddingProvider& provider);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace synrag
