#include <synrag/embedding.hpp>
#include <synrag/error.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

namespace synrag {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

StubEmbeddingProvider::StubEmbeddingProvider(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) {
        throw Error(ErrorCode::InvalidArgument, "dimension", "must be positive");
    }
}

std::vector<EmbeddingVector> StubEmbeddingProvider::embed_batch(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::vector<double> counts(dimension_, 0.0);
        std::istringstream tokens(text);
        std::string token;
        while (tokens >> token) {
            counts[fnv1a64(token) % dimension_] += 1.0;
        }
        double norm = 0.0;
        for (double c : counts) norm += c * c;
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (double& c : counts) c /= norm;
        }
        out.push_back({std::move(counts)});
    }
    return out;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteEmbeddingConfig config) : config_(std::move(config)) {}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_batch(std::span<const std::string> texts) const {
    nlohmann::json request = {{"model", config_.model}, {"input", nlohmann::json::array()}};
    for (const auto& t : texts) request["input"].push_back(t);

    auto headers = http::bearer_auth(config_.api_key_env);
    const auto response = http::post_json(config_.endpoint, request.dump(), headers, config_.retry);

    std::vector<EmbeddingVector> out(texts.size());
    try {
        const auto body = nlohmann::json::parse(response.body);
        const auto& data = body.at("data");
        if (data.size() != texts.size()) {
            throw Error(ErrorCode::ProviderUnavailable, config_.endpoint,
                        "embedding count does not match input count");
        }
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto& item = data[i];
            const std::size_t slot = item.contains("index") ? item.at("index").get<std::size_t>() : i;
            if (slot >= out.size()) {
                throw Error(ErrorCode::ProviderUnavailable, config_.endpoint, "embedding index out of range");
            }
            out[slot].values = item.at("embedding").get<std::vector<double>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ProviderUnavailable, config_.endpoint,
                    std::string("malformed embeddings response: ") + e.what());
    }
    return out;
}

std::vector<EmbeddingVector> embed(std::span<const std::string> texts, const EmbeddingProvider& provider) {
    if (texts.empty()) {
        throw Error(ErrorCode::InvalidArgument, "texts", "nothing to embed");
    }
    auto vectors = provider.embed_batch(texts);
    if (vectors.size() != texts.size()) {
        throw Error(ErrorCode::ProviderUnavailable, provider.id(), "provider returned wrong number of vectors");
    }
    for (const auto& v : vectors) {
        if (v.dimension() != provider.dimension()) {
            throw Error(ErrorCode::DimensionMismatch, provider.id(),
                        "expected " + std::to_string(provider.dimension()) + ", got " +
                            std::to_string(v.dimension()));
        }
        for (double x : v.values) {
            if (!std::isfinite(x)) {
                throw Error(ErrorCode::ProviderUnavailable, provider.id(), "non-finite embedding value");
            }
        }
    }
    return vectors;
}

}  // namespace synrag
