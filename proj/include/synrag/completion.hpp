#pragma once

#include <synrag/http.hpp>
#include <synrag/platform.hpp>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

namespace synrag {

struct DecodingParams {
    double temperature = 0.0;
    int max_tokens = 2048;
};

struct CompletionRequest {
    std::string prompt;
    DecodingParams decoding;
    // Routing metadata; remote providers ignore it.
    std::string spec_id;
    Platform platform = Platform::qradar;
};

struct CompletionResponse {
    std::string text;
    std::chrono::milliseconds latency{0};
    int prompt_tokens = 0;
    int completion_tokens = 0;
};

/// Prompt in, completion text out. Implementations must be safe to call
/// concurrently.
class CompletionProvider {
public:
    virtual ~CompletionProvider() = default;

    virtual std::string id() const = 0;
    /// Throws Error(ProviderUnavailable) or Error(ProviderTimeout).
    virtual CompletionResponse complete(const CompletionRequest& request) const = 0;
};

struct StubCompletionConfig {
    std::string provider_id = "stub-v1";
    /// Returned for every request when set.
    std::optional<std::string> canned_reply;
    /// Directory holding `<platform>/<spec_id>.aql` and `<platform>/<spec_id>.yaral`
    /// replies; consulted when no canned reply is set.
    std::filesystem::path replies_dir;
    /// Wrap replies in a language-tagged markdown fence, as chat models do.
    bool fence = false;
    /// Simulate an outage: every call throws ProviderUnavailable.
    bool unavailable = false;
};

/// Offline provider. Identical requests always produce identical text and
/// zero latency. Without a canned or per-spec reply it answers a minimal
/// well-formed query tagged with a digest of the prompt.
class StubCompletionProvider final : public CompletionProvider {
public:
    explicit StubCompletionProvider(StubCompletionConfig config = {});

    std::string id() const override { return config_.provider_id; }
    CompletionResponse complete(const CompletionRequest& request) const override;

private:
    StubCompletionConfig config_;
};

struct RemoteCompletionConfig {
    std::string provider_id = "remote";
    std::string endpoint;  ///< full URL of an OpenAI-compatible /chat/completions route
    std::string model;
    std::string api_key_env;
    http::RetryPolicy retry;
};

class RemoteCompletionProvider final : public CompletionProvider {
public:
    explicit RemoteCompletionProvider(RemoteCompletionConfig config);

    std::string id() const override { return config_.provider_id; }
    CompletionResponse complete(const CompletionRequest& request) const override;

private:
    RemoteCompletionConfig config_;
};

/// File extension used for queries of a platform (`.aql` / `.yaral`).
std::string_view query_extension(Platform platform);

}  // namespace synrag
