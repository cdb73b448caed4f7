#include <synrag/completion.hpp>
#include <synrag/error.hpp>
#include <synrag/text.hpp>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <sstream>

namespace synrag {

std::string_view query_extension(Platform platform) {
    return platform == Platform::qradar ? ".aql" : ".yaral";
}

namespace {

int count_words(std::string_view s) {
    std::istringstream in{std::string(s)};
    std::string w;
    int n = 0;
    while (in >> w) ++n;
    return n;
}

std::string fallback_reply(const CompletionRequest& request) {
    const std::string tag = text::sha256_hex(request.prompt).substr(0, 12);
    if (request.platform == Platform::qradar) {
        return fmt::format("-- stub {}\nSELECT * FROM events LAST 24 HOURS", tag);
    }
    return fmt::format(
        "rule stub_{} {{\n  events:\n    $e.metadata.event_type = \"GENERIC_EVENT\"\n  condition:\n    $e\n}}",
        tag);
}

}  // namespace

StubCompletionProvider::StubCompletionProvider(StubCompletionConfig config) : config_(std::move(config)) {}

CompletionResponse StubCompletionProvider::complete(const CompletionRequest& request) const {
    if (config_.unavailable) {
        throw Error(ErrorCode::ProviderUnavailable, config_.provider_id, "stub configured as unavailable");
    }
    std::string reply;
    if (config_.canned_reply) {
        reply = *config_.canned_reply;
    } else {
        std::filesystem::path candidate;
        if (!config_.replies_dir.empty()) {
            candidate = config_.replies_dir / std::string(to_string(request.platform)) /
                        (request.spec_id + std::string(query_extension(request.platform)));
        }
        if (!candidate.empty() && std::filesystem::is_regular_file(candidate)) {
            reply = text::read_file(candidate);
        } else {
            reply = fallback_reply(request);
        }
    }
    if (config_.fence) {
        const char* lang = request.platform == Platform::qradar ? "sql" : "yaral";
        reply = fmt::format("```{}\n{}\n```", lang, text::trim(reply));
    }
    CompletionResponse response;
    response.text = std::move(reply);
    response.prompt_tokens = count_words(request.prompt);
    response.completion_tokens = count_words(response.text);
    return response;
}

RemoteCompletionProvider::RemoteCompletionProvider(RemoteCompletionConfig config) : config_(std::move(config)) {}

CompletionResponse RemoteCompletionProvider::complete(const CompletionRequest& request) const {
    const nlohmann::json body = {
        {"model", config_.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.decoding.temperature},
        {"max_tokens", request.decoding.max_tokens},
    };
    const auto response =
        http::post_json(config_.endpoint, body.dump(), http::bearer_auth(config_.api_key_env), config_.retry);

    CompletionResponse out;
    out.latency = response.latency;
    try {
        const auto reply = nlohmann::json::parse(response.body);
        const auto& content = reply.at("choices").at(0).at("message").at("content");
        out.text = content.is_null() ? std::string() : content.get<std::string>();
        if (reply.contains("usage")) {
            const auto& usage = reply.at("usage");
            out.prompt_tokens = usage.value("prompt_tokens", 0);
            out.completion_tokens = usage.value("completion_tokens", 0);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ProviderUnavailable, config_.endpoint,
                    std::string("malformed completion response: ") + e.what());
    }
    return out;
}

}  // namespace synrag
