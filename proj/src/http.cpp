#include <synrag/error.hpp>
#include <synrag/http.hpp>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <thread>

namespace synrag::http {

namespace {

struct Url {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Url split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::ProviderUnavailable, url, "endpoint must start with http:// or https://");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::map<std::string, std::string> bearer_auth(const std::string& env_var) {
    if (env_var.empty()) return {};
    const char* token = std::getenv(env_var.c_str());
    if (token == nullptr || *token == '\0') {
        throw Error(ErrorCode::ProviderUnavailable, env_var, "credential environment variable is not set");
    }
    return {{"Authorization", std::string("Bearer ") + token}};
}

Response post_json(const std::string& url, const std::string& body,
                   const std::map<std::string, std::string>& headers, const RetryPolicy& policy) {
    const Url target = split_url(url);
    httplib::Headers hdrs;
    for (const auto& [k, v] : headers) hdrs.emplace(k, v);

    auto backoff = policy.initial_backoff;
    ErrorCode last_code = ErrorCode::ProviderUnavailable;
    std::string last_detail;
    for (int attempt = 0; attempt <= policy.retries; ++attempt) {
        if (attempt > 0) {
            spdlog::warn("retrying {} after {} (attempt {}/{})", url, last_detail, attempt, policy.retries);
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        httplib::Client client(target.origin);
        client.set_connection_timeout(policy.timeout);
        client.set_read_timeout(policy.timeout);
        client.set_write_timeout(policy.timeout);

        const auto started = std::chrono::steady_clock::now();
        auto result = client.Post(target.path, hdrs, body, "application/json");
        const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);

        if (!result) {
            const auto err = result.error();
            last_code = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
                            ? ErrorCode::ProviderTimeout
                            : ErrorCode::ProviderUnavailable;
            last_detail = httplib::to_string(err);
            continue;
        }
        if (result->status >= 200 && result->status < 300) {
            return {result->status, result->body, latency};
        }
        last_code = ErrorCode::ProviderUnavailable;
        last_detail = "HTTP " + std::to_string(result->status);
        if (result->status != 429 && result->status < 500) break;
    }
    throw Error(last_code, url, last_detail);
}

}  // namespace synrag::http
