#pragma once

#include <chrono>
#include <map>
#include <string>

namespace synrag::http {

struct RetryPolicy {
    int retries = 2;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::milliseconds timeout{60000};
};

struct Response {
    int status = 0;
    std::string body;
    std::chrono::milliseconds latency{0};
};

/// POSTs a JSON body to `url` (http:// or https://). Transport failures and
/// 429/5xx responses are retried with exponential backoff. Throws
/// Error(ProviderTimeout) or Error(ProviderUnavailable) when the attempts
/// are exhausted or the server answers with another non-2xx status.
Response post_json(const std::string& url, const std::string& body,
                   const std::map<std::string, std::string>& headers, const RetryPolicy& policy);

/// `Bearer <token>` header map from the named environment variable; empty
/// when `env_var` is empty. Throws Error(ProviderUnavailable) when the
/// variable is named but unset.
std::map<std::string, std::string> bearer_auth(const std::string& env_var);

}  // namespace synrag::http
