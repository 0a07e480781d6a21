#include "mtforge/llm/http_transport.hpp"

#include "mtforge/core/serde.hpp"

#ifndef MTFORGE_NO_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <cstdlib>

namespace mtforge {

namespace {

// "https://host:port/v1/chat/completions" -> ("https://host:port", "/v1/...")
std::pair<std::string, std::string> split_url(const std::string& url) {
    size_t scheme = url.find("://");
    size_t path_start =
        url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) return {url, "/v1/chat/completions"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace

HttpTransport::HttpTransport(ClientConfig config) : config_(std::move(config)) {
    auto [host, path] = split_url(config_.endpoint_url);
    scheme_host_ = host;
    path_ = path;
}

ChatResponse HttpTransport::send(const ChatRequest& request) {
    Json body = Json::object();
    body["model"] = request.model.empty() ? config_.model : request.model;
    Json messages = Json::array();
    for (const auto& m : request.messages)
        messages.push_back({{"role", m.role}, {"content", m.content}});
    body["messages"] = std::move(messages);
    body["temperature"] = request.temperature;
    if (request.max_tokens) body["max_tokens"] = *request.max_tokens;

    httplib::Client client(scheme_host_);
    client.set_connection_timeout(0, config_.timeout_ms * 1000LL);
    client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);

    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env_var.c_str()))
        headers.emplace("Authorization", std::string("Bearer ") + key);

    auto result = client.Post(path_, headers, body.dump(), "application/json");
    if (!result) {
        if (result.error() == httplib::Error::ConnectionTimeout ||
            result.error() == httplib::Error::Read ||
            result.error() == httplib::Error::Write)
            throw Error(ErrorCode::Timeout, httplib::to_string(result.error()));
        throw Error(ErrorCode::Server5xx, httplib::to_string(result.error()));
    }

    if (result->status == 429) {
        Error e(ErrorCode::RateLimited, "429 from endpoint");
        if (result->has_header("Retry-After")) {
            try {
                e.retry_after_ms =
                    std::stoll(result->get_header_value("Retry-After")) * 1000;
            } catch (...) {
            }
        }
        throw e;
    }
    if (result->status == 401 || result->status == 403)
        throw Error(ErrorCode::Auth, "status " + std::to_string(result->status));
    if (result->status >= 500)
        throw Error(ErrorCode::Server5xx, "status " + std::to_string(result->status));
    if (result->status >= 400)
        throw Error(ErrorCode::Auth, "status " + std::to_string(result->status));

    Json parsed = Json::parse(result->body, nullptr, false);
    if (parsed.is_discarded())
        throw Error(ErrorCode::MalformedResponse, "unparseable response body");
    try {
        ChatResponse response;
        response.text =
            parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        if (parsed.contains("usage")) {
            const auto& usage = parsed["usage"];
            response.prompt_tokens = usage.value("prompt_tokens", 0LL);
            response.completion_tokens = usage.value("completion_tokens", 0LL);
        }
        const std::string reason =
            parsed["choices"][0].value("finish_reason", std::string("stop"));
        if (reason == "stop") response.finish_reason = FinishReason::Stop;
        else if (reason == "length") response.finish_reason = FinishReason::Length;
        else response.finish_reason = FinishReason::Other;
        // Truncated structured output is never salvageable.
        if (response.finish_reason == FinishReason::Length)
            throw Error(ErrorCode::MalformedResponse, "completion truncated (length)");
        return response;
    } catch (const Json::exception&) {
        throw Error(ErrorCode::MalformedResponse, "missing choices[0].message.content");
    }
}

} // namespace mtforge
