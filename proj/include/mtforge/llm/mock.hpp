#pragma once

#include "mtforge/llm/client.hpp"

#include <functional>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace mtforge {

/// One scripted outcome for the sequential mock.
struct MockStep {
    bool fail = false;
    std::string text;
    ErrorCode error = ErrorCode::Timeout;
    long long retry_after_ms = -1;

    static MockStep reply(std::string text) { return {false, std::move(text)}; }
    static MockStep failure(ErrorCode code, long long retry_after_ms = -1) {
        return {true, "", code, retry_after_ms};
    }
};

/// Deterministic backend for tests: consumes a script in order, answers from
/// a prompt-keyed map, or delegates to a responder function. Every request
/// (including retried attempts) lands in the call log.
class MockTransport final : public Transport {
  public:
    using Responder = std::function<std::string(const ChatRequest&)>;

    static std::shared_ptr<MockTransport> scripted(std::vector<MockStep> script);
    static std::shared_ptr<MockTransport> scripted_texts(std::vector<std::string> texts);
    /// Keyed by the concatenated message contents of the request.
    static std::shared_ptr<MockTransport> mapped(
        std::unordered_map<std::string, std::string> responses);
    static std::shared_ptr<MockTransport> responder(Responder fn);

    ChatResponse send(const ChatRequest& request) override;

    std::vector<ChatRequest> call_log() const {
        std::lock_guard lock(mutex_);
        return log_;
    }
    size_t call_count() const {
        std::lock_guard lock(mutex_);
        return log_.size();
    }

    static std::string request_key(const ChatRequest& request);

  private:
    enum class Mode { Script, Map, Fn };
    Mode mode_ = Mode::Script;
    std::vector<MockStep> script_;
    size_t next_ = 0;
    std::unordered_map<std::string, std::string> map_;
    Responder fn_;
    mutable std::mutex mutex_;
    std::vector<ChatRequest> log_;
};

/// Content-aware responder producing valid structured output for every
/// prompt shape the engines emit; backs the CLI's offline mock backend.
std::string echo_responder(const ChatRequest& request);

} // namespace mtforge
