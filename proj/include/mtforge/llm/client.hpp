#pragma once

#include "mtforge/core/error.hpp"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace mtforge {

struct ChatMessage {
    std::string role; // "system" or "user"
    std::string content;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    std::optional<int> max_tokens;
    std::string model;
};

enum class FinishReason { Stop, Length, Other };

struct ChatResponse {
    std::string text;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    FinishReason finish_reason = FinishReason::Stop;
};

struct ClientConfig {
    std::string endpoint_url;
    std::string api_key_env_var = "MTFORGE_API_KEY";
    std::string model;
    int requests_per_minute = 600;
    int max_retries = 3;
    int base_backoff_ms = 250;
    int timeout_ms = 60000;
};

/// Injectable time source; the fake used in tests advances on sleep.
class Clock {
  public:
    virtual ~Clock() = default;
    virtual long long now_ms() = 0;
    virtual void sleep_ms(long long ms) = 0;
};

class SystemClock final : public Clock {
  public:
    long long now_ms() override {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    }
    void sleep_ms(long long ms) override {
        if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    }
};

class FakeClock final : public Clock {
  public:
    long long now_ms() override {
        std::lock_guard lock(mutex_);
        return now_;
    }
    void sleep_ms(long long ms) override {
        std::lock_guard lock(mutex_);
        if (ms > 0) now_ += ms;
    }

  private:
    std::mutex mutex_;
    long long now_ = 0;
};

/// Sliding-window limiter: at most `rpm` dispatches in any 60s window.
class RateLimiter {
  public:
    RateLimiter(int requests_per_minute, std::shared_ptr<Clock> clock)
        : rpm_(requests_per_minute), clock_(std::move(clock)) {}

    void acquire();

    std::vector<long long> dispatch_times() const {
        std::lock_guard lock(mutex_);
        return all_times_;
    }

  private:
    int rpm_;
    std::shared_ptr<Clock> clock_;
    mutable std::mutex mutex_;
    std::deque<long long> window_;
    std::vector<long long> all_times_;
};

/// One raw attempt against a backend; retries live above this.
class Transport {
  public:
    virtual ~Transport() = default;
    virtual ChatResponse send(const ChatRequest& request) = 0;
};

/// Rate-limited, retrying client shared by all pipeline workers.
class LlmClient {
  public:
    LlmClient(std::shared_ptr<Transport> transport, ClientConfig config,
              std::shared_ptr<Clock> clock = std::make_shared<SystemClock>());

    ChatResponse complete(const ChatRequest& request);

    const ClientConfig& config() const { return config_; }

  private:
    std::shared_ptr<Transport> transport_;
    ClientConfig config_;
    std::shared_ptr<Clock> clock_;
    RateLimiter limiter_;
    std::mutex rng_mutex_;
    std::mt19937_64 rng_;
};

} // namespace mtforge
