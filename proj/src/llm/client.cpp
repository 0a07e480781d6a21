#include "mtforge/llm/client.hpp"

namespace mtforge {

void RateLimiter::acquire() {
    for (;;) {
        long long wait = 0;
        {
            std::lock_guard lock(mutex_);
            const long long now = clock_->now_ms();
            while (!window_.empty() && window_.front() <= now - 60000)
                window_.pop_front();
            if (static_cast<int>(window_.size()) < rpm_) {
                window_.push_back(now);
                all_times_.push_back(now);
                return;
            }
            wait = window_.front() + 60000 - now;
        }
        clock_->sleep_ms(wait > 0 ? wait : 1);
    }
}

LlmClient::LlmClient(std::shared_ptr<Transport> transport, ClientConfig config,
                     std::shared_ptr<Clock> clock)
    : transport_(std::move(transport)),
      config_(std::move(config)),
      clock_(std::move(clock)),
      limiter_(config_.requests_per_minute, clock_),
      rng_(0x6d74666f72676521ull) {}

ChatResponse LlmClient::complete(const ChatRequest& request) {
    if (request.messages.empty())
        throw Error(ErrorCode::Validation, "empty message list");
    if (request.messages.back().role != "user")
        throw Error(ErrorCode::Validation, "last message must have role=user");

    for (int attempt = 0;; ++attempt) {
        limiter_.acquire();
        try {
            return transport_->send(request);
        } catch (const Error& e) {
            if (!e.retryable() || attempt >= config_.max_retries) throw;
            long long backoff = static_cast<long long>(config_.base_backoff_ms) << attempt;
            if (e.retry_after_ms >= 0 && e.retry_after_ms > backoff)
                backoff = e.retry_after_ms;
            // full jitter
            long long wait;
            {
                std::lock_guard lock(rng_mutex_);
                wait = backoff > 0
                           ? std::uniform_int_distribution<long long>(0, backoff)(rng_)
                           : 0;
            }
            clock_->sleep_ms(wait);
        }
    }
}

} // namespace mtforge
