#pragma once

#include "mtforge/llm/client.hpp"

namespace mtforge {

/// Chat-completions-compatible HTTP backend. The bearer token is read from
/// the environment variable named in the config, never from config files.
class HttpTransport final : public Transport {
  public:
    explicit HttpTransport(ClientConfig config);

    ChatResponse send(const ChatRequest& request) override;

  private:
    ClientConfig config_;
    std::string scheme_host_;
    std::string path_;
};

} // namespace mtforge
