#pragma once

// Live wire client for any OpenAI-compatible chat-completions endpoint.
// Transient transport errors (5xx, connection failures) are retried with
// exponential backoff; 4xx responses are never retried.

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "trizagents/backend.hpp"

namespace trizagents {

class LiveBackend : public ChatBackend {
 public:
  explicit LiveBackend(BackendConfig config) : config_(std::move(config)) {}

  ChatResponse complete(const ChatRequest& req) override {
    if (req.messages.empty())
      throw BackendError("chat request carries no messages");
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
      throw AuthMissingError(config_.api_key_env);

    const std::string body = request_to_json(req).dump();
    httplib::Headers headers = {
        {"Authorization", std::string("Bearer ") + key}};

    int attempt = 0;
    for (;;) {
      httplib::Client client(config_.base_url);
      client.set_connection_timeout(config_.timeout_seconds);
      client.set_read_timeout(config_.timeout_seconds);
      auto result = client.Post("/v1/chat/completions", headers, body,
                                "application/json");
      if (result) {
        if (result->status >= 200 && result->status < 300) {
          nlohmann::json parsed;
          try {
            parsed = nlohmann::json::parse(result->body);
          } catch (const nlohmann::json::exception& e) {
            throw MalformedResponseError(e.what());
          }
          return response_from_json(parsed);
        }
        if (result->status >= 400 && result->status < 500)
          throw TransportError(result->status, result->body);
        if (attempt >= config_.max_retries)
          throw TransportError(result->status, result->body);
      } else {
        if (result.error() == httplib::Error::ConnectionTimeout ||
            result.error() == httplib::Error::Read)
          if (attempt >= config_.max_retries) throw TimeoutError();
        if (attempt >= config_.max_retries)
          throw TransportError(0, httplib::to_string(result.error()));
      }
      ++attempt;
      std::this_thread::sleep_for(std::chrono::milliseconds(200) * (1 << attempt));
    }
  }

 private:
  BackendConfig config_;
};

}  // namespace trizagents
