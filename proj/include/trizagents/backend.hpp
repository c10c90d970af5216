#pragma once

// The chat-completion contract. Two interchangeable implementations sit
// behind ChatBackend: a live wire client speaking the OpenAI-compatible
// protocol (live_backend.hpp) and a deterministic scripted double
// (scripted_backend.hpp).

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trizagents/conversation.hpp"
#include "trizagents/errors.hpp"

namespace trizagents {

struct ToolParameter {
  std::string name;
  std::string type;  // JSON-schema type name
  std::string description;
  bool required = false;
};

struct ToolSpec {
  std::string name;
  std::string description;
  std::vector<ToolParameter> parameters;
};

constexpr double kDefaultTemperature = 0.5;

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  std::vector<ToolSpec> tools;
  double temperature = kDefaultTemperature;
  std::optional<int> max_output_tokens;
  bool tools_enabled = true;

  // Routing metadata, used by the scripted backend to key responses and by
  // the run report for per-agent accounting. Not part of the wire body.
  std::string agent;
  int step = 0;
};

enum class FinishReason { kStop, kToolCalls, kLength, kError };

inline std::string to_string(FinishReason r) {
  switch (r) {
    case FinishReason::kStop: return "stop";
    case FinishReason::kToolCalls: return "tool_calls";
    case FinishReason::kLength: return "length";
    case FinishReason::kError: return "error";
  }
  return "error";
}

struct ChatResponse {
  std::optional<std::string> content;
  std::vector<ToolCall> tool_calls;
  TokenUsage usage;
  FinishReason finish_reason = FinishReason::kStop;
};

enum class BackendKind { kLive, kScripted };

struct BackendConfig {
  BackendKind kind = BackendKind::kScripted;
  std::string base_url = "https://api.openai.com";
  std::string api_key_env = "OPENAI_API_KEY";
  std::string model = "gpt-4o";
  double temperature = kDefaultTemperature;
  int timeout_seconds = 60;
  int max_retries = 3;
  std::string script_path;  // scripted mode only
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  // pre: req.messages non-empty. post: the response satisfies the
  // ChatResponse invariants (finish_reason == tool_calls iff tool_calls
  // non-empty). Throws BackendError subclasses.
  virtual ChatResponse complete(const ChatRequest& req) = 0;
};

// --- OpenAI-compatible wire format ---

inline nlohmann::json wire_message(const Message& m) {
  nlohmann::json j;
  switch (m.role) {
    case Role::kSystem: j["role"] = "system"; break;
    case Role::kHuman: j["role"] = "user"; break;
    case Role::kAi: j["role"] = "assistant"; break;
    case Role::kTool: j["role"] = "tool"; break;
  }
  j["content"] = m.content;
  if (m.role == Role::kAi && !m.sender.empty()) j["name"] = m.sender;
  if (!m.tool_calls.empty()) {
    auto& calls = j["tool_calls"] = nlohmann::json::array();
    for (const auto& call : m.tool_calls)
      calls.push_back({{"id", call.id},
                       {"type", "function"},
                       {"function", {{"name", call.name},
                                     {"arguments", call.arguments}}}});
  }
  if (m.role == Role::kTool) j["tool_call_id"] = m.tool_call_id;
  return j;
}

inline nlohmann::json request_to_json(const ChatRequest& req) {
  nlohmann::json body;
  body["model"] = req.model;
  body["temperature"] = req.temperature;
  if (req.max_output_tokens) body["max_tokens"] = *req.max_output_tokens;
  auto& messages = body["messages"] = nlohmann::json::array();
  for (const auto& m : req.messages) messages.push_back(wire_message(m));
  if (req.tools_enabled && !req.tools.empty()) {
    auto& tools = body["tools"] = nlohmann::json::array();
    for (const auto& tool : req.tools) {
      nlohmann::json properties = nlohmann::json::object();
      nlohmann::json required = nlohmann::json::array();
      for (const auto& p : tool.parameters) {
        properties[p.name] = {{"type", p.type},
                              {"description", p.description}};
        if (p.required) required.push_back(p.name);
      }
      tools.push_back(
          {{"type", "function"},
           {"function",
            {{"name", tool.name},
             {"description", tool.description},
             {"parameters",
              {{"type", "object"},
               {"properties", properties},
               {"required", required}}}}}});
    }
    body["tool_choice"] = "auto";
  }
  return body;
}

inline ChatResponse response_from_json(const nlohmann::json& body) {
  ChatResponse resp;
  try {
    const auto& choice = body.at("choices").at(0);
    const auto& message = choice.at("message");
    if (message.contains("content") && !message["content"].is_null())
      resp.content = message["content"].get<std::string>();
    if (message.contains("tool_calls"))
      for (const auto& call : message["tool_calls"])
        resp.tool_calls.push_back(
            {call.at("id").get<std::string>(),
             call.at("function").at("name").get<std::string>(),
             call.at("function").at("arguments").get<std::string>()});
    const std::string finish = choice.value("finish_reason", "stop");
    if (finish == "tool_calls") resp.finish_reason = FinishReason::kToolCalls;
    else if (finish == "length") resp.finish_reason = FinishReason::kLength;
    else if (finish == "stop") resp.finish_reason = FinishReason::kStop;
    else resp.finish_reason = FinishReason::kError;
    if (body.contains("usage")) {
      resp.usage.prompt_tokens =
          body["usage"].value("prompt_tokens", 0LL);
      resp.usage.completion_tokens =
          body["usage"].value("completion_tokens", 0LL);
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponseError(e.what());
  }
  if (!resp.tool_calls.empty())
    resp.finish_reason = FinishReason::kToolCalls;
  else if (resp.finish_reason == FinishReason::kToolCalls)
    throw MalformedResponseError(
        "finish_reason tool_calls without any tool call");
  return resp;
}

}  // namespace trizagents
