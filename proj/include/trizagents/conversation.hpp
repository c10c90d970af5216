#pragma once

// Conversation state shared by the whole engine: messages, per-step
// transcripts, prompt templates and the persisted step/report artifacts.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "trizagents/errors.hpp"

namespace trizagents {

enum class Role { kSystem, kHuman, kAi, kTool };

inline std::string to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kHuman: return "human";
    case Role::kAi: return "ai";
    case Role::kTool: return "tool";
  }
  return "unknown";
}

inline Role role_from_string(const std::string& s) {
  if (s == "system") return Role::kSystem;
  if (s == "human") return Role::kHuman;
  if (s == "ai") return Role::kAi;
  if (s == "tool") return Role::kTool;
  throw Error("unknown message role \"" + s + "\"");
}

struct TokenUsage {
  long long prompt_tokens = 0;
  long long completion_tokens = 0;

  long long total_tokens() const { return prompt_tokens + completion_tokens; }

  TokenUsage& operator+=(const TokenUsage& other) {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    return *this;
  }

  bool operator==(const TokenUsage&) const = default;
};

struct ToolCall {
  std::string id;
  std::string name;
  std::string arguments;  // raw text, parsed by the tool layer

  bool operator==(const ToolCall&) const = default;
};

// One conversational turn. sender is an agent name, "user", or a tool name.
struct Message {
  Role role = Role::kHuman;
  std::string sender;
  std::string content;
  std::vector<ToolCall> tool_calls;  // only when role == kAi
  std::string tool_call_id;          // only when role == kTool
  std::optional<TokenUsage> usage;

  bool operator==(const Message&) const = default;

  static Message human(std::string sender, std::string content) {
    Message m;
    m.role = Role::kHuman;
    m.sender = std::move(sender);
    m.content = std::move(content);
    return m;
  }

  static Message system(std::string content) {
    Message m;
    m.role = Role::kSystem;
    m.sender = "system";
    m.content = std::move(content);
    return m;
  }

  static Message ai(std::string sender, std::string content,
                    std::vector<ToolCall> tool_calls = {},
                    std::optional<TokenUsage> usage = std::nullopt) {
    Message m;
    m.role = Role::kAi;
    m.sender = std::move(sender);
    m.content = std::move(content);
    m.tool_calls = std::move(tool_calls);
    m.usage = usage;
    return m;
  }

  static Message tool(std::string tool_name, std::string call_id,
                      std::string content) {
    Message m;
    m.role = Role::kTool;
    m.sender = std::move(tool_name);
    m.content = std::move(content);
    m.tool_call_id = std::move(call_id);
    return m;
  }
};

// Converts a finished ai answer to human role so the next model treats it as
// a human turn. Identity survives through the "[<AgentName>]: " prefix;
// strip_demotion_prefix recovers the original content.
inline Message demote_to_human(const Message& m) {
  if (m.role != Role::kAi) throw NotAiMessageError();
  if (!m.tool_calls.empty()) throw HasPendingToolCallsError();
  Message out = m;
  out.role = Role::kHuman;
  out.content = "[" + m.sender + "]: " + m.content;
  return out;
}

inline std::string demotion_prefix(const std::string& sender) {
  return "[" + sender + "]: ";
}

inline std::optional<std::string> strip_demotion_prefix(
    const Message& m) {
  const std::string prefix = demotion_prefix(m.sender);
  if (m.content.rfind(prefix, 0) != 0) return std::nullopt;
  return m.content.substr(prefix.size());
}

// Append-only message list for one workflow step.
class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(int step) : step_(step) {}

  int step() const { return step_; }
  const std::vector<Message>& messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }
  size_t size() const { return messages_.size(); }
  const Message& operator[](size_t i) const { return messages_[i]; }

  // Appends after checking the Message invariants relative to this
  // transcript; tool results must correlate to a prior ai tool call.
  void append(Message m) {
    if (m.role == Role::kTool) {
      if (m.tool_call_id.empty() || !has_tool_call(m.tool_call_id))
        throw OrphanToolResultError(m.tool_call_id);
    }
    if (m.content.empty() && m.tool_calls.empty())
      throw Error("message needs content or tool calls");
    messages_.push_back(std::move(m));
  }

  bool has_tool_call(const std::string& call_id) const {
    for (const auto& m : messages_)
      if (m.role == Role::kAi)
        for (const auto& call : m.tool_calls)
          if (call.id == call_id) return true;
    return false;
  }

  bool operator==(const Transcript&) const = default;

 private:
  int step_ = 0;
  std::vector<Message> messages_;
};

// --- ndjson persistence ---

inline nlohmann::json message_to_json(const Message& m) {
  nlohmann::json j;
  j["role"] = to_string(m.role);
  j["sender"] = m.sender;
  j["content"] = m.content;
  if (!m.tool_calls.empty()) {
    auto& calls = j["tool_calls"] = nlohmann::json::array();
    for (const auto& call : m.tool_calls)
      calls.push_back({{"id", call.id},
                       {"name", call.name},
                       {"arguments", call.arguments}});
  }
  if (!m.tool_call_id.empty()) j["tool_call_id"] = m.tool_call_id;
  if (m.usage)
    j["usage"] = {{"prompt_tokens", m.usage->prompt_tokens},
                  {"completion_tokens", m.usage->completion_tokens}};
  return j;
}

inline Message message_from_json(const nlohmann::json& j) {
  Message m;
  m.role = role_from_string(j.at("role").get<std::string>());
  m.sender = j.at("sender").get<std::string>();
  m.content = j.at("content").get<std::string>();
  if (j.contains("tool_calls"))
    for (const auto& call : j["tool_calls"])
      m.tool_calls.push_back({call.at("id").get<std::string>(),
                              call.at("name").get<std::string>(),
                              call.at("arguments").get<std::string>()});
  if (j.contains("tool_call_id"))
    m.tool_call_id = j["tool_call_id"].get<std::string>();
  if (j.contains("usage"))
    m.usage = TokenUsage{j["usage"].at("prompt_tokens").get<long long>(),
                         j["usage"].at("completion_tokens").get<long long>()};
  return m;
}

constexpr int kTranscriptSchemaVersion = 1;

// Line-delimited records: a schema-versioned header line, then one message
// per line. parse_transcript(serialize_transcript(t)) == t for all valid t.
inline std::string serialize_transcript(const Transcript& t) {
  std::string out;
  nlohmann::json header = {{"schema", kTranscriptSchemaVersion},
                           {"step", t.step()}};
  out += header.dump();
  out += '\n';
  for (const auto& m : t.messages()) {
    out += message_to_json(m).dump();
    out += '\n';
  }
  return out;
}

inline Transcript parse_transcript(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) throw ParseError("transcript", (int)lines.size() + 1,
                                     "truncated: missing trailing newline");
  if (lines.empty()) throw ParseError("transcript", 1, "missing header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(lines[0]);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("transcript", 1, e.what());
  }
  if (!header.contains("schema") ||
      header["schema"].get<int>() != kTranscriptSchemaVersion)
    throw ParseError("transcript", 1, "unsupported schema version");
  Transcript t(header.at("step").get<int>());
  for (size_t i = 1; i < lines.size(); ++i) {
    try {
      t.append(message_from_json(nlohmann::json::parse(lines[i])));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("transcript", static_cast<int>(i) + 1, e.what());
    }
  }
  return t;
}

// --- prompt templates ---

// A parsed template: literal segments interleaved with {placeholder} names.
// Rendering is single-pass; substituted values are never re-scanned.
class PromptTemplate {
 public:
  PromptTemplate() = default;

  // "{name}" marks a placeholder; "{{" and "}}" escape literal braces.
  static PromptTemplate parse(const std::string& text) {
    PromptTemplate t;
    std::string literal;
    for (size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '{' && i + 1 < text.size() && text[i + 1] == '{') {
        literal += '{';
        ++i;
      } else if (text[i] == '}' && i + 1 < text.size() && text[i + 1] == '}') {
        literal += '}';
        ++i;
      } else if (text[i] == '{') {
        auto end = text.find('}', i);
        if (end == std::string::npos)
          throw Error("unterminated placeholder in template");
        if (!literal.empty()) {
          t.segments_.emplace_back(Literal{literal});
          literal.clear();
        }
        t.segments_.emplace_back(Placeholder{text.substr(i + 1, end - i - 1)});
        i = end;
      } else {
        literal += text[i];
      }
    }
    if (!literal.empty()) t.segments_.emplace_back(Literal{literal});
    return t;
  }

  std::vector<std::string> placeholders() const {
    std::vector<std::string> out;
    for (const auto& seg : segments_)
      if (auto* p = std::get_if<Placeholder>(&seg)) out.push_back(p->name);
    return out;
  }

  // Literal segments are preserved byte-for-byte. Every placeholder must be
  // covered; in strict mode unused inputs are an error as well.
  std::string render(const std::map<std::string, std::string>& inputs,
                     bool strict = false) const {
    if (strict) {
      auto names = placeholders();
      for (const auto& [key, _] : inputs)
        if (std::find(names.begin(), names.end(), key) == names.end())
          throw UnknownPlaceholderError(key);
    }
    std::string out;
    for (const auto& seg : segments_) {
      if (auto* lit = std::get_if<Literal>(&seg)) {
        out += lit->text;
      } else {
        const auto& name = std::get<Placeholder>(seg).name;
        auto it = inputs.find(name);
        if (it == inputs.end()) throw MissingInputError(name);
        out += it->second;
      }
    }
    return out;
  }

 private:
  struct Literal {
    std::string text;
  };
  struct Placeholder {
    std::string name;
  };
  std::vector<std::variant<Literal, Placeholder>> segments_;
};

// --- documents ---

struct StepDocument {
  int step = 0;
  std::string title;
  std::string body;  // markdown
  std::string produced_by;
  std::string created_at;  // UTC ISO-8601; excluded from replay equality
  bool truncated = false;
};

struct FinalReport {
  std::string body;
  std::vector<int> source_docs;  // the six step ids, each exactly once
};

}  // namespace trizagents
