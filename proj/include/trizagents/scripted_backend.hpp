#pragma once

// Deterministic stand-in for the chat model. Responses are replayed from a
// script: an ordered list of entries keyed by (agent name, step, turn
// index). The same script and request sequence always produce the same
// responses, which is what makes whole-run replay byte-exact.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trizagents/backend.hpp"

namespace trizagents {

struct ScriptEntry {
  std::string agent;
  int step = 0;
  int turn = 0;
  std::string content;
  std::vector<ToolCall> tool_calls;
  TokenUsage usage;

  std::string key() const {
    return "(" + agent + ", step " + std::to_string(step) + ", turn " +
           std::to_string(turn) + ")";
  }
};

class Script {
 public:
  Script() = default;
  explicit Script(std::vector<ScriptEntry> entries)
      : entries_(std::move(entries)) {}

  // ndjson, one entry per line:
  // {"agent":..,"step":..,"turn":..,"content":..,"tool_calls":[..],"usage":{..}}
  static Script parse(const std::string& text) {
    std::vector<ScriptEntry> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError("script", lineno, e.what());
      }
      ScriptEntry entry;
      entry.agent = j.at("agent").get<std::string>();
      entry.step = j.at("step").get<int>();
      entry.turn = j.at("turn").get<int>();
      entry.content = j.value("content", "");
      if (j.contains("tool_calls"))
        for (const auto& call : j["tool_calls"])
          entry.tool_calls.push_back(
              {call.at("id").get<std::string>(),
               call.at("name").get<std::string>(),
               call.at("arguments").get<std::string>()});
      if (j.contains("usage"))
        entry.usage = {j["usage"].value("prompt_tokens", 0LL),
                       j["usage"].value("completion_tokens", 0LL)};
      entries.push_back(std::move(entry));
    }
    return Script(std::move(entries));
  }

  static Script load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFileError(path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  std::string serialize() const {
    std::string out;
    for (const auto& e : entries_) {
      nlohmann::json j = {{"agent", e.agent},
                          {"step", e.step},
                          {"turn", e.turn},
                          {"content", e.content}};
      if (!e.tool_calls.empty()) {
        auto& calls = j["tool_calls"] = nlohmann::json::array();
        for (const auto& call : e.tool_calls)
          calls.push_back({{"id", call.id},
                           {"name", call.name},
                           {"arguments", call.arguments}});
      }
      j["usage"] = {{"prompt_tokens", e.usage.prompt_tokens},
                    {"completion_tokens", e.usage.completion_tokens}};
      out += j.dump();
      out += '\n';
    }
    return out;
  }

  const std::vector<ScriptEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

 private:
  std::vector<ScriptEntry> entries_;
};

class ScriptedBackend : public ChatBackend {
 public:
  explicit ScriptedBackend(Script script) : script_(std::move(script)) {}

  ChatResponse complete(const ChatRequest& req) override {
    if (req.messages.empty())
      throw BackendError("chat request carries no messages");
    const int turn = turn_counters_[{req.agent, req.step}]++;
    const std::string got = "(" + req.agent + ", step " +
                            std::to_string(req.step) + ", turn " +
                            std::to_string(turn) + ")";
    if (cursor_ >= script_.size()) throw ScriptExhaustedError(got);
    const ScriptEntry& entry = script_.entries()[cursor_];
    if (entry.agent != req.agent || entry.step != req.step ||
        entry.turn != turn)
      throw KeyMismatchError(entry.key(), got);
    ++cursor_;
    ChatResponse resp;
    if (!entry.content.empty()) resp.content = entry.content;
    resp.tool_calls = entry.tool_calls;
    resp.usage = entry.usage;
    resp.finish_reason = entry.tool_calls.empty() ? FinishReason::kStop
                                                  : FinishReason::kToolCalls;
    return resp;
  }

  size_t cursor() const { return cursor_; }
  const Script& script() const { return script_; }

 private:
  Script script_;
  size_t cursor_ = 0;
  std::map<std::pair<std::string, int>, int> turn_counters_;
};

}  // namespace trizagents
