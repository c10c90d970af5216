#pragma once

// Post-run metrics. A node call is any supervisor routing turn, agent
// invocation turn or tool dispatch; this definition is recorded in the
// serialized report so the numbers are comparable with other systems that
// count differently.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "trizagents/conversation.hpp"

namespace trizagents {

struct Limits {
  int max_node_calls_per_step = 25;
  int max_tool_rounds_per_turn = 4;
  int max_router_retries = 2;
  long long max_total_tokens = 0;  // 0 = unlimited

  void validate() const {
    if (max_node_calls_per_step <= 0 || max_tool_rounds_per_turn <= 0 ||
        max_router_retries < 0 || max_total_tokens < 0)
      throw ConfigError("limits must be positive");
  }
};

struct RunReport {
  long long node_calls = 0;
  std::map<int, long long> node_calls_per_step;
  long long routings = 0;
  long long agent_invocations = 0;
  long long tool_dispatches = 0;

  TokenUsage usage_total;
  std::map<std::string, TokenUsage> usage_per_agent;
  std::map<int, TokenUsage> usage_per_step;

  long long wall_time_ms = 0;
  std::vector<std::string> limit_hits;
  std::vector<std::string> artifact_paths;

  void record_backend_call(const std::string& agent, int step,
                           bool is_routing) {
    ++node_calls;
    ++node_calls_per_step[step];
    if (is_routing)
      ++routings;
    else
      ++agent_invocations;
    (void)agent;
  }

  void record_tool_dispatch(int step) {
    ++node_calls;
    ++node_calls_per_step[step];
    ++tool_dispatches;
  }
};

// Run totals grow by exactly u; per-agent and per-step breakdowns follow.
inline void accumulate_usage(RunReport& report, const std::string& agent,
                             int step, const TokenUsage& u) {
  report.usage_total += u;
  report.usage_per_agent[agent] += u;
  report.usage_per_step[step] += u;
}

inline nlohmann::json report_to_json(const RunReport& r) {
  nlohmann::json j;
  j["node_call_definition"] =
      "supervisor routings + agent invocations + tool dispatches";
  j["node_calls"] = r.node_calls;
  j["routings"] = r.routings;
  j["agent_invocations"] = r.agent_invocations;
  j["tool_dispatches"] = r.tool_dispatches;
  for (const auto& [step, n] : r.node_calls_per_step)
    j["node_calls_per_step"][std::to_string(step)] = n;
  j["usage"] = {{"prompt_tokens", r.usage_total.prompt_tokens},
                {"completion_tokens", r.usage_total.completion_tokens},
                {"total_tokens", r.usage_total.total_tokens()}};
  for (const auto& [agent, u] : r.usage_per_agent)
    j["usage_per_agent"][agent] = {{"prompt_tokens", u.prompt_tokens},
                                   {"completion_tokens", u.completion_tokens},
                                   {"total_tokens", u.total_tokens()}};
  for (const auto& [step, u] : r.usage_per_step)
    j["usage_per_step"][std::to_string(step)] = {
        {"prompt_tokens", u.prompt_tokens},
        {"completion_tokens", u.completion_tokens},
        {"total_tokens", u.total_tokens()}};
  j["wall_time_ms"] = r.wall_time_ms;
  j["limit_hits"] = r.limit_hits;
  j["artifact_paths"] = r.artifact_paths;
  return j;
}

}  // namespace trizagents
