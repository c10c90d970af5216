#pragma once

// Run configuration: a key=value file plus command-line overrides, resolved
// into backend, limits, data locations and search mode. Every key listed in
// schema() is accepted both in the file and as an override.

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "trizagents/backend.hpp"
#include "trizagents/errors.hpp"
#include "trizagents/metrics.hpp"

namespace trizagents {

struct RunConfig {
  BackendConfig backend;
  Limits limits;
  std::string search_mode = "fixture";  // fixture | live
  std::string search_fixtures = "tests/fixtures/search_fixtures.json";
  std::string search_url;
  std::string data_dir = "data/triz";
  std::string rag_corpus_dir = "data/rag_corpus";
  std::string prompts_dir = "prompts";
  std::string workflow_file = "data/workflow.tsv";
  std::string output_dir = "runs";
};

struct ConfigKey {
  std::string name;
  std::string description;
};

inline const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"backend", "backend kind: live or scripted"},
      {"script", "script file for the scripted backend"},
      {"base_url", "base URL of the OpenAI-compatible endpoint"},
      {"api_key_env", "environment variable holding the API key"},
      {"model", "model name sent on the wire"},
      {"temperature", "sampling temperature"},
      {"timeout_seconds", "per-request timeout"},
      {"max_retries", "transport retry count for 5xx and network errors"},
      {"search", "web search mode: fixture or live"},
      {"search_fixtures", "fixture file for the fixture search provider"},
      {"search_url", "base URL of the live search provider"},
      {"data_dir", "directory with the TRIZ knowledge files"},
      {"rag_corpus_dir", "directory with the retrieval corpus"},
      {"prompts_dir", "directory with the agent profile files"},
      {"workflow_file", "TSV file defining the workflow steps"},
      {"output_dir", "root directory for run artifacts"},
      {"max_node_calls_per_step", "node-call cap per workflow step"},
      {"max_tool_rounds_per_turn", "tool-round cap per agent turn"},
      {"max_router_retries", "re-asks for unparseable supervisor output"},
      {"max_total_tokens", "whole-run token cap, 0 for unlimited"},
  };
  return schema;
}

namespace detail {

inline int config_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key \"" + key + "\" needs an integer, got \"" +
                      value + "\"");
  }
}

inline double config_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key \"" + key + "\" needs a number, got \"" +
                      value + "\"");
  }
}

}  // namespace detail

inline void apply_config_value(RunConfig& config, const std::string& key,
                               const std::string& value) {
  if (key == "backend") {
    if (value == "live")
      config.backend.kind = BackendKind::kLive;
    else if (value == "scripted")
      config.backend.kind = BackendKind::kScripted;
    else
      throw ConfigError("backend must be live or scripted, got \"" + value +
                        "\"");
  } else if (key == "script") {
    config.backend.script_path = value;
  } else if (key == "base_url") {
    config.backend.base_url = value;
  } else if (key == "api_key_env") {
    config.backend.api_key_env = value;
  } else if (key == "model") {
    config.backend.model = value;
  } else if (key == "temperature") {
    config.backend.temperature = detail::config_double(key, value);
  } else if (key == "timeout_seconds") {
    config.backend.timeout_seconds = detail::config_int(key, value);
  } else if (key == "max_retries") {
    config.backend.max_retries = detail::config_int(key, value);
  } else if (key == "search") {
    if (value != "fixture" && value != "live")
      throw ConfigError("search must be fixture or live, got \"" + value +
                        "\"");
    config.search_mode = value;
  } else if (key == "search_fixtures") {
    config.search_fixtures = value;
  } else if (key == "search_url") {
    config.search_url = value;
  } else if (key == "data_dir") {
    config.data_dir = value;
  } else if (key == "rag_corpus_dir") {
    config.rag_corpus_dir = value;
  } else if (key == "prompts_dir") {
    config.prompts_dir = value;
  } else if (key == "workflow_file") {
    config.workflow_file = value;
  } else if (key == "output_dir") {
    config.output_dir = value;
  } else if (key == "max_node_calls_per_step") {
    config.limits.max_node_calls_per_step = detail::config_int(key, value);
  } else if (key == "max_tool_rounds_per_turn") {
    config.limits.max_tool_rounds_per_turn = detail::config_int(key, value);
  } else if (key == "max_router_retries") {
    config.limits.max_router_retries = detail::config_int(key, value);
  } else if (key == "max_total_tokens") {
    config.limits.max_total_tokens = detail::config_int(key, value);
  } else {
    throw ConfigError("unknown config key \"" + key + "\"");
  }
}

// File format: one key=value per line; blank lines and # comments skipped.
inline RunConfig load_run_config(const std::filesystem::path& path,
                                 RunConfig config = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected key=value");
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    apply_config_value(config, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
  return config;
}

}  // namespace trizagents
