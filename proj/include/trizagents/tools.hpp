#pragma once

// Tool registry and the built-in tools: web search, TRIZ knowledge tools and
// lexical retrieval. Tool failures never abort a run; unknown tools, bad
// arguments and provider failures all come back as ok=false results so the
// calling agent can read the diagnostic and recover.

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trizagents/backend.hpp"
#include "trizagents/rag.hpp"
#include "trizagents/search.hpp"
#include "trizagents/triz_knowledge.hpp"

namespace trizagents {

struct ToolResult {
  std::string call_id;
  std::string content;  // non-empty even on failure
  bool ok = true;
  std::string diagnostics;
};

// Tool names
inline constexpr const char* kWebSearchTool = "web_search";
inline constexpr const char* kTrizFeaturesTool = "triz_features";
inline constexpr const char* kContradictionMatrixTool = "contradiction_matrix";
inline constexpr const char* kInventivePrinciplesTool = "inventive_principles";
inline constexpr const char* kTrizRagTool = "triz_rag";

// Anything that can resolve a tool call into a result. The registry is the
// real implementation; replay substitutes one that returns recorded results.
class ToolDispatcher {
 public:
  virtual ~ToolDispatcher() = default;
  virtual ToolResult dispatch(const std::string& agent,
                              const ToolCall& call) const = 0;
};

class ToolRegistry : public ToolDispatcher {
 public:
  using Handler = std::function<std::string(const nlohmann::json& args)>;

  void register_tool(ToolSpec spec, Handler handler) {
    handlers_[spec.name] = std::move(handler);
    specs_[spec.name] = std::move(spec);
  }

  void assign(const std::string& agent, const std::string& tool_name) {
    if (!specs_.count(tool_name))
      throw Error("cannot assign unregistered tool \"" + tool_name + "\"");
    assignments_[agent].insert(tool_name);
  }

  std::vector<ToolSpec> toolset(const std::string& agent) const {
    std::vector<ToolSpec> out;
    auto it = assignments_.find(agent);
    if (it == assignments_.end()) return out;
    for (const auto& name : it->second) out.push_back(specs_.at(name));
    return out;
  }

  bool agent_has(const std::string& agent, const std::string& tool) const {
    auto it = assignments_.find(agent);
    return it != assignments_.end() && it->second.count(tool) > 0;
  }

  // The result always returns to the calling agent; every failure mode is
  // reported in-band as text.
  ToolResult dispatch(const std::string& agent,
                      const ToolCall& call) const override {
    ToolResult result;
    result.call_id = call.id;
    if (!agent_has(agent, call.name)) {
      result.ok = false;
      result.diagnostics = "unknown tool";
      result.content = "Error: unknown tool \"" + call.name +
                       "\"; it is not in your toolset.";
      return result;
    }
    nlohmann::json args;
    if (call.arguments.empty()) {
      args = nlohmann::json::object();
    } else {
      try {
        args = nlohmann::json::parse(call.arguments);
      } catch (const nlohmann::json::exception& e) {
        result.ok = false;
        result.diagnostics = e.what();
        result.content = std::string("Error: tool arguments are not a JSON "
                                     "object: ") + e.what();
        return result;
      }
    }
    try {
      result.content = handlers_.at(call.name)(args);
      if (result.content.empty()) result.content = "(no output)";
    } catch (const std::exception& e) {
      result.ok = false;
      result.diagnostics = e.what();
      result.content = std::string("Error: tool \"") + call.name +
                       "\" failed: " + e.what();
    }
    return result;
  }

 private:
  std::map<std::string, ToolSpec> specs_;
  std::map<std::string, Handler> handlers_;
  std::map<std::string, std::set<std::string>> assignments_;
};

namespace detail {

inline int require_int(const nlohmann::json& args, const std::string& field) {
  if (!args.contains(field))
    throw Error("missing required field \"" + field + "\"");
  const auto& v = args[field];
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    try {
      return std::stoi(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw Error("field \"" + field + "\" must be an integer");
}

inline std::string require_string(const nlohmann::json& args,
                                  const std::string& field) {
  if (!args.contains(field) || !args[field].is_string())
    throw Error("missing required field \"" + field + "\"");
  return args[field].get<std::string>();
}

}  // namespace detail

// --- tool factories ---

inline ToolSpec web_search_spec() {
  return {kWebSearchTool,
          "Search the web. Returns a ranked list of results with url and "
          "content snippet.",
          {{"query", "string", "The search query.", true},
           {"k", "integer", "Maximum number of results (default 5).", false}}};
}

inline void register_web_search(ToolRegistry& registry,
                                std::shared_ptr<SearchProvider> provider) {
  registry.register_tool(web_search_spec(), [provider](const nlohmann::json&
                                                           args) {
    const std::string query = detail::require_string(args, "query");
    const int k = args.value("k", 5);
    if (k < 1) throw Error("k must be >= 1");
    auto results = provider->search(query, k);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : results)
      out.push_back({{"url", r.url}, {"content", r.content}});
    return out.dump(2);
  });
}

// Outputs are numbered plain-text lists rendered for model consumption.
inline void register_triz_tools(ToolRegistry& registry,
                                std::shared_ptr<const KnowledgeBase> kb) {
  registry.register_tool(
      {kTrizFeaturesTool,
       "Return the list of 39 TRIZ engineering parameters (features).",
       {}},
      [kb](const nlohmann::json&) {
        std::string out = "The 39 TRIZ engineering parameters:\n";
        for (const auto& p : kb->parameters())
          out += std::to_string(p.id) + ". " + p.name + "\n";
        return out;
      });

  registry.register_tool(
      {kContradictionMatrixTool,
       "Look up the contradiction matrix: returns the inventive principles "
       "worth applying for an (improving, worsening) parameter pair.",
       {{"improving", "integer", "Id of the improving parameter (1-39).",
         true},
        {"worsening", "integer", "Id of the worsening parameter (1-39).",
         true}}},
      [kb](const nlohmann::json& args) {
        const int improving = detail::require_int(args, "improving");
        const int worsening = detail::require_int(args, "worsening");
        auto ids = kb->lookup_matrix(improving, worsening);
        std::string out = "Improving \"" + kb->parameter(improving).name +
                          "\" while worsening \"" +
                          kb->parameter(worsening).name + "\":\n";
        if (ids.empty())
          return out + "no inventive principles recorded for this pair\n";
        int n = 0;
        for (int id : ids)
          out += std::to_string(++n) + ". Principle " + std::to_string(id) +
                 ": " + kb->principle(id).name + "\n";
        return out;
      });

  registry.register_tool(
      {kInventivePrinciplesTool,
       "Return full details (description and sub-principles) for the given "
       "inventive principle ids.",
       {{"ids", "array", "Inventive principle ids (1-40).", true}}},
      [kb](const nlohmann::json& args) {
        if (!args.contains("ids") || !args["ids"].is_array())
          throw Error("missing required field \"ids\"");
        std::vector<int> ids;
        for (const auto& v : args["ids"]) ids.push_back(v.get<int>());
        auto records = kb->principle_details(ids);
        std::string out;
        for (const auto& p : records) {
          out += std::to_string(p.id) + ". " + p.name + ": " + p.description +
                 "\n";
          for (const auto& sub : p.sub_principles) out += "   - " + sub + "\n";
        }
        if (out.empty()) out = "(no principles requested)";
        return out;
      });
}

inline void register_triz_rag(ToolRegistry& registry,
                              std::shared_ptr<const RagStore> store) {
  registry.register_tool(
      {kTrizRagTool,
       "Answer questions from the TRIZ source materials (books, articles, "
       "reference pages). Returns the most relevant passages.",
       {{"query", "string", "What to look up in the TRIZ materials.", true},
        {"k", "integer", "Maximum number of passages (default 4).", false}}},
      [store](const nlohmann::json& args) {
        const std::string query = detail::require_string(args, "query");
        const int k = args.value("k", 4);
        if (k < 1) throw Error("k must be >= 1");
        auto [context, chunks] = store->query(query, k);
        return context;
      });
}

}  // namespace trizagents
