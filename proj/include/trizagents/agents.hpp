#pragma once

// Agent profiles, the default eight-member team, supervisor routing and the
// single-agent turn loop.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "trizagents/backend.hpp"
#include "trizagents/conversation.hpp"
#include "trizagents/metrics.hpp"
#include "trizagents/tools.hpp"

namespace trizagents {

enum class ContextMode { kFullMessages, kDocsAndMessages };

// Profiling prompts are assembled from exactly four elements: Name, Role,
// Tasks and Responsibilities, Context.
struct AgentProfile {
  std::string name;  // no whitespace, unique within the team
  std::string role;
  std::string responsibilities;
  ContextMode context_mode = ContextMode::kDocsAndMessages;
  std::vector<ToolSpec> toolset;
  std::string extra_instructions;
};

struct Team {
  std::vector<AgentProfile> members;
  AgentProfile supervisor;
  std::string documentation_agent;

  const AgentProfile* find(const std::string& name) const {
    for (const auto& m : members)
      if (m.name == name) return &m;
    if (supervisor.name == name) return &supervisor;
    return nullptr;
  }

  std::vector<std::string> member_names() const {
    std::vector<std::string> out;
    for (const auto& m : members) out.push_back(m.name);
    return out;
  }
};

// Default team per the eight-member composition; the supervisor carries no
// tools.
inline const std::vector<std::string>& default_member_names() {
  static const std::vector<std::string> names = {
      "MechanicalEngineer",    "ElectricalEngineer",
      "ControlSystemsEngineer", "SafetyEngineer",
      "TRIZSpecialist",        "OperationsSpecialist",
      "DocumentationSpecialist"};
  return names;
}

inline constexpr const char* kSupervisorName = "ProjectManager";
inline constexpr const char* kDocumentationAgent = "DocumentationSpecialist";
inline constexpr const char* kFinishToken = "FINISH";

// --- profile files ---
//
// prompts/<AgentName>.txt:
//   # name: MechanicalEngineer
//   # context_mode: docs_and_messages
//   ## Role
//   ...
//   ## Tasks and Responsibilities
//   ...
//   ## Extra Instructions
//   ...
inline AgentProfile parse_profile(const std::string& text,
                                  const std::string& source) {
  AgentProfile profile;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::map<std::string, std::string> sections;
  while (std::getline(in, line)) {
    if (line.rfind("# name:", 0) == 0) {
      profile.name = line.substr(7);
      profile.name.erase(0, profile.name.find_first_not_of(' '));
    } else if (line.rfind("# context_mode:", 0) == 0) {
      std::string mode = line.substr(15);
      mode.erase(0, mode.find_first_not_of(' '));
      if (mode == "full_messages")
        profile.context_mode = ContextMode::kFullMessages;
      else if (mode == "docs_and_messages")
        profile.context_mode = ContextMode::kDocsAndMessages;
      else
        throw ParseError(source, 0, "unknown context_mode \"" + mode + "\"");
    } else if (line.rfind("## ", 0) == 0) {
      section = line.substr(3);
    } else if (!section.empty()) {
      sections[section] += line;
      sections[section] += '\n';
    }
  }
  auto trimmed = [&](const std::string& key) {
    auto it = sections.find(key);
    if (it == sections.end()) return std::string();
    std::string s = it->second;
    while (!s.empty() && std::isspace((unsigned char)s.back())) s.pop_back();
    size_t start = s.find_first_not_of(" \t\n");
    return start == std::string::npos ? std::string() : s.substr(start);
  };
  profile.role = trimmed("Role");
  profile.responsibilities = trimmed("Tasks and Responsibilities");
  profile.extra_instructions = trimmed("Extra Instructions");
  if (profile.name.empty())
    throw ParseError(source, 0, "profile is missing \"# name:\"");
  if (profile.name.find_first_of(" \t") != std::string::npos)
    throw ParseError(source, 0, "agent name must not contain whitespace");
  if (profile.role.empty() || profile.responsibilities.empty())
    throw ParseError(source, 0,
                     "profile needs Role and Tasks and Responsibilities");
  return profile;
}

inline AgentProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_profile(buf.str(), path.filename().string());
}

// Loads the eight profiles from prompts_dir and wires up toolsets: web
// search for every worker, the four TRIZ tools added for the TRIZ
// Specialist, nothing for the supervisor.
inline Team build_default_team(const ToolRegistry& registry,
                               const std::filesystem::path& prompts_dir) {
  Team team;
  for (const auto& name : default_member_names()) {
    AgentProfile profile = load_profile(prompts_dir / (name + ".txt"));
    if (profile.name != name)
      throw ConfigError("profile file " + name + ".txt declares name \"" +
                        profile.name + "\"");
    profile.toolset = registry.toolset(name);
    team.members.push_back(std::move(profile));
  }
  team.supervisor =
      load_profile(prompts_dir / (std::string(kSupervisorName) + ".txt"));
  team.supervisor.toolset.clear();
  team.documentation_agent = kDocumentationAgent;
  return team;
}

// Default toolset assignment for the registry, matching the team contract.
inline void assign_default_toolsets(ToolRegistry& registry) {
  for (const auto& name : default_member_names())
    registry.assign(name, kWebSearchTool);
  registry.assign("TRIZSpecialist", kTrizFeaturesTool);
  registry.assign("TRIZSpecialist", kContradictionMatrixTool);
  registry.assign("TRIZSpecialist", kInventivePrinciplesTool);
  registry.assign("TRIZSpecialist", kTrizRagTool);
}

// --- routing ---

struct RouterDecision {
  bool finish = false;
  std::string next;  // member name when finish == false
  std::string raw;   // model output as received
  int retries_used = 0;
};

namespace detail {

inline std::string normalize_token(const std::string& s) {
  std::string out;
  for (unsigned char c : s)
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
  return out;
}

// Matches the routing token against the closed decision set. Exact match on
// the whole normalized output first; otherwise the output must mention
// exactly one distinct roster name (or FINISH).
inline std::optional<std::string> match_decision(
    const std::string& raw, const std::vector<std::string>& members) {
  const std::string whole = normalize_token(raw);
  if (whole == normalize_token(kFinishToken)) return std::string(kFinishToken);
  for (const auto& name : members)
    if (whole == normalize_token(name)) return name;

  std::vector<std::string> mentioned;
  auto note = [&](const std::string& name) {
    if (std::find(mentioned.begin(), mentioned.end(), name) ==
        mentioned.end())
      mentioned.push_back(name);
  };
  for (const auto& name : members)
    if (whole.find(normalize_token(name)) != std::string::npos) note(name);
  if (whole.find(normalize_token(kFinishToken)) != std::string::npos)
    note(kFinishToken);
  if (mentioned.size() == 1) return mentioned.front();
  return std::nullopt;
}

}  // namespace detail

// Renders the conversation for the {messages} template input.
inline std::string render_messages(const Transcript& transcript) {
  std::string out;
  for (const auto& m : transcript.messages()) {
    switch (m.role) {
      case Role::kHuman:
        out += m.sender + ": " + m.content + "\n";
        break;
      case Role::kAi:
        out += m.sender + ": " + m.content;
        for (const auto& call : m.tool_calls)
          out += "\n  [calls tool " + call.name + " " + call.arguments + "]";
        out += "\n";
        break;
      case Role::kTool:
        out += "[tool " + m.sender + "]: " + m.content + "\n";
        break;
      case Role::kSystem:
        break;
    }
  }
  return out;
}

inline std::string render_steps_documentation(
    const std::vector<StepDocument>& docs) {
  if (docs.empty()) return "(no steps documented yet)";
  std::string out;
  for (const auto& doc : docs) {
    out += "### Step " + std::to_string(doc.step) + ": " + doc.title + "\n";
    out += doc.body;
    out += "\n\n";
  }
  return out;
}

// Asks the supervisor who should act next. The supervisor's prose enters the
// transcript; the routing token is extracted from it. Unparseable output is
// re-asked with a corrective instruction up to max_router_retries times,
// after which the decision falls back to Finish so the run stays bounded.
inline RouterDecision route_next(ChatBackend& backend,
                                 const PromptTemplate& router_template,
                                 const BackendConfig& backend_config,
                                 const Team& team, int step,
                                 Transcript& transcript,
                                 const std::vector<StepDocument>& docs,
                                 RunReport& report, int max_router_retries) {
  std::string names;
  for (const auto& name : team.member_names()) {
    if (!names.empty()) names += ", ";
    names += name;
  }
  const std::string prompt = router_template.render(
      {{"messages", render_messages(transcript)},
       {"steps_documentation", render_steps_documentation(docs)},
       {"members_names", names}});

  RouterDecision decision;
  std::vector<Message> request_messages = {Message::system(prompt)};
  for (int attempt = 0;; ++attempt) {
    ChatRequest req;
    req.model = backend_config.model;
    req.temperature = backend_config.temperature;
    req.messages = request_messages;
    req.tools_enabled = false;
    req.agent = team.supervisor.name;
    req.step = step;
    ChatResponse resp = backend.complete(req);
    report.record_backend_call(team.supervisor.name, step, /*is_routing=*/true);
    accumulate_usage(report, team.supervisor.name, step, resp.usage);

    const std::string raw = resp.content.value_or("");
    Message supervisor_msg = Message::ai(team.supervisor.name, raw, {},
                                         resp.usage);
    if (!raw.empty()) transcript.append(supervisor_msg);

    decision.raw = raw;
    decision.retries_used = attempt;
    auto matched = detail::match_decision(raw, team.member_names());
    if (matched) {
      decision.finish = (*matched == kFinishToken);
      if (!decision.finish) decision.next = *matched;
      return decision;
    }
    if (attempt >= max_router_retries) {
      decision.finish = true;
      decision.next.clear();
      report.limit_hits.push_back(
          "router: unparseable supervisor output after " +
          std::to_string(attempt + 1) + " attempts in step " +
          std::to_string(step) + "; defaulting to FINISH");
      return decision;
    }
    request_messages.push_back(Message::ai(team.supervisor.name, raw));
    request_messages.push_back(Message::system(
        "Your previous answer could not be mapped to a decision. Reply with "
        "exactly one of the following options and nothing else: " +
        names + " or " + kFinishToken + "."));
  }
}

// --- context assembly ---

// Builds the system prompt from the four profiling elements. The agent's
// name appears verbatim so the model can find itself in the conversation.
inline std::string render_system_prompt(
    const AgentProfile& profile, int step, const std::string& step_title,
    const std::string& step_instruction,
    const std::vector<StepDocument>& docs) {
  std::string prompt;
  prompt += "Name: " + profile.name + "\n\n";
  prompt += "Role:\n" + profile.role + "\n\n";
  prompt += "Tasks and Responsibilities:\n" + profile.responsibilities +
            "\n\n";
  prompt += "Context:\n";
  prompt += "The team is working on step " + std::to_string(step) +
            " of the TRIZ workflow: \"" + step_title + "\". " +
            step_instruction + "\n";
  prompt += "Documentation of previously performed steps:\n" +
            render_steps_documentation(docs) + "\n";
  prompt += "The conversation messages of the current step follow.\n";
  if (!profile.extra_instructions.empty())
    prompt += "\n" + profile.extra_instructions + "\n";
  return prompt;
}

// Projects the step transcript into the context for one agent. Foreign ai
// answers are demoted to human; foreign tool rounds are folded into human
// text notes so no foreign ai-role message ever reaches the model.
inline std::vector<Message> assemble_context(
    const AgentProfile& profile, const Transcript& transcript,
    const std::string& system_prompt) {
  std::vector<Message> context;
  context.push_back(Message::system(system_prompt));
  // call ids belonging to this agent, so its own tool results stay tool-role
  std::set<std::string> own_calls;
  for (const auto& m : transcript.messages()) {
    switch (m.role) {
      case Role::kSystem:
        break;
      case Role::kHuman:
        context.push_back(m);
        break;
      case Role::kAi:
        if (m.sender == profile.name) {
          for (const auto& call : m.tool_calls) own_calls.insert(call.id);
          context.push_back(m);
        } else if (m.tool_calls.empty()) {
          context.push_back(demote_to_human(m));
        } else {
          std::string note = demotion_prefix(m.sender);
          note += m.content.empty() ? "(tool use)" : m.content;
          for (const auto& call : m.tool_calls)
            note += "\n[called tool " + call.name + " with " + call.arguments +
                    "]";
          context.push_back(Message::human(m.sender, note));
        }
        break;
      case Role::kTool:
        if (own_calls.count(m.tool_call_id)) {
          context.push_back(m);
        } else {
          context.push_back(Message::human(
              m.sender, "[tool " + m.sender + " returned]: " + m.content));
        }
        break;
    }
  }
  return context;
}

// --- the agent turn loop ---

struct AgentTurn {
  Message final_answer;
  std::vector<std::pair<ToolCall, ToolResult>> rounds;
  std::vector<Message> produced;  // everything to append to the transcript
};

// Runs one agent until it produces a no-tool answer. Tool calls are
// dispatched in order and fed back; after max_tool_rounds_per_turn rounds
// the model is re-invoked once with tools disabled to force a textual
// answer.
inline AgentTurn invoke_agent(ChatBackend& backend,
                              const BackendConfig& backend_config,
                              const ToolDispatcher& registry,
                              const AgentProfile& profile,
                              std::vector<Message> context, int step,
                              RunReport& report,
                              int max_tool_rounds_per_turn) {
  AgentTurn turn;
  int rounds = 0;
  for (;;) {
    ChatRequest req;
    req.model = backend_config.model;
    req.temperature = backend_config.temperature;
    req.messages = context;
    req.tools = profile.toolset;
    req.tools_enabled = rounds < max_tool_rounds_per_turn;
    req.agent = profile.name;
    req.step = step;
    ChatResponse resp = backend.complete(req);
    report.record_backend_call(profile.name, step, /*is_routing=*/false);
    accumulate_usage(report, profile.name, step, resp.usage);

    Message ai_msg = Message::ai(profile.name, resp.content.value_or(""),
                                 resp.tool_calls, resp.usage);
    if (resp.tool_calls.empty()) {
      turn.final_answer = ai_msg;
      turn.produced.push_back(ai_msg);
      return turn;
    }
    if (rounds >= max_tool_rounds_per_turn)
      throw ToolRoundCapExceededError();
    ++rounds;
    turn.produced.push_back(ai_msg);
    context.push_back(ai_msg);
    for (const auto& call : resp.tool_calls) {
      ToolResult result = registry.dispatch(profile.name, call);
      report.record_tool_dispatch(step);
      turn.rounds.emplace_back(call, result);
      Message tool_msg = Message::tool(call.name, call.id, result.content);
      turn.produced.push_back(tool_msg);
      context.push_back(tool_msg);
    }
  }
}

}  // namespace trizagents
