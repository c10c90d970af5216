#pragma once

// The workflow engine. Six steps run as supervised conversation loops with
// safety limits; each step ends in exactly one document, and a final report
// compiles all six. The step index never decreases: there are no feedback
// loops by construction.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "trizagents/agents.hpp"
#include "trizagents/backend.hpp"
#include "trizagents/conversation.hpp"
#include "trizagents/metrics.hpp"
#include "trizagents/scripted_backend.hpp"
#include "trizagents/tools.hpp"

namespace trizagents {

struct WorkflowStep {
  int id = 0;
  std::string title;
  std::string instruction;
};

struct WorkflowDefinition {
  std::vector<WorkflowStep> steps;

  // TSV: id<TAB>title<TAB>instruction, one step per line.
  static WorkflowDefinition load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFileError(path.string());
    WorkflowDefinition wf;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      auto fields = detail::split(line, '\t');
      if (fields.size() != 3)
        throw ParseError(path.filename().string(), lineno,
                         "expected 3 tab-separated fields");
      wf.steps.push_back({detail::parse_int(fields[0],
                                            path.filename().string(), lineno),
                          fields[1], fields[2]});
    }
    wf.validate();
    return wf;
  }

  void validate() const {
    if (steps.empty()) throw ConfigError("workflow has no steps");
    for (size_t i = 0; i < steps.size(); ++i)
      if (steps[i].id != static_cast<int>(i) + 1)
        throw ConfigError("workflow step ids must be contiguous from 1");
  }
};

enum class RunStatus { kRunning, kCompleted, kAborted };

struct RunState {
  std::string run_id;
  int current_step = 0;
  std::vector<Transcript> transcripts;
  std::vector<StepDocument> documents;
  RunStatus status = RunStatus::kRunning;
  std::string abort_reason;
};

// Records every backend exchange so a run can be replayed deterministically.
// The final-report compile turn is keyed with step 0.
class RecordingBackend : public ChatBackend {
 public:
  explicit RecordingBackend(ChatBackend& inner) : inner_(inner) {}

  ChatResponse complete(const ChatRequest& req) override {
    ChatResponse resp = inner_.complete(req);
    ScriptEntry entry;
    entry.agent = req.agent;
    entry.step = req.step;
    entry.turn = turn_counters_[{req.agent, req.step}]++;
    entry.content = resp.content.value_or("");
    entry.tool_calls = resp.tool_calls;
    entry.usage = resp.usage;
    entries_.push_back(std::move(entry));
    return resp;
  }

  Script script() const { return Script(entries_); }

 private:
  ChatBackend& inner_;
  std::vector<ScriptEntry> entries_;
  std::map<std::pair<std::string, int>, int> turn_counters_;
};

// Replays tool results recorded in persisted transcripts, keyed by call id.
class ReplayDispatcher : public ToolDispatcher {
 public:
  explicit ReplayDispatcher(const std::vector<Transcript>& transcripts) {
    for (const auto& t : transcripts)
      for (const auto& m : t.messages())
        if (m.role == Role::kTool) results_[m.tool_call_id] = m.content;
  }

  ToolResult dispatch(const std::string&, const ToolCall& call) const override {
    auto it = results_.find(call.id);
    if (it == results_.end())
      return {call.id, "Error: no recorded result for this call.", false,
              "unrecorded tool call " + call.id};
    return {call.id, it->second, true, ""};
  }

 private:
  std::map<std::string, std::string> results_;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes run artifacts into one per-run directory.
class ArtifactSink {
 public:
  ArtifactSink(std::filesystem::path root, std::string run_id)
      : dir_(root / run_id) {
    std::filesystem::create_directories(dir_);
  }

  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path write(const std::string& filename,
                              const std::string& content) const {
    const auto path = dir_ / filename;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
  }

 private:
  std::filesystem::path dir_;
};

inline std::string render_step_document(const StepDocument& doc) {
  std::string out = "# Step " + std::to_string(doc.step) + ": " + doc.title +
                    "\n\n";
  out += doc.body;
  if (!out.empty() && out.back() != '\n') out += '\n';
  if (doc.truncated)
    out += "\n_Note: this step hit the node-call limit and was truncated._\n";
  return out;
}

inline std::string serialize_run_transcripts(
    const std::vector<Transcript>& transcripts) {
  std::string out;
  for (const auto& t : transcripts) out += serialize_transcript(t);
  return out;
}

inline std::vector<Transcript> parse_run_transcripts(const std::string& text) {
  std::vector<Transcript> out;
  std::istringstream in(text);
  std::string line;
  std::string current;
  auto flush = [&]() {
    if (!current.empty()) {
      out.push_back(parse_transcript(current));
      current.clear();
    }
  };
  while (std::getline(in, line)) {
    if (line.find("\"schema\"") != std::string::npos) flush();
    current += line;
    current += '\n';
  }
  flush();
  return out;
}

class Orchestrator {
 public:
  Orchestrator(ChatBackend& backend, BackendConfig backend_config,
               const ToolDispatcher& tools, const Team& team,
               PromptTemplate router_template, WorkflowDefinition workflow,
               Limits limits)
      : backend_(&backend),
        backend_config_(std::move(backend_config)),
        tools_(tools),
        team_(team),
        router_template_(std::move(router_template)),
        workflow_(std::move(workflow)),
        limits_(limits) {
    limits_.validate();
  }

  // Documents one step by invoking the documentation agent on the step
  // transcript. pre: transcript non-empty.
  StepDocument document_step(const WorkflowStep& step, Transcript& transcript,
                             RunReport& report,
                             const std::vector<StepDocument>& prior_docs,
                             bool truncated = false) {
    if (transcript.empty())
      throw Error("cannot document an empty step transcript");
    const AgentProfile* ds = team_.find(team_.documentation_agent);
    if (ds == nullptr)
      throw ConfigError("documentation agent \"" + team_.documentation_agent +
                        "\" is not in the team");
    std::string system_prompt = render_system_prompt(
        *ds, step.id, step.title,
        "Write the step document: a concise, complete markdown summary of "
        "what the team established in this step.",
        prior_docs);
    AgentTurn turn =
        invoke_agent(*backend_, backend_config_, tools_, *ds,
                     assemble_context(*ds, transcript, system_prompt),
                     step.id, report, limits_.max_tool_rounds_per_turn);
    for (const auto& m : turn.produced) transcript.append(m);
    StepDocument doc;
    doc.step = step.id;
    doc.title = step.title;
    doc.body = turn.final_answer.content;
    doc.produced_by = ds->name;
    doc.created_at = utc_timestamp();
    doc.truncated = truncated;
    if (doc.body.empty()) doc.body = "(no documentation produced)";
    return doc;
  }

  // One supervised meeting. Ends when the supervisor finishes (with the
  // document already written, or by triggering an automatic one) or when the
  // step node-call cap is hit, which yields a truncated document.
  std::pair<StepDocument, Transcript> run_step(
      const WorkflowStep& step, const std::vector<StepDocument>& prior_docs,
      const std::string& problem, RunReport& report) {
    Transcript transcript(step.id);
    if (step.id == 1) {
      transcript.append(Message::human("user", problem));
    } else {
      transcript.append(Message::human(
          "user", "We now begin step " + std::to_string(step.id) + ": " +
                      step.title + ". " + step.instruction));
    }

    std::optional<StepDocument> document;
    for (;;) {
      if (report.node_calls_per_step[step.id] >=
          limits_.max_node_calls_per_step) {
        report.limit_hits.push_back(
            "step " + std::to_string(step.id) + ": node-call cap (" +
            std::to_string(limits_.max_node_calls_per_step) + ") hit");
        document = document_step(step, transcript, report, prior_docs,
                                 /*truncated=*/true);
        break;
      }
      RouterDecision decision =
          route_next(*backend_, router_template_, backend_config_, team_,
                     step.id, transcript, prior_docs, report,
                     limits_.max_router_retries);
      check_token_limit(report);
      if (decision.finish) {
        if (!document)
          document = document_step(step, transcript, report, prior_docs);
        break;
      }
      if (decision.next == team_.documentation_agent) {
        document = document_step(step, transcript, report, prior_docs);
        continue;
      }
      const AgentProfile* profile = team_.find(decision.next);
      if (profile == nullptr)
        throw Error("router produced unknown member \"" + decision.next +
                    "\"");
      std::string system_prompt = render_system_prompt(
          *profile, step.id, step.title, step.instruction, prior_docs);
      AgentTurn turn = invoke_agent(
          *backend_, backend_config_, tools_, *profile,
          assemble_context(*profile, transcript, system_prompt), step.id,
          report, limits_.max_tool_rounds_per_turn);
      for (const auto& m : turn.produced) transcript.append(m);
      check_token_limit(report);
    }
    return {std::move(*document), std::move(transcript)};
  }

  // pre: exactly one document per workflow step, in order.
  FinalReport compile_final_report(const std::vector<StepDocument>& docs,
                                   RunReport& report) {
    for (size_t i = 0; i < workflow_.steps.size(); ++i) {
      if (i >= docs.size() || docs[i].step != static_cast<int>(i) + 1)
        throw MissingStepDocumentError(static_cast<int>(i) + 1);
    }
    if (docs.size() != workflow_.steps.size())
      throw MissingStepDocumentError(
          static_cast<int>(workflow_.steps.size()));
    const AgentProfile* ds = team_.find(team_.documentation_agent);
    if (ds == nullptr)
      throw ConfigError("documentation agent missing from team");
    std::string prompt = render_system_prompt(
        *ds, 0, "Final Report",
        "Compile the documentation of all workflow steps into one concise "
        "final report.",
        docs);
    std::vector<Message> context = {
        Message::system(prompt),
        Message::human("user",
                       "Please compile the final report from the step "
                       "documentation above.")};
    AgentTurn turn = invoke_agent(*backend_, backend_config_, tools_, *ds,
                                  std::move(context), 0, report,
                                  limits_.max_tool_rounds_per_turn);
    FinalReport final_report;
    final_report.body = turn.final_answer.content;
    for (const auto& doc : docs) final_report.source_docs.push_back(doc.step);
    return final_report;
  }

  enum class AbortKind { kNone, kLimits, kBackend };

  struct RunResult {
    RunStatus status = RunStatus::kCompleted;
    AbortKind abort_kind = AbortKind::kNone;
    std::string abort_reason;
    std::optional<FinalReport> final_report;
    RunReport report;
    RunState state;
  };

  // Executes the whole workflow and persists all artifacts (step documents,
  // transcript, derived script, report) through the sink. Backend failures
  // abort the run with partial artifacts persisted.
  RunResult run_workflow(const std::string& problem, const ArtifactSink& sink,
                         const std::string& run_id) {
    if (problem.empty())
      throw ConfigError("problem statement must be non-empty");
    const auto start = std::chrono::steady_clock::now();
    RecordingBackend recorder(*backend_);
    BackendSwap guard(backend_, recorder);

    RunResult result;
    result.state.run_id = run_id;
    try {
      for (const auto& step : workflow_.steps) {
        result.state.current_step = step.id;
        auto [doc, transcript] =
            run_step(step, result.state.documents, problem, result.report);
        result.state.documents.push_back(std::move(doc));
        result.state.transcripts.push_back(std::move(transcript));
      }
      result.final_report =
          compile_final_report(result.state.documents, result.report);
      result.state.status = RunStatus::kCompleted;
      result.status = RunStatus::kCompleted;
    } catch (const BackendError& e) {
      result.state.status = RunStatus::kAborted;
      result.status = RunStatus::kAborted;
      result.abort_kind = AbortKind::kBackend;
      result.abort_reason = e.what();
    } catch (const TokenLimitExceeded& e) {
      result.state.status = RunStatus::kAborted;
      result.status = RunStatus::kAborted;
      result.abort_kind = AbortKind::kLimits;
      result.abort_reason = e.what();
      result.report.limit_hits.push_back(e.what());
    }

    result.report.wall_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start)
            .count();
    persist(result, recorder, sink, problem);
    return result;
  }

 private:
  struct TokenLimitExceeded : public std::exception {
    explicit TokenLimitExceeded(std::string what) : what_(std::move(what)) {}
    const char* what() const noexcept override { return what_.c_str(); }
    std::string what_;
  };

  // Routes run_step traffic through the recorder for the lifetime of a run.
  struct BackendSwap {
    BackendSwap(ChatBackend*& slot, ChatBackend& replacement)
        : slot_(slot), saved_(slot) {
      slot_ = &replacement;
    }
    ~BackendSwap() { slot_ = saved_; }
    ChatBackend*& slot_;
    ChatBackend* saved_;
  };

  void check_token_limit(const RunReport& report) const {
    if (limits_.max_total_tokens > 0 &&
        report.usage_total.total_tokens() > limits_.max_total_tokens)
      throw TokenLimitExceeded(
          "total token limit (" + std::to_string(limits_.max_total_tokens) +
          ") exceeded");
  }

  void persist(RunResult& result, const RecordingBackend& recorder,
               const ArtifactSink& sink, const std::string& problem) const {
    for (const auto& doc : result.state.documents) {
      auto path = sink.write("step_" + std::to_string(doc.step) + ".md",
                             render_step_document(doc));
      result.report.artifact_paths.push_back(path.string());
    }
    if (result.final_report) {
      auto path = sink.write("final_report.md", result.final_report->body +
                                                    "\n");
      result.report.artifact_paths.push_back(path.string());
    }
    auto tpath = sink.write("transcript.ndjson",
                            serialize_run_transcripts(
                                result.state.transcripts));
    result.report.artifact_paths.push_back(tpath.string());
    auto spath = sink.write("script.ndjson", recorder.script().serialize());
    result.report.artifact_paths.push_back(spath.string());

    nlohmann::json meta = {
        {"run_id", result.state.run_id},
        {"problem", problem},
        {"status", result.status == RunStatus::kCompleted ? "completed"
                                                          : "aborted"},
        {"abort_reason", result.abort_reason},
        {"created_at", utc_timestamp()},
        {"model", backend_config_.model},
        {"temperature", backend_config_.temperature},
        {"limits",
         {{"max_node_calls_per_step", limits_.max_node_calls_per_step},
          {"max_tool_rounds_per_turn", limits_.max_tool_rounds_per_turn},
          {"max_router_retries", limits_.max_router_retries},
          {"max_total_tokens", limits_.max_total_tokens}}}};
    sink.write("run_meta.json", meta.dump(2) + "\n");
    auto rpath = sink.write("report.json",
                            report_to_json(result.report).dump(2) + "\n");
    result.report.artifact_paths.push_back(rpath.string());
  }

  ChatBackend* backend_;
  BackendConfig backend_config_;
  const ToolDispatcher& tools_;
  const Team& team_;
  PromptTemplate router_template_;
  WorkflowDefinition workflow_;
  Limits limits_;
};

}  // namespace trizagents
