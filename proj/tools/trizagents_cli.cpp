// Command-line surface: run workflows, inspect the TRIZ knowledge base,
// manage the retrieval corpus and replay recorded runs.
//
// Exit codes: 0 success/completed, 1 replay mismatch, 2 aborted on limits,
// 3 aborted on backend failure, 4 configuration or usage error.

#include <unistd.h>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trizagents/engine.hpp"
#include "trizagents/live_backend.hpp"

namespace {

using namespace trizagents;

constexpr int kExitOk = 0;
constexpr int kExitReplayMismatch = 1;
constexpr int kExitAbortedLimits = 2;
constexpr int kExitAbortedBackend = 3;
constexpr int kExitConfig = 4;

struct GlobalOptions {
  std::string config_file;
  std::string output_dir;
  std::string backend;
  std::string script;
  std::string search;
  int verbosity = 0;
};

RunConfig effective_config(const GlobalOptions& opts) {
  RunConfig config;
  if (!opts.config_file.empty()) config = load_run_config(opts.config_file);
  if (!opts.backend.empty()) apply_config_value(config, "backend", opts.backend);
  if (!opts.script.empty()) apply_config_value(config, "script", opts.script);
  if (!opts.search.empty()) apply_config_value(config, "search", opts.search);
  if (!opts.output_dir.empty())
    apply_config_value(config, "output_dir", opts.output_dir);
  if (opts.verbosity >= 1) {
    std::cerr << "effective config:\n"
              << "  backend = "
              << (config.backend.kind == BackendKind::kLive ? "live"
                                                            : "scripted")
              << "\n  model = " << config.backend.model
              << "\n  temperature = " << config.backend.temperature
              << "\n  search = " << config.search_mode
              << "\n  output_dir = " << config.output_dir
              << "\n  limits = " << config.limits.max_node_calls_per_step
              << "/" << config.limits.max_tool_rounds_per_turn << "/"
              << config.limits.max_router_retries << "/"
              << config.limits.max_total_tokens << "\n";
  }
  return config;
}

std::unique_ptr<ChatBackend> make_backend(const RunConfig& config) {
  if (config.backend.kind == BackendKind::kScripted) {
    if (config.backend.script_path.empty())
      throw ConfigError("scripted backend requires --script or script=");
    return std::make_unique<ScriptedBackend>(
        Script::load(config.backend.script_path));
  }
  return std::make_unique<LiveBackend>(config.backend);
}

std::string default_run_id() {
  return "run-" + std::to_string(std::time(nullptr)) + "-" +
         std::to_string(static_cast<long>(::getpid()));
}

void print_summary(const Orchestrator::RunResult& result) {
  std::cout << "status: "
            << (result.status == RunStatus::kCompleted ? "completed"
                                                       : "aborted");
  if (!result.abort_reason.empty()) std::cout << " (" << result.abort_reason
                                              << ")";
  std::cout << "\nnode calls: " << result.report.node_calls << " ("
            << result.report.routings << " routings, "
            << result.report.agent_invocations << " agent invocations, "
            << result.report.tool_dispatches << " tool dispatches)\n"
            << "total tokens: " << result.report.usage_total.total_tokens()
            << " (" << result.report.usage_total.prompt_tokens << " prompt, "
            << result.report.usage_total.completion_tokens
            << " completion)\n";
  for (const auto& hit : result.report.limit_hits)
    std::cout << "limit hit: " << hit << "\n";
  std::cout << "artifacts:\n";
  for (const auto& path : result.report.artifact_paths)
    std::cout << "  " << path << "\n";
}

int exit_code_for(const Orchestrator::RunResult& result) {
  if (result.status == RunStatus::kCompleted) return kExitOk;
  return result.abort_kind == Orchestrator::AbortKind::kLimits
             ? kExitAbortedLimits
             : kExitAbortedBackend;
}

int cmd_run(const RunConfig& config, const std::string& problem_file,
            std::string run_id) {
  const std::string problem = read_file(problem_file);
  Engine engine = build_engine(config);
  auto backend = make_backend(config);
  Orchestrator orchestrator(*backend, config.backend, engine.registry,
                            engine.team, engine.router_template,
                            engine.workflow, config.limits);
  if (run_id.empty()) run_id = default_run_id();
  ArtifactSink sink(config.output_dir, run_id);
  auto result = orchestrator.run_workflow(problem, sink, run_id);
  print_summary(result);
  return exit_code_for(result);
}

TrizParameter resolve_parameter(const KnowledgeBase& kb,
                                const std::string& token) {
  bool is_id = false;
  int id = 0;
  try {
    size_t pos = 0;
    id = std::stoi(token, &pos);
    is_id = pos == token.size();
  } catch (const std::exception&) {
  }
  if (is_id) return kb.parameter(id);
  auto found = kb.find_parameter(token);
  if (!found) throw UnknownParameterError(token);
  return *found;
}

void print_parameter_candidates(const KnowledgeBase& kb) {
  std::cerr << "known parameters:\n";
  for (const auto& p : kb.parameters())
    std::cerr << "  " << p.id << "  " << p.name << "\n";
}

int cmd_matrix(const RunConfig& config, const std::string& improving,
               const std::string& worsening) {
  auto kb = KnowledgeBase::load(config.data_dir);
  try {
    const TrizParameter imp = resolve_parameter(kb, improving);
    const TrizParameter wor = resolve_parameter(kb, worsening);
    auto ids = kb.lookup_matrix(imp.id, wor.id);
    std::cout << "improving " << imp.id << " (" << imp.name
              << "), worsening " << wor.id << " (" << wor.name << "):\n";
    if (ids.empty()) {
      std::cout << "no inventive principles recorded\n";
      return kExitOk;
    }
    for (int id : ids)
      std::cout << "  " << id << "  " << kb.principle(id).name << "\n";
    return kExitOk;
  } catch (const UnknownParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    print_parameter_candidates(kb);
    return kExitConfig;
  } catch (const SameParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_params(const RunConfig& config) {
  auto kb = KnowledgeBase::load(config.data_dir);
  for (const auto& p : kb.parameters())
    std::cout << p.id << "  " << p.name << "\n";
  return kExitOk;
}

int cmd_principles(const RunConfig& config, const std::vector<int>& ids) {
  auto kb = KnowledgeBase::load(config.data_dir);
  if (ids.empty()) {
    for (const auto& p : kb.principles())
      std::cout << p.id << "  " << p.name << "\n";
    return kExitOk;
  }
  for (const auto& p : kb.principle_details(ids)) {
    std::cout << p.id << "  " << p.name << "\n    " << p.description << "\n";
    for (const auto& sub : p.sub_principles) std::cout << "    - " << sub
                                                       << "\n";
  }
  return kExitOk;
}

int cmd_rag_ingest(const std::vector<std::string>& files) {
  RagStore store;
  for (const auto& file : files) {
    auto stats = store.ingest(std::filesystem::path(file).stem().string(),
                              read_file(file));
    std::cout << stats.doc_id << ": " << stats.chunk_count << " chunks, "
              << stats.char_count << " chars, ~" << stats.token_estimate
              << " tokens\n";
  }
  return kExitOk;
}

int cmd_rag_query(const RunConfig& config, const std::string& corpus_dir,
                  const std::string& query, int k) {
  RagStore store;
  ingest_corpus_dir(store,
                    corpus_dir.empty() ? config.rag_corpus_dir : corpus_dir);
  auto [context, chunks] = store.query(query, k);
  for (const auto& chunk : chunks)
    std::cout << chunk.score << "  " << chunk.doc_id << " #"
              << chunk.chunk_index << "\n";
  std::cout << "\n" << context;
  return kExitOk;
}

// Byte comparison with first-divergence reporting.
bool compare_artifact(const std::filesystem::path& original,
                      const std::filesystem::path& replayed) {
  const std::string a = read_file(original);
  const std::string b = read_file(replayed);
  if (a == b) return true;
  size_t i = 0;
  size_t line = 1;
  while (i < a.size() && i < b.size() && a[i] == b[i]) {
    if (a[i] == '\n') ++line;
    ++i;
  }
  std::cerr << "mismatch in " << original.filename().string() << " at line "
            << line << ", byte " << i << "\n";
  return false;
}

int cmd_replay(const RunConfig& config, const std::string& run_dir_arg) {
  const std::filesystem::path run_dir(run_dir_arg);
  const auto transcript_path = run_dir / "transcript.ndjson";
  const auto script_path = run_dir / "script.ndjson";
  const auto meta_path = run_dir / "run_meta.json";
  if (!std::filesystem::exists(transcript_path) ||
      !std::filesystem::exists(script_path) ||
      !std::filesystem::exists(meta_path))
    throw ConfigError("run directory is missing transcript.ndjson, "
                      "script.ndjson or run_meta.json");

  auto meta = nlohmann::json::parse(read_file(meta_path));
  const std::string problem = meta.at("problem").get<std::string>();
  RunConfig replay_config = config;
  if (meta.contains("limits")) {
    const auto& l = meta["limits"];
    replay_config.limits.max_node_calls_per_step =
        l.value("max_node_calls_per_step", 25);
    replay_config.limits.max_tool_rounds_per_turn =
        l.value("max_tool_rounds_per_turn", 4);
    replay_config.limits.max_router_retries = l.value("max_router_retries", 2);
    replay_config.limits.max_total_tokens =
        l.value("max_total_tokens", 0LL);
  }

  Engine engine = build_engine(replay_config);
  auto transcripts = parse_run_transcripts(read_file(transcript_path));
  ReplayDispatcher dispatcher(transcripts);
  ScriptedBackend backend(Script::load(script_path));

  Orchestrator orchestrator(backend, replay_config.backend, dispatcher,
                            engine.team, engine.router_template,
                            engine.workflow, replay_config.limits);
  const std::string replay_id = run_dir.filename().string() + ".replay";
  const auto replay_root = run_dir.parent_path();
  std::filesystem::remove_all(replay_root / replay_id);
  ArtifactSink sink(replay_root, replay_id);
  auto result = orchestrator.run_workflow(problem, sink, replay_id);

  if (result.status != RunStatus::kCompleted &&
      meta.value("status", "completed") == "completed") {
    std::cerr << "replay aborted: " << result.abort_reason << "\n";
    return kExitAbortedBackend;
  }

  bool all_equal = true;
  for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
    const auto name = entry.path().filename().string();
    if (name == "run_meta.json" || name == "report.json") continue;
    if (!compare_artifact(entry.path(), sink.dir() / name)) all_equal = false;
  }
  if (!all_equal) return kExitReplayMismatch;
  std::cout << "replay matches: " << run_dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TRIZ multi-agent workflow engine"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--config", opts.config_file, "run config file (key=value)");
  app.add_option("--output-dir", opts.output_dir,
                 "root directory for run artifacts");
  app.add_option("--backend", opts.backend, "backend kind: live or scripted");
  app.add_option("--script", opts.script,
                 "script file for the scripted backend");
  app.add_option("--search", opts.search, "web search mode: fixture or live");
  app.add_flag("-v", opts.verbosity, "increase verbosity");

  std::string footer = "Config file keys (also usable via --config):\n";
  for (const auto& key : trizagents::config_schema())
    footer += "  " + key.name + ": " + key.description + "\n";
  app.footer(footer);

  auto* run_cmd = app.add_subcommand("run", "execute the TRIZ workflow");
  std::string problem_file;
  std::string run_id;
  run_cmd->add_option("problem", problem_file, "problem statement file")
      ->required();
  run_cmd->add_option("--run-id", run_id, "run identifier (default derived)");

  auto* matrix_cmd =
      app.add_subcommand("matrix", "look up the contradiction matrix");
  std::string improving, worsening;
  matrix_cmd->add_option("improving", improving, "improving parameter, name or id")
      ->required();
  matrix_cmd->add_option("worsening", worsening, "worsening parameter, name or id")
      ->required();

  auto* params_cmd =
      app.add_subcommand("params", "list the 39 engineering parameters");

  auto* principles_cmd =
      app.add_subcommand("principles", "list or detail inventive principles");
  std::vector<int> principle_ids;
  principles_cmd->add_option("ids", principle_ids,
                             "principle ids (all when omitted)");

  auto* rag_cmd = app.add_subcommand("rag", "retrieval corpus operations");
  rag_cmd->require_subcommand(1);
  auto* ingest_cmd = rag_cmd->add_subcommand("ingest", "chunk and index files");
  std::vector<std::string> ingest_files;
  ingest_cmd->add_option("files", ingest_files, "documents to ingest")
      ->required();
  auto* query_cmd = rag_cmd->add_subcommand("query", "rank corpus chunks");
  std::string query_text, corpus_dir;
  int query_k = 4;
  query_cmd->add_option("query", query_text, "query text")->required();
  query_cmd->add_option("-k", query_k, "number of chunks");
  query_cmd->add_option("--corpus-dir", corpus_dir, "corpus directory");

  auto* replay_cmd =
      app.add_subcommand("replay", "re-execute and verify a recorded run");
  std::string run_dir;
  replay_cmd->add_option("run_dir", run_dir, "recorded run directory")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    trizagents::RunConfig config = effective_config(opts);
    if (run_cmd->parsed()) return cmd_run(config, problem_file, run_id);
    if (matrix_cmd->parsed()) return cmd_matrix(config, improving, worsening);
    if (params_cmd->parsed()) return cmd_params(config);
    if (principles_cmd->parsed()) return cmd_principles(config, principle_ids);
    if (rag_cmd->parsed()) {
      if (ingest_cmd->parsed()) return cmd_rag_ingest(ingest_files);
      return cmd_rag_query(config, corpus_dir, query_text, query_k);
    }
    if (replay_cmd->parsed()) return cmd_replay(config, run_dir);
  } catch (const trizagents::BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitAbortedBackend;
  } catch (const trizagents::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
