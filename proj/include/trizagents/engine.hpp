#pragma once

// Wires a RunConfig into a ready-to-run engine: knowledge base, retrieval
// store, search provider, tool registry, team, router template and workflow.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "trizagents/agents.hpp"
#include "trizagents/orchestrator.hpp"
#include "trizagents/run_config.hpp"

namespace trizagents {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError(path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Ingests every regular file in the directory, sorted by name, with the file
// stem as doc id.
inline std::vector<IngestStats> ingest_corpus_dir(
    RagStore& store, const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<IngestStats> stats;
  for (const auto& file : files)
    stats.push_back(store.ingest(file.stem().string(), read_file(file)));
  return stats;
}

struct Engine {
  std::shared_ptr<const KnowledgeBase> kb;
  std::shared_ptr<const RagStore> store;
  std::shared_ptr<SearchProvider> search;
  ToolRegistry registry;
  Team team;
  PromptTemplate router_template;
  WorkflowDefinition workflow;
};

inline Engine build_engine(const RunConfig& config) {
  Engine engine;
  engine.kb =
      std::make_shared<const KnowledgeBase>(KnowledgeBase::load(config.data_dir));

  auto store = std::make_shared<RagStore>();
  ingest_corpus_dir(*store, config.rag_corpus_dir);
  engine.store = store;

  if (config.search_mode == "live") {
    if (config.search_url.empty())
      throw ConfigError("search=live requires search_url");
    engine.search = std::make_shared<HttpSearchProvider>(config.search_url);
  } else {
    engine.search = std::make_shared<FixtureSearchProvider>(
        FixtureSearchProvider::load(config.search_fixtures));
  }

  register_web_search(engine.registry, engine.search);
  register_triz_tools(engine.registry, engine.kb);
  register_triz_rag(engine.registry, engine.store);
  assign_default_toolsets(engine.registry);

  engine.team = build_default_team(engine.registry, config.prompts_dir);
  engine.router_template = PromptTemplate::parse(
      read_file(std::filesystem::path(config.prompts_dir) / "router.txt"));
  engine.workflow = WorkflowDefinition::load(config.workflow_file);
  return engine;
}

}  // namespace trizagents
