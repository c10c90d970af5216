#pragma once

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "trizagents/run_config.hpp"

namespace test_support {

inline std::filesystem::path repo_root() { return REPO_ROOT; }

inline std::filesystem::path data_dir() { return repo_root() / "data/triz"; }

inline std::filesystem::path fixtures_dir() {
  return repo_root() / "tests/fixtures";
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Fresh scratch directory under the build tree, wiped on creation.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "trizagents_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Default run config pointed at the repo's data, prompts and fixtures.
inline trizagents::RunConfig repo_config() {
  trizagents::RunConfig config;
  config.data_dir = (repo_root() / "data/triz").string();
  config.rag_corpus_dir = (repo_root() / "data/rag_corpus").string();
  config.prompts_dir = (repo_root() / "prompts").string();
  config.workflow_file = (repo_root() / "data/workflow.tsv").string();
  config.search_fixtures =
      (fixtures_dir() / "search_fixtures.json").string();
  config.backend.script_path = (fixtures_dir() / "full_run.script").string();
  return config;
}

}  // namespace test_support
