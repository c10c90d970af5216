#include <doctest.h>

#include <fstream>
#include <set>

#include "test_support.hpp"
#include "trizagents/run_config.hpp"

using namespace trizagents;
using test_support::scratch_dir;

namespace {

std::filesystem::path write_config(const std::string& name,
                                   const std::string& body) {
  auto path = scratch_dir("run_config") / name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("defaults") {
  RunConfig config;
  CHECK(config.backend.kind == BackendKind::kScripted);
  CHECK(config.backend.model == "gpt-4o");
  CHECK(config.backend.temperature == doctest::Approx(0.5));
  CHECK(config.search_mode == "fixture");
  CHECK(config.output_dir == "runs");
  CHECK(config.limits.max_node_calls_per_step == 25);
  CHECK(config.limits.max_tool_rounds_per_turn == 4);
  CHECK(config.limits.max_router_retries == 2);
  CHECK(config.limits.max_total_tokens == 0);
}

TEST_CASE("config file parsing") {
  auto path = write_config("ok.conf",
                           "# a comment\n"
                           "\n"
                           "backend = scripted\n"
                           "script = /tmp/s.ndjson\n"
                           "  temperature =  0.7  \n"
                           "max_total_tokens=120000\n"
                           "search=live\n"
                           "search_url=http://localhost:9200\n");
  RunConfig config = load_run_config(path);
  CHECK(config.backend.kind == BackendKind::kScripted);
  CHECK(config.backend.script_path == "/tmp/s.ndjson");
  CHECK(config.backend.temperature == doctest::Approx(0.7));
  CHECK(config.limits.max_total_tokens == 120000);
  CHECK(config.search_mode == "live");
  CHECK(config.search_url == "http://localhost:9200");
  // untouched keys keep their defaults
  CHECK(config.backend.model == "gpt-4o");
  CHECK(config.limits.max_router_retries == 2);
}

TEST_CASE("overrides applied after the file win") {
  auto path = write_config("base.conf", "model=base-model\ntemperature=0.2\n");
  RunConfig config = load_run_config(path);
  apply_config_value(config, "model", "override-model");
  CHECK(config.backend.model == "override-model");
  CHECK(config.backend.temperature == doctest::Approx(0.2));
}

TEST_CASE("rejects bad input") {
  RunConfig config;
  CHECK_THROWS_AS(apply_config_value(config, "no_such_key", "x"), ConfigError);
  CHECK_THROWS_AS(apply_config_value(config, "backend", "psychic"),
                  ConfigError);
  CHECK_THROWS_AS(apply_config_value(config, "search", "bing"), ConfigError);
  CHECK_THROWS_AS(apply_config_value(config, "max_total_tokens", "many"),
                  ConfigError);
  CHECK_THROWS_AS(apply_config_value(config, "max_total_tokens", "12x"),
                  ConfigError);
  CHECK_THROWS_AS(apply_config_value(config, "temperature", "warm"),
                  ConfigError);

  CHECK_THROWS_AS(
      load_run_config(write_config("bad.conf", "just a line without equals\n")),
      ConfigError);
  CHECK_THROWS_AS(load_run_config("/no/such/config/file"), ConfigError);
}

TEST_CASE("every schema key is accepted") {
  for (const auto& key : config_schema()) {
    RunConfig config;
    std::string value = "1";
    if (key.name == "backend") value = "scripted";
    if (key.name == "search") value = "fixture";
    CHECK_NOTHROW(apply_config_value(config, key.name, value));
  }
}

TEST_CASE("schema names are unique and described") {
  std::set<std::string> seen;
  for (const auto& key : config_schema()) {
    CHECK(seen.insert(key.name).second);
    CHECK_FALSE(key.description.empty());
  }
  CHECK(seen.size() == 20);
}
