#include <doctest.h>

#include "test_support.hpp"
#include "trizagents/agents.hpp"
#include "trizagents/tools.hpp"

using namespace trizagents;
using test_support::data_dir;
using test_support::fixtures_dir;
using test_support::repo_root;

namespace {

ToolRegistry make_registry() {
  ToolRegistry registry;
  auto kb = std::make_shared<const KnowledgeBase>(
      KnowledgeBase::load(data_dir()));
  auto provider = std::make_shared<FixtureSearchProvider>(
      FixtureSearchProvider::load(fixtures_dir() / "search_fixtures.json"));
  auto store = std::make_shared<RagStore>();
  store->ingest("doc", "TRIZ separates contradictions with principles");
  register_web_search(registry, provider);
  register_triz_tools(registry, kb);
  register_triz_rag(registry,
                    std::static_pointer_cast<const RagStore>(store));
  assign_default_toolsets(registry);
  return registry;
}

}  // namespace

TEST_CASE("default toolsets match the team contract") {
  auto registry = make_registry();
  CHECK(registry.toolset("MechanicalEngineer").size() == 1);
  CHECK(registry.toolset("TRIZSpecialist").size() == 5);
  CHECK(registry.toolset("ProjectManager").empty());
  CHECK(registry.agent_has("SafetyEngineer", kWebSearchTool));
  CHECK_FALSE(registry.agent_has("SafetyEngineer", kContradictionMatrixTool));
}

TEST_CASE("dispatch returns results in-band, never throws") {
  auto registry = make_registry();

  SUBCASE("successful web search") {
    auto result = registry.dispatch(
        "MechanicalEngineer",
        {"c1", kWebSearchTool,
         "{\"query\": \"gantry crane engineering system components\"}"});
    CHECK(result.ok);
    CHECK(result.content.find("girder") != std::string::npos);
    CHECK(result.call_id == "c1");
  }
  SUBCASE("unknown tool") {
    auto result =
        registry.dispatch("MechanicalEngineer", {"c2", "teleport", "{}"});
    CHECK_FALSE(result.ok);
    CHECK_FALSE(result.content.empty());
  }
  SUBCASE("tool outside the agent's toolset") {
    auto result = registry.dispatch("SafetyEngineer",
                                    {"c3", kContradictionMatrixTool,
                                     "{\"improving\":1,\"worsening\":9}"});
    CHECK_FALSE(result.ok);
    CHECK(result.content.find("not in your toolset") != std::string::npos);
  }
  SUBCASE("malformed arguments") {
    auto result = registry.dispatch("MechanicalEngineer",
                                    {"c4", kWebSearchTool, "not json"});
    CHECK_FALSE(result.ok);
    CHECK_FALSE(result.content.empty());
  }
  SUBCASE("missing required argument") {
    auto result =
        registry.dispatch("MechanicalEngineer", {"c5", kWebSearchTool, "{}"});
    CHECK_FALSE(result.ok);
    CHECK(result.content.find("query") != std::string::npos);
  }
  SUBCASE("provider failure surfaces as diagnostic text") {
    auto result = registry.dispatch(
        "MechanicalEngineer",
        {"c6", kWebSearchTool, "{\"query\": \"unrecorded fixture query\"}"});
    CHECK_FALSE(result.ok);
    CHECK(result.content.find("Error") != std::string::npos);
  }
}

TEST_CASE("triz tools render numbered plain-text lists") {
  auto registry = make_registry();

  auto features = registry.dispatch("TRIZSpecialist",
                                    {"f1", kTrizFeaturesTool, "{}"});
  CHECK(features.ok);
  CHECK(features.content.find("9. Speed") != std::string::npos);
  CHECK(features.content.find("39. Productivity") != std::string::npos);

  auto cell = registry.dispatch(
      "TRIZSpecialist",
      {"f2", kContradictionMatrixTool, "{\"improving\":9,\"worsening\":13}"});
  CHECK(cell.ok);
  CHECK(cell.content.find("Principle 28") != std::string::npos);

  auto details = registry.dispatch(
      "TRIZSpecialist",
      {"f4", kInventivePrinciplesTool, "{\"ids\":[1,35]}"});
  CHECK(details.ok);
  CHECK(details.content.find("Segmentation") != std::string::npos);

  auto diagonal = registry.dispatch(
      "TRIZSpecialist",
      {"f5", kContradictionMatrixTool, "{\"improving\":9,\"worsening\":9}"});
  CHECK_FALSE(diagonal.ok);

  auto rag = registry.dispatch(
      "TRIZSpecialist",
      {"f6", kTrizRagTool, "{\"query\": \"contradictions principles\"}"});
  CHECK(rag.ok);
  CHECK(rag.content.find("[source: doc #0]") != std::string::npos);
}

TEST_CASE("empty matrix cells report no recorded principles") {
  auto registry = make_registry();
  auto kb = KnowledgeBase::load(data_dir());
  // find a genuinely empty cell and check its tool rendering
  for (int i = 1; i <= 39; ++i) {
    for (int w = 1; w <= 39; ++w) {
      if (i == w || !kb.lookup_matrix(i, w).empty()) continue;
      auto result = registry.dispatch(
          "TRIZSpecialist",
          {"e1", kContradictionMatrixTool,
           "{\"improving\":" + std::to_string(i) +
               ",\"worsening\":" + std::to_string(w) + "}"});
      CHECK(result.ok);
      CHECK(result.content.find("no inventive principles recorded") !=
            std::string::npos);
      return;
    }
  }
  FAIL("matrix has no empty cells");
}

TEST_CASE("assigning an unregistered tool is rejected") {
  ToolRegistry registry;
  CHECK_THROWS_AS(registry.assign("Agent", "ghost_tool"), Error);
}
