#include <doctest.h>

#include "test_support.hpp"
#include "trizagents/search.hpp"

using namespace trizagents;
using test_support::fixtures_dir;

TEST_CASE("query normalization lowercases, collapses and trims") {
  CHECK(normalize_query("  Gantry   CRANE \t sway ") == "gantry crane sway");
  CHECK(normalize_query("already normal") == "already normal");
  CHECK(normalize_query("   ") == "");
}

TEST_CASE("fixture provider answers canned queries") {
  auto provider = FixtureSearchProvider::load(fixtures_dir() /
                                              "search_fixtures.json");
  auto results = provider.search(
      "Control Systems for Gantry Cranes   excessive swinging overheating");
  REQUIRE_FALSE(results.empty());
  CHECK(results[0].url.find("journals") != std::string::npos);

  CHECK_THROWS_AS(provider.search("query nobody recorded"), MissFixtureError);
  CHECK_THROWS_AS(provider.search("   "), EmptyQueryError);
}

TEST_CASE("fixture provider truncates to k results") {
  FixtureSearchProvider provider;
  provider.add("many results",
               {{"u1", "c1"}, {"u2", "c2"}, {"u3", "c3"}, {"u4", "c4"}});
  CHECK(provider.search("many results", 2).size() == 2);
  CHECK(provider.search("many results", 9).size() == 4);
  // ranking order preserved
  CHECK(provider.search("many results", 2)[0].url == "u1");
}

TEST_CASE("missing fixture file is reported") {
  CHECK_THROWS_AS(FixtureSearchProvider::load(fixtures_dir() / "no_such.json"),
                  MissingFileError);
}
