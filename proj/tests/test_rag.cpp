#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "trizagents/rag.hpp"

using namespace trizagents;

TEST_CASE("tokenize lowercases alphanumeric runs") {
  CHECK(tokenize("The QUICK fox-2 jumps!") ==
        std::vector<std::string>{"the", "quick", "fox", "2", "jumps"});
  CHECK(tokenize("...").empty());
}

TEST_CASE("chunking follows the fixed stride") {
  SUBCASE("short bodies yield exactly one chunk") {
    CHECK(chunk_text("tiny", 800, 200).size() == 1);
    CHECK(chunk_text(std::string(800, 'a'), 800, 200).size() == 1);
  }
  SUBCASE("a 2000-char body chunks at starts 0, 600, 1200, 1800") {
    std::string body;
    for (int i = 0; i < 400; ++i) body += "word ";
    REQUIRE(body.size() == 2000);
    auto chunks = chunk_text(body, 800, 200);
    REQUIRE(chunks.size() == 4);
    CHECK(chunks[0].size() == 800);
    CHECK(chunks[1].size() == 800);
    CHECK(chunks[2].size() == 800);
    CHECK(chunks[3].size() == 200);
    CHECK(chunks[0] == body.substr(0, 800));
    CHECK(chunks[3] == body.substr(1800));
  }
  SUBCASE("chunk ends snap back to whitespace") {
    // size 12, overlap 4 (stride 8): the cut at byte 12 falls inside "cccc",
    // so the end snaps back to the space at byte 10; starts stay on stride
    std::string body = "aaaa bbbb cccc dddd eeee";
    auto chunks = chunk_text(body, 12, 4);
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0] == "aaaa bbbb ");
    CHECK(chunks[1] == "b cccc dddd ");
    CHECK(chunks[2] == "ddd eeee");
  }
  SUBCASE("unbroken text never snaps below the stride") {
    std::string body(2000, 'x');
    auto chunks = chunk_text(body, 800, 200);
    REQUIRE(chunks.size() == 4);
    CHECK(chunks[0].size() == 800);
  }
  SUBCASE("chunks cover the whole body with no gaps") {
    std::string body;
    for (int i = 0; i < 500; ++i) body += "w" + std::to_string(i) + " ";
    auto chunks = chunk_text(body, 800, 200);
    REQUIRE(chunks.size() > 1);
    for (size_t i = 0; i < chunks.size(); ++i) {
      // starts stay on the stride grid; snapping only moves ends
      CHECK(chunks[i] == body.substr(i * 600, chunks[i].size()));
      if (i + 1 < chunks.size()) CHECK(chunks[i].size() > 600);
    }
    CHECK((chunks.size() - 1) * 600 + chunks.back().size() == body.size());
  }
}

TEST_CASE("ingest rejects empty and duplicate documents") {
  RagStore store;
  CHECK_THROWS_AS(store.ingest("d", ""), EmptyBodyError);
  store.ingest("d", "some text");
  CHECK_THROWS_AS(store.ingest("d", "other text"), DuplicateDocError);
  auto stats = store.ingest("e", std::string(1000, 'a'));
  CHECK(stats.chunk_count == 2);
  CHECK(stats.char_count == 1000);
  CHECK(stats.token_estimate == 250);
}

TEST_CASE("bm25 ranking matches the hand-computed oracle") {
  RagStore store;
  store.ingest("alpha", "the quick brown fox jumps over the lazy dog");
  store.ingest("beta",
               "the quick blue hare sleeps under the lazy dog and the quick fox");
  store.ingest("gamma", "cranes lift heavy loads while the fox watches");

  SUBCASE("quick fox") {
    auto [context, chunks] = store.query("quick fox", 3);
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].doc_id == "beta");
    CHECK(chunks[1].doc_id == "alpha");
    CHECK(chunks[2].doc_id == "gamma");
    CHECK(chunks[0].score == doctest::Approx(0.7149048634).epsilon(1e-9));
    CHECK(chunks[1].score == doctest::Approx(0.6292782219).epsilon(1e-9));
    CHECK(chunks[2].score == doctest::Approx(0.1454302296).epsilon(1e-9));
    CHECK(context.find("[source: beta #0]") != std::string::npos);
  }
  SUBCASE("lazy dog cranes") {
    auto [context, chunks] = store.query("lazy dog cranes", 3);
    CHECK(chunks[0].doc_id == "gamma");
    CHECK(chunks[0].score == doctest::Approx(1.0682298795).epsilon(1e-9));
    CHECK(chunks[1].doc_id == "alpha");
    CHECK(chunks[1].score == doctest::Approx(0.9801023548).epsilon(1e-9));
    CHECK(chunks[2].score == doctest::Approx(0.8372534286).epsilon(1e-9));
  }
  SUBCASE("single term") {
    auto [context, chunks] = store.query("fox", 2);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].doc_id == "gamma");
    CHECK(chunks[0].score == doctest::Approx(0.1454302296).epsilon(1e-9));
  }
}

TEST_CASE("ties break by doc id then chunk index") {
  RagStore store;
  store.ingest("b", "identical text here");
  store.ingest("a", "identical text here");
  auto [context, chunks] = store.query("identical", 2);
  REQUIRE(chunks.size() == 2);
  CHECK(chunks[0].score == chunks[1].score);
  CHECK(chunks[0].doc_id == "a");
  CHECK(chunks[1].doc_id == "b");
}

TEST_CASE("query is deterministic") {
  RagStore store;
  store.ingest("a", "first document about cranes and control");
  store.ingest("b", "second document about cranes and safety");
  auto first = store.query("cranes control", 2);
  auto second = store.query("cranes control", 2);
  CHECK(first.first == second.first);
  REQUIRE(first.second.size() == second.second.size());
  for (size_t i = 0; i < first.second.size(); ++i) {
    CHECK(first.second[i].doc_id == second.second[i].doc_id);
    CHECK(first.second[i].score == second.second[i].score);
  }
}

TEST_CASE("query errors") {
  RagStore store;
  CHECK_THROWS_AS(store.query("anything"), EmptyStoreError);
  store.ingest("a", "text");
  CHECK_THROWS_AS(store.query("!!!"), EmptyQueryError);
}
