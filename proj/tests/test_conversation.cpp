#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "trizagents/conversation.hpp"

using namespace trizagents;

TEST_CASE("message factories set roles and fields") {
  auto h = Message::human("user", "hello");
  CHECK(h.role == Role::kHuman);
  auto s = Message::system("rules");
  CHECK(s.sender == "system");
  auto a = Message::ai("Agent", "hi", {{"c1", "web_search", "{}"}},
                       TokenUsage{10, 2});
  CHECK(a.tool_calls.size() == 1);
  CHECK(a.usage->total_tokens() == 12);
  auto t = Message::tool("web_search", "c1", "result");
  CHECK(t.tool_call_id == "c1");
}

TEST_CASE("demotion converts ai answers to prefixed human messages") {
  auto m = Message::ai("SafetyEngineer", "looks risky");
  auto d = demote_to_human(m);
  CHECK(d.role == Role::kHuman);
  CHECK(d.content == "[SafetyEngineer]: looks risky");
  CHECK(strip_demotion_prefix(d) == "looks risky");

  CHECK_THROWS_AS(demote_to_human(Message::human("user", "x")),
                  NotAiMessageError);
  CHECK_THROWS_AS(
      demote_to_human(Message::ai("A", "", {{"c1", "web_search", "{}"}})),
      HasPendingToolCallsError);
}

TEST_CASE("transcript rejects orphan tool results") {
  Transcript t(1);
  t.append(Message::human("user", "problem"));
  CHECK_THROWS_AS(t.append(Message::tool("web_search", "c9", "result")),
                  OrphanToolResultError);
  t.append(Message::ai("Agent", "", {{"c1", "web_search", "{}"}}));
  CHECK_NOTHROW(t.append(Message::tool("web_search", "c1", "result")));
}

TEST_CASE("transcript serialization round-trips generated transcripts") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> kind(0, 3);
  const std::vector<std::string> agents = {"A", "B", "DocumentationSpecialist"};
  const std::vector<std::string> payloads = {
      "plain text", "line\nbreaks and\ttabs", "unicode: naïve café ✓",
      "braces {and} \"quotes\"", "trailing spaces   "};

  for (int round = 0; round < 50; ++round) {
    Transcript t(1 + round % 6);
    int n = len(rng);
    int call_seq = 0;
    for (int i = 0; i < n; ++i) {
      const auto& text = payloads[rng() % payloads.size()];
      switch (kind(rng)) {
        case 0:
          t.append(Message::human("user", text));
          break;
        case 1:
          t.append(Message::system(text));
          break;
        case 2: {
          std::vector<ToolCall> calls;
          if (rng() % 2 == 0)
            calls.push_back({"c" + std::to_string(call_seq++), "web_search",
                             "{\"query\": \"" + std::to_string(round) + "\"}"});
          t.append(Message::ai(agents[rng() % agents.size()], text, calls,
                               TokenUsage{(long long)(rng() % 5000),
                                          (long long)(rng() % 800)}));
          if (!calls.empty())
            t.append(Message::tool("web_search", calls[0].id, text));
          break;
        }
        default:
          t.append(Message::ai(agents[rng() % agents.size()], text));
          break;
      }
    }
    auto parsed = parse_transcript(serialize_transcript(t));
    CHECK(parsed == t);
  }
}

TEST_CASE("transcript parsing reports malformed input with line numbers") {
  CHECK_THROWS_AS(parse_transcript(""), ParseError);
  CHECK_THROWS_AS(parse_transcript("{\"schema\":1,\"step\":1}\n{bad\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_transcript("{\"schema\":99,\"step\":1}\n"), ParseError);
  // missing trailing newline means a truncated file
  auto good = serialize_transcript(Transcript(2));
  CHECK_THROWS_AS(parse_transcript(good.substr(0, good.size() - 1)),
                  ParseError);
}

TEST_CASE("prompt templates render placeholders single-pass") {
  auto t = PromptTemplate::parse("Hello {name}, options: {options} or FINISH");
  CHECK(t.placeholders() == std::vector<std::string>{"name", "options"});
  CHECK(t.render({{"name", "PM"}, {"options", "A, B"}}) ==
        "Hello PM, options: A, B or FINISH");
  // substituted values are not re-scanned
  CHECK(t.render({{"name", "{options}"}, {"options", "A"}}) ==
        "Hello {options}, options: A or FINISH");
  CHECK_THROWS_AS(t.render({{"name", "PM"}}), MissingInputError);
  CHECK_THROWS_AS(t.render({{"name", "PM"}, {"options", "A"}, {"x", "y"}},
                           /*strict=*/true),
                  UnknownPlaceholderError);
  CHECK(PromptTemplate::parse("{{literal}}").render({}) == "{literal}");
  CHECK_THROWS_AS(PromptTemplate::parse("broken {placeholder"), Error);
}
