#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "trizagents/triz_knowledge.hpp"

using namespace trizagents;
using test_support::data_dir;
using test_support::fixtures_dir;
using test_support::scratch_dir;
using test_support::slurp;

namespace {

// Parses the oracle grid CSV: header row, then one row per improving
// parameter with space-separated principle ids, "-" for empty, "+" diagonal.
std::map<std::pair<int, int>, std::vector<int>> load_oracle() {
  std::ifstream in(fixtures_dir() / "matrix_oracle.csv");
  REQUIRE(in.good());
  std::map<std::pair<int, int>, std::vector<int>> cells;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    auto fields = detail::split(line, ',');
    REQUIRE(fields.size() == 40);
    int improving = std::stoi(fields[0]);
    for (int worsening = 1; worsening <= 39; ++worsening) {
      const std::string& cell = fields[static_cast<size_t>(worsening)];
      if (cell == "+" ) continue;
      if (cell == "-") {
        cells[{improving, worsening}] = {};
        continue;
      }
      std::vector<int> ids;
      std::istringstream ss(cell);
      int id;
      while (ss >> id) ids.push_back(id);
      cells[{improving, worsening}] = ids;
    }
  }
  return cells;
}

}  // namespace

TEST_CASE("knowledge base loads 39 parameters and 40 principles") {
  auto kb = KnowledgeBase::load(data_dir());
  CHECK(kb.parameters().size() == 39);
  CHECK(kb.principles().size() == 40);
  CHECK(kb.parameter(1).name == "Weight of moving object");
  CHECK(kb.parameter(9).name == "Speed");
  CHECK(kb.parameter(39).name == "Productivity");
  CHECK(kb.principle(1).name == "Segmentation");
  CHECK(kb.principle(40).name == "Composite materials");
  CHECK_FALSE(kb.principle(1).sub_principles.empty());
}

TEST_CASE("every matrix cell matches the oracle transcription") {
  auto kb = KnowledgeBase::load(data_dir());
  auto oracle = load_oracle();
  REQUIRE(oracle.size() == 39 * 38);
  for (const auto& [key, expected] : oracle) {
    auto got = kb.lookup_matrix(key.first, key.second);
    INFO("cell (", key.first, ",", key.second, ")");
    CHECK(got == expected);
  }
}

TEST_CASE("matrix is sparse and asymmetric") {
  auto kb = KnowledgeBase::load(data_dir());
  size_t empty = 0;
  for (int i = 1; i <= 39; ++i)
    for (int w = 1; w <= 39; ++w)
      if (i != w && kb.lookup_matrix(i, w).empty()) ++empty;
  CHECK(empty > 0);
  CHECK(kb.lookup_matrix(9, 21) != kb.lookup_matrix(21, 9));
}

TEST_CASE("matrix lookup rejects bad parameters") {
  auto kb = KnowledgeBase::load(data_dir());
  CHECK_THROWS_AS((void)kb.lookup_matrix(9, 9), SameParameterError);
  CHECK_THROWS_AS((void)kb.lookup_matrix(0, 9), UnknownParameterError);
  CHECK_THROWS_AS((void)kb.lookup_matrix(9, 40), UnknownParameterError);
  CHECK_THROWS_AS((void)kb.parameter(40), UnknownParameterError);
  CHECK_THROWS_AS((void)kb.principle(41), UnknownPrincipleError);
}

TEST_CASE("parameter name lookup is case-insensitive and exact") {
  auto kb = KnowledgeBase::load(data_dir());
  auto p = kb.find_parameter("speed");
  REQUIRE(p.has_value());
  CHECK(p->id == 9);
  CHECK(kb.find_parameter("SPEED").has_value());
  CHECK_FALSE(kb.find_parameter("spee").has_value());
}

TEST_CASE("principle details preserve input order and duplicates") {
  auto kb = KnowledgeBase::load(data_dir());
  auto details = kb.principle_details({35, 1, 35});
  REQUIRE(details.size() == 3);
  CHECK(details[0].id == 35);
  CHECK(details[1].id == 1);
  CHECK(details[2].id == 35);
}

TEST_CASE("load is independent of record order in the data files") {
  auto dir = scratch_dir("kb_shuffled");
  for (const char* name : {"parameters.tsv", "principles.tsv", "matrix.txt"}) {
    std::istringstream in(slurp(data_dir() / name));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#') lines.push_back(line);
    std::reverse(lines.begin(), lines.end());
    std::ofstream out(dir / name);
    for (const auto& l : lines) out << l << "\n";
  }
  auto kb = KnowledgeBase::load(dir);
  auto reference = KnowledgeBase::load(data_dir());
  CHECK(kb.parameter(9).name == reference.parameter(9).name);
  CHECK(kb.lookup_matrix(1, 9) == reference.lookup_matrix(1, 9));
  CHECK(kb.matrix_cells() == reference.matrix_cells());
}

TEST_CASE("validation rejects corrupted data") {
  auto write_all = [](const std::filesystem::path& dir) {
    for (const char* name :
         {"parameters.tsv", "principles.tsv", "matrix.txt"})
      std::filesystem::copy_file(
          data_dir() / name, dir / name,
          std::filesystem::copy_options::overwrite_existing);
  };

  SUBCASE("missing file") {
    auto dir = scratch_dir("kb_missing");
    CHECK_THROWS_AS(KnowledgeBase::load(dir), MissingFileError);
  }
  SUBCASE("diagonal cell") {
    auto dir = scratch_dir("kb_diagonal");
    write_all(dir);
    std::ofstream(dir / "matrix.txt", std::ios::app) << "7,7:1,2\n";
    CHECK_THROWS_AS(KnowledgeBase::load(dir), ValidationError);
  }
  SUBCASE("duplicate cell") {
    auto dir = scratch_dir("kb_dup");
    write_all(dir);
    std::ofstream(dir / "matrix.txt", std::ios::app) << "1,9:2,8\n";
    CHECK_THROWS_AS(KnowledgeBase::load(dir), ValidationError);
  }
  SUBCASE("missing parameter") {
    auto dir = scratch_dir("kb_short");
    write_all(dir);
    std::istringstream in(slurp(data_dir() / "parameters.tsv"));
    std::ofstream out(dir / "parameters.tsv");
    std::string line;
    int kept = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#' && ++kept == 39) continue;
      out << line << "\n";
    }
    CHECK_THROWS_AS(KnowledgeBase::load(dir), ValidationError);
  }
  SUBCASE("principle id out of range in a cell") {
    auto dir = scratch_dir("kb_range");
    write_all(dir);
    std::istringstream in(slurp(data_dir() / "matrix.txt"));
    std::ofstream out(dir / "matrix.txt");
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first && !line.empty() && line[0] != '#') {
        out << line.substr(0, line.find(':')) << ":41\n";
        first = false;
      } else {
        out << line << "\n";
      }
    }
    CHECK_THROWS_AS(KnowledgeBase::load(dir), ValidationError);
  }
  SUBCASE("malformed line") {
    auto dir = scratch_dir("kb_malformed");
    write_all(dir);
    std::ofstream(dir / "matrix.txt", std::ios::app) << "nonsense\n";
    CHECK_THROWS_AS(KnowledgeBase::load(dir), ParseError);
  }
}
