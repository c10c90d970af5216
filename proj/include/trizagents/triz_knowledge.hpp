#pragma once

// TRIZ knowledge layer: the 39 engineering parameters, the 40 inventive
// principles and the contradiction matrix, loaded from plain-text data files.
// The knowledge base is immutable after load and safe for concurrent reads.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "trizagents/errors.hpp"

namespace trizagents {

struct TrizParameter {
  int id = 0;
  std::string name;
  std::string description;
};

struct InventivePrinciple {
  int id = 0;
  std::string name;
  std::string description;
  std::vector<std::string> sub_principles;
};

struct EngineeringContradiction {
  int improving = 0;
  int worsening = 0;
  std::string rationale;
};

struct PhysicalContradiction {
  std::string parameter_name;
  std::string contradictory_needs;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, delim)) out.push_back(item);
  return out;
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline int parse_int(const std::string& s, const std::string& file, int line) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected integer, got \"" + s + "\"");
  }
}

}  // namespace detail

class KnowledgeBase {
 public:
  static constexpr int kParameterCount = 39;
  static constexpr int kPrincipleCount = 40;

  // Loads parameters.tsv, principles.tsv and matrix.txt from data_dir and
  // validates every type invariant. Throws MissingFileError, ParseError or
  // ValidationError.
  static KnowledgeBase load(const std::filesystem::path& data_dir) {
    KnowledgeBase kb;
    kb.load_parameters(data_dir / "parameters.tsv");
    kb.load_principles(data_dir / "principles.tsv");
    kb.load_matrix(data_dir / "matrix.txt");
    // Record order in the data files is irrelevant; ids define the order.
    std::sort(kb.parameters_.begin(), kb.parameters_.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(kb.principles_.begin(), kb.principles_.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    kb.validate();
    return kb;
  }

  // All 39 parameters, sorted by id.
  const std::vector<TrizParameter>& parameters() const { return parameters_; }

  // All 40 principles, sorted by id.
  const std::vector<InventivePrinciple>& principles() const {
    return principles_;
  }

  const TrizParameter& parameter(int id) const {
    if (id < 1 || id > kParameterCount) throw UnknownParameterError(id);
    return parameters_[static_cast<size_t>(id - 1)];
  }

  const InventivePrinciple& principle(int id) const {
    if (id < 1 || id > kPrincipleCount) throw UnknownPrincipleError(id);
    return principles_[static_cast<size_t>(id - 1)];
  }

  // Case-insensitive exact match on the canonical parameter name.
  std::optional<TrizParameter> find_parameter(const std::string& name) const {
    const std::string key = detail::lower(name);
    for (const auto& p : parameters_)
      if (detail::lower(p.name) == key) return p;
    return std::nullopt;
  }

  // The principle list for one matrix cell. An empty list is a valid answer:
  // the classical matrix leaves some cells blank.
  std::vector<int> lookup_matrix(int improving, int worsening) const {
    if (improving == worsening) throw SameParameterError(improving);
    if (improving < 1 || improving > kParameterCount)
      throw UnknownParameterError(improving);
    if (worsening < 1 || worsening > kParameterCount)
      throw UnknownParameterError(worsening);
    auto it = matrix_.find({improving, worsening});
    if (it == matrix_.end()) return {};
    return it->second;
  }

  // Full principle records in input order, duplicates preserved.
  std::vector<InventivePrinciple> principle_details(
      const std::vector<int>& ids) const {
    std::vector<InventivePrinciple> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(principle(id));
    return out;
  }

  const std::map<std::pair<int, int>, std::vector<int>>& matrix_cells() const {
    return matrix_;
  }

 private:
  std::vector<TrizParameter> parameters_;
  std::vector<InventivePrinciple> principles_;
  std::map<std::pair<int, int>, std::vector<int>> matrix_;

  static std::ifstream open(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw MissingFileError(path.string());
    std::ifstream in(path);
    if (!in) throw MissingFileError(path.string());
    return in;
  }

  static bool skippable(const std::string& line) {
    return line.empty() || line[0] == '#';
  }

  void load_parameters(const std::filesystem::path& path) {
    auto in = open(path);
    const std::string file = path.filename().string();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (skippable(line)) continue;
      auto fields = detail::split(line, '\t');
      if (fields.size() != 3)
        throw ParseError(file, lineno, "expected 3 tab-separated fields");
      TrizParameter p;
      p.id = detail::parse_int(fields[0], file, lineno);
      p.name = fields[1];
      p.description = fields[2];
      parameters_.push_back(std::move(p));
    }
  }

  void load_principles(const std::filesystem::path& path) {
    auto in = open(path);
    const std::string file = path.filename().string();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (skippable(line)) continue;
      auto fields = detail::split(line, '\t');
      if (fields.size() < 3 || fields.size() > 4)
        throw ParseError(file, lineno, "expected 3 or 4 tab-separated fields");
      InventivePrinciple p;
      p.id = detail::parse_int(fields[0], file, lineno);
      p.name = fields[1];
      p.description = fields[2];
      if (fields.size() == 4 && !fields[3].empty())
        p.sub_principles = detail::split(fields[3], '|');
      principles_.push_back(std::move(p));
    }
  }

  void load_matrix(const std::filesystem::path& path) {
    auto in = open(path);
    const std::string file = path.filename().string();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (skippable(line)) continue;
      auto colon = line.find(':');
      if (colon == std::string::npos)
        throw ParseError(file, lineno, "expected \"improving,worsening:ids\"");
      auto key = detail::split(line.substr(0, colon), ',');
      if (key.size() != 2)
        throw ParseError(file, lineno, "cell key needs two parameter ids");
      int improving = detail::parse_int(key[0], file, lineno);
      int worsening = detail::parse_int(key[1], file, lineno);
      std::vector<int> ids;
      for (const auto& tok : detail::split(line.substr(colon + 1), ','))
        ids.push_back(detail::parse_int(tok, file, lineno));
      if (improving == worsening)
        throw ValidationError("matrix cell (" + std::to_string(improving) +
                              "," + std::to_string(worsening) +
                              ") lies on the diagonal");
      if (!matrix_.emplace(std::make_pair(improving, worsening), ids).second)
        throw ValidationError("duplicate matrix cell (" +
                              std::to_string(improving) + "," +
                              std::to_string(worsening) + ")");
    }
  }

  void validate() const {
    check_ids("parameter", parameters_.size(), kParameterCount,
              [&](size_t i) { return parameters_[i].id; });
    check_ids("principle", principles_.size(), kPrincipleCount,
              [&](size_t i) { return principles_[i].id; });
    std::vector<std::string> names;
    for (const auto& p : parameters_) {
      if (p.name.empty())
        throw ValidationError("parameter " + std::to_string(p.id) +
                              " has an empty name");
      names.push_back(detail::lower(p.name));
    }
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
      throw ValidationError("duplicate parameter name");
    for (const auto& [key, ids] : matrix_) {
      auto [improving, worsening] = key;
      if (improving < 1 || improving > kParameterCount ||
          worsening < 1 || worsening > kParameterCount)
        throw ValidationError("matrix cell key out of range");
      for (int id : ids)
        if (id < 1 || id > kPrincipleCount)
          throw ValidationError("matrix cell (" + std::to_string(improving) +
                                "," + std::to_string(worsening) +
                                ") stores principle " + std::to_string(id) +
                                " out of range");
    }
    // The classical matrix is sparse; a fully dense one means bad data.
    const size_t dense =
        static_cast<size_t>(kParameterCount) * (kParameterCount - 1);
    if (matrix_.size() >= dense)
      throw ValidationError("matrix has no empty cells");
  }

  template <typename GetId>
  static void check_ids(const std::string& what, size_t count, int expected,
                        GetId get_id) {
    if (count != static_cast<size_t>(expected))
      throw ValidationError("expected " + std::to_string(expected) + " " +
                            what + "s, loaded " + std::to_string(count));
    for (size_t i = 0; i < count; ++i)
      if (get_id(i) != static_cast<int>(i) + 1)
        throw ValidationError(what + " ids are not contiguous at position " +
                              std::to_string(i + 1));
  }
};

}  // namespace trizagents
