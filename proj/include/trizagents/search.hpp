#pragma once

// Web search behind one provider interface. Shipping modes: `fixture`
// (offline, canned results keyed by normalized query) and one live HTTP
// provider speaking a small JSON contract.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "trizagents/errors.hpp"

namespace trizagents {

struct SearchResult {
  std::string url;
  std::string content;

  bool operator==(const SearchResult&) const = default;
};

// Lowercase, collapse internal whitespace, trim.
inline std::string normalize_query(const std::string& query) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : query) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(c));
    }
  }
  return out;
}

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;

  // pre: query non-empty, k >= 1. Returns at most k results in provider
  // ranking order.
  virtual std::vector<SearchResult> search(const std::string& query,
                                           int k = 5) = 0;
};

// Canned results from a JSON file: {"<normalized query>": [{"url","content"}]}.
class FixtureSearchProvider : public SearchProvider {
 public:
  static FixtureSearchProvider load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFileError(path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.filename().string(), 0, e.what());
    }
    FixtureSearchProvider provider;
    for (const auto& [query, results] : j.items()) {
      std::vector<SearchResult> list;
      for (const auto& r : results)
        list.push_back({r.at("url").get<std::string>(),
                        r.at("content").get<std::string>()});
      provider.fixtures_[normalize_query(query)] = std::move(list);
    }
    return provider;
  }

  std::vector<SearchResult> search(const std::string& query,
                                   int k = 5) override {
    if (normalize_query(query).empty()) throw EmptyQueryError();
    auto it = fixtures_.find(normalize_query(query));
    if (it == fixtures_.end()) throw MissFixtureError(normalize_query(query));
    std::vector<SearchResult> out = it->second;
    if (static_cast<int>(out.size()) > k) out.resize(static_cast<size_t>(k));
    return out;
  }

  void add(const std::string& query, std::vector<SearchResult> results) {
    fixtures_[normalize_query(query)] = std::move(results);
  }

 private:
  std::map<std::string, std::vector<SearchResult>> fixtures_;
};

// Live provider. Expects GET <path>?q=<query> to return
// {"results": [{"url": ..., "content": ...}, ...]}.
class HttpSearchProvider : public SearchProvider {
 public:
  HttpSearchProvider(std::string base_url, std::string path = "/search",
                     int timeout_seconds = 30)
      : base_url_(std::move(base_url)),
        path_(std::move(path)),
        timeout_seconds_(timeout_seconds) {}

  std::vector<SearchResult> search(const std::string& query,
                                   int k = 5) override {
    if (normalize_query(query).empty()) throw EmptyQueryError();
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    httplib::Params params = {{"q", query}};
    auto result = client.Get(path_, params, httplib::Headers{});
    if (!result)
      throw ProviderFailureError(0, httplib::to_string(result.error()));
    if (result->status != 200)
      throw ProviderFailureError(result->status, result->body);
    std::vector<SearchResult> out;
    try {
      auto j = nlohmann::json::parse(result->body);
      for (const auto& r : j.at("results")) {
        out.push_back({r.at("url").get<std::string>(),
                       r.at("content").get<std::string>()});
        if (static_cast<int>(out.size()) == k) break;
      }
    } catch (const nlohmann::json::exception& e) {
      throw ProviderFailureError(result->status, e.what());
    }
    return out;
  }

 private:
  std::string base_url_;
  std::string path_;
  int timeout_seconds_;
};

}  // namespace trizagents
