#pragma once

// Lexical retrieval store. Documents are chunked with a fixed stride and
// ranked at query time with Okapi BM25 (k1 = 1.2, b = 0.75). Retrieval is
// fully deterministic: score descending, ties broken by (doc id, chunk
// index) ascending.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trizagents/errors.hpp"

namespace trizagents {

struct RagChunk {
  std::string doc_id;
  int chunk_index = 0;
  std::string text;
  double score = 0.0;  // set at query time
};

struct IngestStats {
  std::string doc_id;
  int chunk_count = 0;
  size_t char_count = 0;
  size_t token_estimate = 0;  // chars / 4, the usual rough model-token rate
};

struct RagConfig {
  size_t chunk_size = 800;
  size_t chunk_overlap = 200;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
};

inline std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string word;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      word += static_cast<char>(std::tolower(c));
    } else if (!word.empty()) {
      out.push_back(word);
      word.clear();
    }
  }
  if (!word.empty()) out.push_back(word);
  return out;
}

// Chunk starts advance by stride = size - overlap. A body no longer than the
// chunk size yields exactly one chunk; otherwise chunk ends snap back to the
// last whitespace past the stride boundary so words are not cut mid-way.
inline std::vector<std::string> chunk_text(const std::string& body,
                                           size_t chunk_size,
                                           size_t overlap) {
  std::vector<std::string> chunks;
  if (body.size() <= chunk_size) {
    chunks.push_back(body);
    return chunks;
  }
  const size_t stride = chunk_size - overlap;
  for (size_t start = 0; start < body.size(); start += stride) {
    size_t end = std::min(start + chunk_size, body.size());
    if (end < body.size() && !std::isspace((unsigned char)body[end]) &&
        !std::isspace((unsigned char)body[end - 1])) {
      // snapping below start+stride would leave a coverage gap
      for (size_t i = end; i > start + stride; --i) {
        if (std::isspace((unsigned char)body[i - 1])) {
          end = i;
          break;
        }
      }
    }
    chunks.push_back(body.substr(start, end - start));
  }
  return chunks;
}

class RagStore {
 public:
  explicit RagStore(RagConfig config = {}) : config_(config) {}

  IngestStats ingest(const std::string& doc_id, const std::string& body) {
    if (body.empty()) throw EmptyBodyError();
    if (docs_.count(doc_id)) throw DuplicateDocError(doc_id);
    docs_.insert(doc_id);
    auto texts = chunk_text(body, config_.chunk_size, config_.chunk_overlap);
    IngestStats stats;
    stats.doc_id = doc_id;
    stats.chunk_count = static_cast<int>(texts.size());
    stats.char_count = body.size();
    stats.token_estimate = body.size() / 4;
    int index = 0;
    for (auto& text : texts) {
      Entry entry;
      entry.chunk = {doc_id, index++, std::move(text), 0.0};
      entry.terms = count_terms(tokenize(entry.chunk.text));
      entry.length = 0;
      for (const auto& [_, n] : entry.terms) entry.length += n;
      total_length_ += entry.length;
      entries_.push_back(std::move(entry));
    }
    return stats;
  }

  bool empty() const { return entries_.empty(); }
  size_t chunk_count() const { return entries_.size(); }
  const RagConfig& config() const { return config_; }

  // Top-k chunks by BM25 plus a concatenated context string with source
  // attributions. The calling agent's model composes the prose answer.
  std::pair<std::string, std::vector<RagChunk>> query(
      const std::string& query_text, int k = 4) const {
    if (entries_.empty()) throw EmptyStoreError();
    auto terms = tokenize(query_text);
    if (terms.empty()) throw EmptyQueryError();

    const double avg_length =
        static_cast<double>(total_length_) / entries_.size();
    std::vector<RagChunk> scored;
    scored.reserve(entries_.size());
    for (const auto& entry : entries_) {
      RagChunk chunk = entry.chunk;
      chunk.score = bm25_score(terms, entry, avg_length);
      scored.push_back(std::move(chunk));
    }
    std::sort(scored.begin(), scored.end(),
              [](const RagChunk& a, const RagChunk& b) {
                if (a.score != b.score) return a.score > b.score;
                if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
                return a.chunk_index < b.chunk_index;
              });
    if (static_cast<int>(scored.size()) > k)
      scored.resize(static_cast<size_t>(k));

    std::string context;
    for (const auto& chunk : scored) {
      context += "[source: " + chunk.doc_id + " #" +
                 std::to_string(chunk.chunk_index) + "]\n";
      context += chunk.text;
      context += "\n\n";
    }
    return {context, scored};
  }

 private:
  struct Entry {
    RagChunk chunk;
    std::map<std::string, int> terms;
    long long length = 0;
  };

  static std::map<std::string, int> count_terms(
      const std::vector<std::string>& tokens) {
    std::map<std::string, int> out;
    for (const auto& t : tokens) ++out[t];
    return out;
  }

  // Okapi BM25 with the Lucene-style non-negative idf:
  // idf = ln(1 + (N - df + 0.5) / (df + 0.5)).
  double bm25_score(const std::vector<std::string>& query_terms,
                    const Entry& entry, double avg_length) const {
    const double n = static_cast<double>(entries_.size());
    double score = 0.0;
    for (const auto& term : query_terms) {
      auto it = entry.terms.find(term);
      if (it == entry.terms.end()) continue;
      double df = 0;
      for (const auto& e : entries_)
        if (e.terms.count(term)) ++df;
      const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      const double tf = it->second;
      const double norm =
          tf + config_.bm25_k1 *
                   (1.0 - config_.bm25_b +
                    config_.bm25_b * entry.length / avg_length);
      score += idf * tf * (config_.bm25_k1 + 1.0) / norm;
    }
    return score;
  }

  RagConfig config_;
  std::set<std::string> docs_;
  std::vector<Entry> entries_;
  long long total_length_ = 0;
};

}  // namespace trizagents
