#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "specdim/store.hpp"

namespace specdim {

// Multi-topic text corpus for model-free experiments. Each topic owns a
// disjoint vocabulary; documents draw words from their topic's pool with
// Zipf weights (rank r has weight 1 / r^zipf_exponent), like natural text.
struct SyntheticCorpusConfig {
  std::size_t topics = 2;
  std::size_t docs_per_topic = 50;
  std::size_t tokens_per_doc = 20;
  std::size_t vocab_per_topic = 50;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 42;  // drives both word sampling and the mock embedder
  std::size_t dim = 768;
};

// The reference corpus: 2 topics x 50 documents, 20 tokens, dim 768, seed 42.
SyntheticCorpusConfig standard_corpus_config();

struct LabeledDocument {
  std::string doc_key;  // "<label>#<ordinal>"
  std::string label;
  std::string text;
};

std::string topic_label(std::size_t topic);
std::vector<std::string> topic_vocabulary(std::size_t topic, std::size_t size);

// Documents grouped by topic: all of topic 0, then topic 1, ...
std::vector<LabeledDocument> make_topic_documents(const SyntheticCorpusConfig& config);

// Fresh documents from the same generator, cycling through topics, keyed
// "query-<topic label>#<n>". Drawn from a stream independent of the corpus.
std::vector<LabeledDocument> make_topic_queries(const SyntheticCorpusConfig& config, std::size_t count,
                                                std::uint64_t query_seed);

// Mock-embeds documents in order; ids are 0..n-1 and snippets are truncated text.
std::vector<EmbeddingRecord> embed_documents(const std::vector<LabeledDocument>& docs, std::size_t dim,
                                             std::uint64_t seed);

}  // namespace specdim
