#include "specdim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "specdim/corpus.hpp"
#include "specdim/error.hpp"

namespace specdim {

namespace {

class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cdf_[r] = total;
    }
    for (double& c : cdf_) c /= total;
  }

  std::size_t operator()(std::mt19937_64& rng) const {
    const double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

void validate(const SyntheticCorpusConfig& c) {
  if (c.topics == 0 || c.tokens_per_doc == 0 || c.vocab_per_topic == 0 || c.dim == 0) {
    throw ValidationError("synthetic corpus: topics, tokens_per_doc, vocab_per_topic and dim must be positive");
  }
  if (!std::isfinite(c.zipf_exponent) || c.zipf_exponent < 0.0) {
    throw ValidationError("synthetic corpus: zipf_exponent must be finite and non-negative");
  }
}

std::string draw_text(const std::vector<std::string>& vocab, const ZipfSampler& sampler, std::size_t tokens,
                      std::mt19937_64& rng) {
  std::string text;
  for (std::size_t t = 0; t < tokens; ++t) {
    if (t > 0) text += ' ';
    text += vocab[sampler(rng)];
  }
  return text;
}

}  // namespace

SyntheticCorpusConfig standard_corpus_config() { return {}; }

std::string topic_label(std::size_t topic) {
  static const char* const kNames[] = {"machine_learning", "wine_tasting"};
  if (topic < std::size(kNames)) return kNames[topic];
  return "topic" + std::to_string(topic);
}

std::vector<std::string> topic_vocabulary(std::size_t topic, std::size_t size) {
  // Prefixing with the label keeps pools disjoint across topics.
  std::vector<std::string> words;
  words.reserve(size);
  const std::string prefix = topic_label(topic);
  for (std::size_t i = 0; i < size; ++i) words.push_back(prefix + "_w" + std::to_string(i));
  return words;
}

std::vector<LabeledDocument> make_topic_documents(const SyntheticCorpusConfig& config) {
  validate(config);
  const ZipfSampler sampler(config.vocab_per_topic, config.zipf_exponent);
  std::mt19937_64 rng(config.seed);
  std::vector<LabeledDocument> docs;
  docs.reserve(config.topics * config.docs_per_topic);
  for (std::size_t t = 0; t < config.topics; ++t) {
    const auto vocab = topic_vocabulary(t, config.vocab_per_topic);
    const std::string label = topic_label(t);
    for (std::size_t d = 0; d < config.docs_per_topic; ++d) {
      docs.push_back({label + "#" + std::to_string(d), label, draw_text(vocab, sampler, config.tokens_per_doc, rng)});
    }
  }
  return docs;
}

std::vector<LabeledDocument> make_topic_queries(const SyntheticCorpusConfig& config, std::size_t count,
                                                std::uint64_t query_seed) {
  validate(config);
  const ZipfSampler sampler(config.vocab_per_topic, config.zipf_exponent);
  std::mt19937_64 rng(query_seed);
  std::vector<std::vector<std::string>> vocabs;
  for (std::size_t t = 0; t < config.topics; ++t) vocabs.push_back(topic_vocabulary(t, config.vocab_per_topic));
  std::vector<LabeledDocument> queries;
  queries.reserve(count);
  for (std::size_t q = 0; q < count; ++q) {
    const std::size_t t = q % config.topics;
    const std::string label = topic_label(t);
    queries.push_back(
        {"query-" + label + "#" + std::to_string(q), label, draw_text(vocabs[t], sampler, config.tokens_per_doc, rng)});
  }
  return queries;
}

std::vector<EmbeddingRecord> embed_documents(const std::vector<LabeledDocument>& docs, std::size_t dim,
                                             std::uint64_t seed) {
  std::vector<EmbeddingRecord> records;
  records.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    records.push_back({i, docs[i].doc_key, mock_embed(docs[i].text, dim, seed), make_snippet(docs[i].text)});
  }
  return records;
}

}  // namespace specdim
