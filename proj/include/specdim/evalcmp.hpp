#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specdim/reducer.hpp"
#include "specdim/store.hpp"

namespace specdim {

// DB_orig and DB_trans over the same documents, with identical ids and order.
struct PairedIndexes {
  VectorIndex original;
  VectorIndex reduced;
  SpectralReducer reducer;

  const ReductionSpec& spec() const { return reducer.spec(); }
};

PairedIndexes build_paired_dbs(const std::vector<EmbeddingRecord>& records, const ReductionSpec& spec,
                               Metric metric);

// Transforms every record with the same path used for queries.
std::vector<EmbeddingRecord> transform_records(const std::vector<EmbeddingRecord>& records,
                                               const SpectralReducer& reducer);

struct RetrievalComparison {
  std::string query_key;
  std::size_t k = 0;
  QueryResult original;
  QueryResult reduced;
  double recall_at_k = 0.0;       // |top-k ids common to both| / min(k, corpus size)
  double rank_correlation = 0.0;  // Spearman over the id union, absent ranks = k + 1
  double factor = 0.0;            // N / M
  std::pair<std::size_t, std::size_t> dims;  // (N, M)
};

double recall_at_k(std::span<const std::uint64_t> reference, std::span<const std::uint64_t> candidate,
                   std::size_t k);
double rank_correlation(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b, std::size_t k);

// Searches DB_orig with the raw query and DB_trans with its transform.
RetrievalComparison compare_query(const PairedIndexes& dbs, std::span<const float> query, std::size_t k,
                                  std::string query_key = "query", unsigned threads = 1);

struct TopicPurityReport {
  std::string query_topic;
  std::vector<std::string> retrieved_labels;
  double purity_at_k = 0.0;
};

// Fraction of hits labeled query_topic. Throws UnlabeledIdError for a hit without a label.
TopicPurityReport topic_purity(const QueryResult& result, const std::map<std::uint64_t, std::string>& labels,
                               const std::string& query_topic);

struct BenchReport {
  std::size_t queries = 0;
  std::size_t repetitions = 0;
  std::size_t records = 0;
  double median_ns_original = 0.0;   // per query
  double median_ns_reduced = 0.0;    // per query, search only
  double median_ns_transform = 0.0;  // per query, FFT + truncation
  double speedup = 0.0;              // original / reduced
};

// Times every query against both indexes. One warm-up pass is discarded,
// then the median over `repetitions` passes is reported.
BenchReport bench_search(const PairedIndexes& dbs, const std::vector<std::vector<float>>& queries, std::size_t k,
                         std::size_t repetitions, unsigned threads = 1);

// One row of a comparison report.
struct ComparisonRow {
  RetrievalComparison comparison;
  std::optional<std::string> query_topic;
  std::optional<double> purity_original;
  std::optional<double> purity_reduced;
  std::optional<double> latency_ns_original;
  std::optional<double> latency_ns_reduced;
};

struct ComparisonReport {
  Metric metric = Metric::L2;
  ReductionSpec spec;
  std::size_t k = 0;
  std::vector<ComparisonRow> rows;

  double mean_recall() const;
  double mean_rank_correlation() const;
};

std::string report_json(const ComparisonReport& report);
std::string report_table(const ComparisonReport& report);

}  // namespace specdim
