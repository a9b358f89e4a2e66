#include "specdim/evalcmp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "specdim/error.hpp"

namespace specdim {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename Fn>
double per_query_ns(std::size_t queries, Fn&& fn) {
  const auto start = Clock::now();
  fn();
  const auto elapsed = std::chrono::duration<double, std::nano>(Clock::now() - start).count();
  return elapsed / static_cast<double>(queries);
}

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

std::vector<EmbeddingRecord> transform_records(const std::vector<EmbeddingRecord>& records,
                                               const SpectralReducer& reducer) {
  std::vector<EmbeddingRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.vector.size() != reducer.spec().source_dim) {
      throw DimensionMismatchError("transform: record " + std::to_string(r.id), reducer.spec().source_dim,
                                   r.vector.size());
    }
    out.push_back({r.id, r.doc_key, reducer.reduce_to_f32(r.vector), r.snippet});
  }
  return out;
}

PairedIndexes build_paired_dbs(const std::vector<EmbeddingRecord>& records, const ReductionSpec& spec,
                               Metric metric) {
  SpectralReducer reducer(spec);
  auto reduced = transform_records(records, reducer);
  return PairedIndexes{VectorIndex::build(records, metric, IndexKind::Original),
                       VectorIndex::build(std::move(reduced), metric, IndexKind::Transformed, spec),
                       std::move(reducer)};
}

double recall_at_k(std::span<const std::uint64_t> reference, std::span<const std::uint64_t> candidate,
                   std::size_t k) {
  if (k == 0) throw ValidationError("recall_at_k: k must be at least 1");
  const std::size_t ref_n = std::min(k, reference.size());
  const std::size_t cand_n = std::min(k, candidate.size());
  if (ref_n == 0) return 1.0;
  const std::set<std::uint64_t> ref(reference.begin(), reference.begin() + static_cast<std::ptrdiff_t>(ref_n));
  std::size_t common = 0;
  for (std::size_t i = 0; i < cand_n; ++i) common += ref.count(candidate[i]);
  return static_cast<double>(common) / static_cast<double>(ref_n);
}

double rank_correlation(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b, std::size_t k) {
  std::vector<std::uint64_t> ids(a.begin(), a.end());
  ids.insert(ids.end(), b.begin(), b.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() <= 1) return 1.0;

  const double absent = static_cast<double>(k + 1);
  auto rank_in = [absent](std::span<const std::uint64_t> list, std::uint64_t id) {
    const auto it = std::find(list.begin(), list.end(), id);
    return it == list.end() ? absent : static_cast<double>(it - list.begin() + 1);
  };
  std::vector<double> ra, rb;
  for (std::uint64_t id : ids) {
    ra.push_back(rank_in(a, id));
    rb.push_back(rank_in(b, id));
  }
  const double n = static_cast<double>(ids.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return ra == rb ? 1.0 : 0.0;
  return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

RetrievalComparison compare_query(const PairedIndexes& dbs, std::span<const float> query, std::size_t k,
                                  std::string query_key, unsigned threads) {
  const ReductionSpec& spec = dbs.spec();
  if (query.size() != spec.source_dim) throw DimensionMismatchError("compare_query: query", spec.source_dim, query.size());

  RetrievalComparison out;
  out.query_key = std::move(query_key);
  out.k = k;
  out.original = dbs.original.search(query, k, threads);
  const std::vector<float> reduced_query = dbs.reducer.reduce_to_f32(query);
  out.reduced = dbs.reduced.search(reduced_query, k, threads);
  const auto ids_o = out.original.ids();
  const auto ids_r = out.reduced.ids();
  out.recall_at_k = recall_at_k(ids_o, ids_r, k);
  out.rank_correlation = rank_correlation(ids_o, ids_r, k);
  out.factor = spec.ratio();
  out.dims = {spec.source_dim, spec.target_dim};
  return out;
}

TopicPurityReport topic_purity(const QueryResult& result, const std::map<std::uint64_t, std::string>& labels,
                               const std::string& query_topic) {
  TopicPurityReport report;
  report.query_topic = query_topic;
  std::size_t matching = 0;
  for (const Hit& h : result.hits) {
    const auto it = labels.find(h.id);
    if (it == labels.end()) throw UnlabeledIdError("topic_purity: hit id " + std::to_string(h.id) + " has no label");
    report.retrieved_labels.push_back(it->second);
    matching += it->second == query_topic ? 1 : 0;
  }
  report.purity_at_k =
      result.hits.empty() ? 0.0 : static_cast<double>(matching) / static_cast<double>(result.hits.size());
  return report;
}

BenchReport bench_search(const PairedIndexes& dbs, const std::vector<std::vector<float>>& queries, std::size_t k,
                         std::size_t repetitions, unsigned threads) {
  if (queries.empty()) throw EmptyInputError("bench_search: no queries");
  if (repetitions < 3) throw ValidationError("bench_search: need at least 3 repetitions");
  for (const auto& q : queries) {
    if (q.size() != dbs.spec().source_dim) {
      throw DimensionMismatchError("bench_search: query", dbs.spec().source_dim, q.size());
    }
  }

  std::vector<std::vector<float>> reduced_queries;
  reduced_queries.reserve(queries.size());
  for (const auto& q : queries) reduced_queries.push_back(dbs.reducer.reduce_to_f32(q));

  // Keeps the optimizer from discarding searches whose results are unused.
  volatile double sink = 0.0;
  std::vector<double> orig_ns, red_ns, xform_ns;
  for (std::size_t rep = 0; rep <= repetitions; ++rep) {
    const double o = per_query_ns(queries.size(), [&] {
      for (const auto& q : queries) sink = sink + dbs.original.search(q, k, threads).hits.front().distance;
    });
    const double r = per_query_ns(queries.size(), [&] {
      for (const auto& q : reduced_queries) sink = sink + dbs.reduced.search(q, k, threads).hits.front().distance;
    });
    const double t = per_query_ns(queries.size(), [&] {
      for (const auto& q : queries) sink = sink + dbs.reducer.reduce_to_f32(q).front();
    });
    if (rep == 0) continue;  // warm-up
    orig_ns.push_back(o);
    red_ns.push_back(r);
    xform_ns.push_back(t);
  }

  BenchReport report;
  report.queries = queries.size();
  report.repetitions = repetitions;
  report.records = dbs.original.size();
  report.median_ns_original = median(orig_ns);
  report.median_ns_reduced = median(red_ns);
  report.median_ns_transform = median(xform_ns);
  report.speedup = report.median_ns_original / report.median_ns_reduced;
  return report;
}

double ComparisonReport::mean_recall() const {
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rows) s += r.comparison.recall_at_k;
  return s / static_cast<double>(rows.size());
}

double ComparisonReport::mean_rank_correlation() const {
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rows) s += r.comparison.rank_correlation;
  return s / static_cast<double>(rows.size());
}

std::string report_json(const ComparisonReport& report) {
  using nlohmann::json;
  json queries = json::array();
  for (const auto& row : report.rows) {
    const auto& c = row.comparison;
    json q{{"query_key", c.query_key},
           {"k", c.k},
           {"factor", c.factor},
           {"dims", {c.dims.first, c.dims.second}},
           {"recall_at_k", c.recall_at_k},
           {"rank_correlation", c.rank_correlation},
           {"original_ids", c.original.ids()},
           {"reduced_ids", c.reduced.ids()}};
    if (row.query_topic) q["query_topic"] = *row.query_topic;
    if (row.purity_original) q["purity_original"] = *row.purity_original;
    if (row.purity_reduced) q["purity_reduced"] = *row.purity_reduced;
    if (row.latency_ns_original || row.latency_ns_reduced) {
      json lat = json::object();
      if (row.latency_ns_original) lat["original_ns"] = *row.latency_ns_original;
      if (row.latency_ns_reduced) lat["reduced_ns"] = *row.latency_ns_reduced;
      q["latencies"] = std::move(lat);
    }
    queries.push_back(std::move(q));
  }
  json out{{"metric", std::string(to_string(report.metric))},
           {"k", report.k},
           {"factor", report.spec.ratio()},
           {"dims", {report.spec.source_dim, report.spec.target_dim}},
           {"mean_recall_at_k", report.mean_recall()},
           {"mean_rank_correlation", report.mean_rank_correlation()},
           {"queries", std::move(queries)}};
  if (report.spec.factor) out["requested_factor"] = *report.spec.factor;
  return out.dump(2) + "\n";
}

std::string report_table(const ComparisonReport& report) {
  const bool has_purity = std::any_of(report.rows.begin(), report.rows.end(),
                                      [](const ComparisonRow& r) { return r.purity_original.has_value(); });
  const bool has_latency = std::any_of(report.rows.begin(), report.rows.end(),
                                       [](const ComparisonRow& r) { return r.latency_ns_original.has_value(); });

  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"query_key", "k", "N", "M", "recall@k", "spearman"};
  if (has_purity) {
    header.push_back("purity_orig");
    header.push_back("purity_red");
  }
  if (has_latency) {
    header.push_back("orig_ns");
    header.push_back("red_ns");
  }
  cells.push_back(header);
  for (const auto& row : report.rows) {
    const auto& c = row.comparison;
    std::vector<std::string> line{c.query_key,
                                  std::to_string(c.k),
                                  std::to_string(c.dims.first),
                                  std::to_string(c.dims.second),
                                  format_double(c.recall_at_k, 3),
                                  format_double(c.rank_correlation, 3)};
    if (has_purity) {
      line.push_back(row.purity_original ? format_double(*row.purity_original, 3) : "-");
      line.push_back(row.purity_reduced ? format_double(*row.purity_reduced, 3) : "-");
    }
    if (has_latency) {
      line.push_back(row.latency_ns_original ? format_double(*row.latency_ns_original, 0) : "-");
      line.push_back(row.latency_ns_reduced ? format_double(*row.latency_ns_reduced, 0) : "-");
    }
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const std::string pad(width[i] - line[i].size(), ' ');
      // Left-align the key column, right-align numbers.
      out += i == 0 ? line[i] + pad : pad + line[i];
      out += i + 1 < line.size() ? "  " : "\n";
    }
  }
  out += "mean recall@" + std::to_string(report.k) + " = " + format_double(report.mean_recall(), 4) +
         ", mean spearman = " + format_double(report.mean_rank_correlation(), 4) + "\n";
  return out;
}

}  // namespace specdim
