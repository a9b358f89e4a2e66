// specdim: chunk, mock-embed, transform, index, query, compare, project and
// bench embeddings reduced by truncated FFT amplitude spectra.
//
// Exit codes: 0 success, 1 validation / usage error, 2 IO or file format error.
// Machine-readable output goes to stdout or --out files; logs go to stderr.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specdim/corpus.hpp"
#include "specdim/error.hpp"
#include "specdim/evalcmp.hpp"
#include "specdim/mds.hpp"
#include "specdim/reducer.hpp"
#include "specdim/store.hpp"
#include "specdim/synthetic.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using namespace specdim;

void log(const std::string& msg) { std::cerr << "specdim: " << msg << "\n"; }

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::string decode_splitter(const std::string& name) {
  if (name == "nl") return "\n";
  if (name == "crlf") return "\r\n";
  if (name == "blank") return "\n\n";
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (name[i] == '\\' && i + 1 < name.size()) {
      const char c = name[++i];
      out += c == 'n' ? '\n' : c == 't' ? '\t' : c == 'r' ? '\r' : c;
    } else {
      out += name[i];
    }
  }
  return out;
}

// Options shared by every subcommand that reads an embedding file.
struct EmbeddingInput {
  std::string path;
  std::string format;  // empty = from extension

  std::vector<EmbeddingRecord> load() const {
    const auto fmt = format.empty() ? format_from_extension(path) : parse_embedding_format(format);
    auto records = read_embeddings(path, fmt);
    if (records.empty()) throw ValidationError("'" + path + "' holds no records");
    return records;
  }
};

// --factor / --target-dim pair.
struct ReductionOptions {
  std::optional<double> factor;
  std::optional<std::size_t> target_dim;

  void attach(CLI::App* cmd, bool required) {
    auto* f = cmd->add_option("--factor", factor, "Reduction factor f; keeps M = floor(N / f) components");
    auto* t = cmd->add_option("--target-dim", target_dim, "Keep exactly M components");
    f->excludes(t);
    t->excludes(f);
    if (required) {
      auto* group = cmd->add_option_group("reduction");
      group->add_option(f);
      group->add_option(t);
      group->require_option(1);
    }
  }

  bool given() const { return factor || target_dim; }

  ReductionSpec spec_for(std::size_t source_dim) const {
    if (factor) return make_spec(source_dim, *factor);
    return make_spec_for_target(source_dim, *target_dim);
  }
};

std::vector<float> parse_vector_json(const json& j, const std::string& what) {
  const json& arr = j.is_object() && j.contains("vector") ? j["vector"] : j;
  if (!arr.is_array() || arr.empty()) throw ValidationError(what + ": expected a non-empty array of numbers");
  std::vector<float> v;
  for (const auto& x : arr) {
    if (!x.is_number()) throw ValidationError(what + ": expected a non-empty array of numbers");
    v.push_back(static_cast<float>(x.get<double>()));
  }
  return v;
}

std::vector<float> read_query_vector(const fs::path& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path.string() + "': invalid JSON: " + e.what());
  }
  return parse_vector_json(j, path.string());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  SyntheticCorpusConfig config = standard_corpus_config();
  std::string out;
  std::size_t queries = 0;
  std::uint64_t query_seed = 4242;
  std::string queries_out;
};

int run_synth(const SynthArgs& a) {
  const auto docs = make_topic_documents(a.config);
  std::vector<Chunk> chunks;
  for (const auto& d : docs) chunks.push_back({d.doc_key, d.text, whitespace_tokens(d.text).size(), false});
  write_chunks(chunks, a.out);
  log("wrote " + std::to_string(chunks.size()) + " documents to " + a.out);
  if (a.queries > 0) {
    if (a.queries_out.empty()) throw ValidationError("--queries needs --queries-out");
    std::string out;
    for (const auto& q : make_topic_queries(a.config, a.queries, a.query_seed)) {
      out += json{{"query_key", q.doc_key}, {"text", q.text}, {"topic", q.label}}.dump() + "\n";
    }
    write_text_file(a.queries_out, out);
    log("wrote " + std::to_string(a.queries) + " queries to " + a.queries_out);
  }
  return 0;
}

// ---------------------------------------------------------------- chunk

struct ChunkArgs {
  std::string in;
  std::string out;
  std::size_t max_tokens = 128;
  std::string splitter = "nl";
  std::string source_id;
};

int run_chunk(const ChunkArgs& a) {
  const std::string text = read_text_file(a.in);
  const ChunkingConfig config{a.max_tokens, decode_splitter(a.splitter)};
  const std::string source = a.source_id.empty() ? fs::path(a.in).stem().string() : a.source_id;
  const auto chunks = chunk_text(text, config, source);
  write_chunks(chunks, a.out);
  const auto oversized = std::count_if(chunks.begin(), chunks.end(), [](const Chunk& c) { return c.oversized; });
  log("wrote " + std::to_string(chunks.size()) + " chunks to " + a.out + " (" + std::to_string(oversized) +
      " oversized)");
  return 0;
}

// ---------------------------------------------------------------- mock-embed

struct MockEmbedArgs {
  std::string in;
  std::string out;
  std::size_t dim = 768;
  std::uint64_t seed = 42;
  std::string format;
};

int run_mock_embed(const MockEmbedArgs& a) {
  const auto chunks = read_chunks(a.in);
  std::vector<EmbeddingRecord> records;
  records.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    records.push_back({i, chunks[i].doc_key, mock_embed(chunks[i].text, a.dim, a.seed), make_snippet(chunks[i].text)});
  }
  const auto fmt = a.format.empty() ? format_from_extension(a.out) : parse_embedding_format(a.format);
  write_embeddings(records, a.out, fmt);
  log("embedded " + std::to_string(records.size()) + " chunks at dim " + std::to_string(a.dim) + " -> " + a.out);
  return 0;
}

// ---------------------------------------------------------------- transform

struct TransformArgs {
  EmbeddingInput input;
  ReductionOptions reduction;
  std::string out;
  std::string out_format;
};

int run_transform(const TransformArgs& a) {
  const auto records = a.input.load();
  const SpectralReducer reducer(a.reduction.spec_for(records.front().vector.size()));
  const auto reduced = transform_records(records, reducer);
  const auto fmt = a.out_format.empty() ? format_from_extension(a.out) : parse_embedding_format(a.out_format);
  write_embeddings(reduced, a.out, fmt);
  log("transformed " + std::to_string(reduced.size()) + " vectors " + std::to_string(reducer.spec().source_dim) +
      " -> " + std::to_string(reducer.spec().target_dim) + " dims, wrote " + a.out);
  return 0;
}

// ---------------------------------------------------------------- index

struct IndexArgs {
  EmbeddingInput input;
  std::string metric = "l2";
  ReductionOptions reduction;
  std::string out;
};

int run_index(const IndexArgs& a) {
  auto records = a.input.load();
  const Metric metric = parse_metric(a.metric);
  if (a.reduction.given()) {
    const SpectralReducer reducer(a.reduction.spec_for(records.front().vector.size()));
    auto reduced = transform_records(records, reducer);
    save_index(VectorIndex::build(std::move(reduced), metric, IndexKind::Transformed, reducer.spec()), a.out);
    log("built transformed index (" + std::to_string(reducer.spec().source_dim) + " -> " +
        std::to_string(reducer.spec().target_dim) + " dims, " + std::to_string(records.size()) + " records) -> " +
        a.out);
  } else {
    const std::size_t n = records.size();
    save_index(VectorIndex::build(std::move(records), metric, IndexKind::Original), a.out);
    log("built original index (" + std::to_string(n) + " records) -> " + a.out);
  }
  return 0;
}

// ---------------------------------------------------------------- query

struct QueryArgs {
  std::string index;
  std::string query_vec;
  std::string query_text;
  std::size_t k = 4;
  std::optional<double> transform_factor;
  std::uint64_t embed_seed = 42;
  bool as_json = false;
};

int run_query(const QueryArgs& a) {
  const VectorIndex index = load_index(a.index);
  const auto& reduction = index.reduction();
  const std::size_t embed_dim = reduction ? reduction->source_dim : index.dim();

  std::vector<float> query;
  if (!a.query_vec.empty()) {
    query = read_query_vector(a.query_vec);
  } else {
    query = mock_embed(a.query_text, embed_dim, a.embed_seed);
  }

  if (a.transform_factor) {
    const auto spec = make_spec(query.size(), *a.transform_factor);
    query = SpectralReducer(spec).reduce_to_f32(query);
  } else if (reduction && query.size() == reduction->source_dim && query.size() != index.dim()) {
    query = SpectralReducer(*reduction).reduce_to_f32(query);
  }
  if (query.size() != index.dim()) throw DimensionMismatchError("query vector vs index", index.dim(), query.size());

  const QueryResult result = index.search(query, a.k, threads_from_env());
  if (a.as_json) {
    json hits = json::array();
    for (std::size_t i = 0; i < result.hits.size(); ++i) {
      const auto& h = result.hits[i];
      const auto snippet = index.record(*index.position_of(h.id)).snippet;
      hits.push_back({{"rank", i + 1}, {"id", h.id}, {"doc_key", h.doc_key}, {"distance", h.distance},
                      {"snippet", std::string(snippet)}});
    }
    std::cout << json{{"k", a.k}, {"metric", std::string(to_string(index.metric()))}, {"hits", hits}}.dump(2) << "\n";
  } else {
    std::printf("%-5s %-8s %-24s %-14s %s\n", "rank", "id", "doc_key", "distance", "snippet");
    for (std::size_t i = 0; i < result.hits.size(); ++i) {
      const auto& h = result.hits[i];
      const auto snippet = index.record(*index.position_of(h.id)).snippet;
      std::printf("%-5zu %-8llu %-24s %-14.9g %.*s\n", i + 1, static_cast<unsigned long long>(h.id),
                  h.doc_key.c_str(), h.distance, static_cast<int>(std::min<std::size_t>(snippet.size(), 60)),
                  snippet.data());
    }
  }
  return 0;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  EmbeddingInput input;
  ReductionOptions reduction;
  std::size_t k = 10;
  std::string metric = "l2";
  std::string queries;
  std::string report;
  std::uint64_t embed_seed = 42;
  bool timing = false;
};

struct QuerySpec {
  std::string key;
  std::vector<float> vector;
  std::optional<std::string> topic;
};

std::vector<QuerySpec> read_queries(const fs::path& path, std::size_t dim, std::uint64_t embed_seed) {
  std::vector<QuerySpec> out;
  std::istringstream lines(read_text_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");
    QuerySpec q;
    q.key = j.value("query_key", "q" + std::to_string(out.size()));
    if (j.contains("vector")) {
      q.vector = parse_vector_json(j, "line " + std::to_string(line_no));
    } else if (j.contains("text") && j["text"].is_string()) {
      q.vector = mock_embed(j["text"].get<std::string>(), dim, embed_seed);
    } else {
      throw ParseError(line_no, "query needs a \"vector\" or \"text\" field");
    }
    if (j.contains("topic") && j["topic"].is_string()) q.topic = j["topic"].get<std::string>();
    out.push_back(std::move(q));
  }
  if (out.empty()) throw ValidationError("'" + path.string() + "' holds no queries");
  return out;
}

int run_compare(const CompareArgs& a) {
  const auto records = a.input.load();
  const std::size_t dim = records.front().vector.size();
  const PairedIndexes dbs = build_paired_dbs(records, a.reduction.spec_for(dim), parse_metric(a.metric));
  std::map<std::uint64_t, std::string> labels;
  for (const auto& r : records) labels[r.id] = std::string(doc_key_source(r.doc_key));

  ComparisonReport report;
  report.metric = parse_metric(a.metric);
  report.spec = dbs.spec();
  report.k = a.k;
  const unsigned threads = threads_from_env();
  for (const auto& q : read_queries(a.queries, dim, a.embed_seed)) {
    ComparisonRow row;
    row.comparison = compare_query(dbs, q.vector, a.k, q.key, threads);
    if (q.topic) {
      row.query_topic = q.topic;
      row.purity_original = topic_purity(row.comparison.original, labels, *q.topic).purity_at_k;
      row.purity_reduced = topic_purity(row.comparison.reduced, labels, *q.topic).purity_at_k;
    }
    if (a.timing) {
      const std::vector<std::vector<float>> one{q.vector};
      const auto bench = bench_search(dbs, one, a.k, 5, threads);
      row.latency_ns_original = bench.median_ns_original;
      row.latency_ns_reduced = bench.median_ns_reduced;
    }
    report.rows.push_back(std::move(row));
  }
  write_text_file(a.report, report_json(report));
  std::cout << report_table(report);
  log("wrote report for " + std::to_string(report.rows.size()) + " queries to " + a.report);
  return 0;
}

// ---------------------------------------------------------------- project

struct ProjectArgs {
  EmbeddingInput input;
  std::string metric = "l2";
  std::uint64_t seed = 0;
  std::string out;
  std::string svg;
  ReductionOptions reduction;
  std::string query_text;
  std::uint64_t embed_seed = 42;
  std::size_t restarts = 1;
  std::size_t max_iter = 300;
  double eps = 1e-6;
  bool trace = false;
};

int run_project(const ProjectArgs& a) {
  const auto records = a.input.load();
  const std::size_t dim = records.front().vector.size();
  std::vector<std::vector<float>> vectors;
  std::vector<std::string> keys, labels;
  for (const auto& r : records) {
    vectors.push_back(r.vector);
    keys.push_back(r.doc_key);
    labels.emplace_back(doc_key_source(r.doc_key));
  }
  if (!a.query_text.empty()) {
    vectors.push_back(mock_embed(a.query_text, dim, a.embed_seed));
    keys.emplace_back("query");
    labels.emplace_back("query");
  }
  if (a.reduction.given()) {
    const SpectralReducer reducer(a.reduction.spec_for(dim));
    for (auto& v : vectors) v = reducer.reduce_to_f32(v);
  }

  const auto delta = pairwise_distances(vectors, parse_metric(a.metric));
  const MdsResult mds = mds_project(delta, {a.seed, a.max_iter, a.eps, a.restarts});
  if (a.trace) {
    for (std::size_t i = 0; i < mds.stress_trace.size(); ++i) {
      std::cerr << "stress[" << i << "] = " << format_g9(mds.stress_trace[i]) << "\n";
    }
  }

  std::string csv = "doc_key,label,x,y\n";
  std::vector<tools::ScatterPoint> points;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto& p = mds.coordinates[i];
    csv += csv_field(keys[i]) + "," + csv_field(labels[i]) + "," + format_g9(p[0]) + "," + format_g9(p[1]) + "\n";
    points.push_back({labels[i], p});
  }
  write_text_file(a.out, csv);
  if (!a.svg.empty()) {
    const std::string title = "MDS projection (" + a.metric + ", " + std::to_string(vectors.front().size()) + " dims)";
    write_text_file(a.svg, tools::render_scatter_svg(points, title));
  }
  log("projected " + std::to_string(keys.size()) + " points, stress " + format_g9(mds.stress) + " after " +
      std::to_string(mds.iterations) + " iterations" + (mds.converged ? "" : " (not converged)"));
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  EmbeddingInput input;
  ReductionOptions reduction;
  std::size_t k = 10;
  std::size_t reps = 30;
  std::size_t queries = 100;
  std::string metric = "l2";
  bool as_json = false;
};

int run_bench(const BenchArgs& a) {
  const auto records = a.input.load();
  const PairedIndexes dbs = build_paired_dbs(records, a.reduction.spec_for(records.front().vector.size()),
                                             parse_metric(a.metric));
  std::vector<std::vector<float>> queries;
  for (std::size_t i = 0; i < std::min(a.queries, records.size()); ++i) queries.push_back(records[i].vector);
  const BenchReport r = bench_search(dbs, queries, a.k, a.reps, threads_from_env());
  if (a.as_json) {
    std::cout << json{{"records", r.records},
                      {"queries", r.queries},
                      {"repetitions", r.repetitions},
                      {"dims", {dbs.spec().source_dim, dbs.spec().target_dim}},
                      {"median_ns_original", r.median_ns_original},
                      {"median_ns_reduced", r.median_ns_reduced},
                      {"median_ns_transform", r.median_ns_transform},
                      {"speedup", r.speedup}}
                     .dump(2)
              << "\n";
  } else {
    std::printf("records %zu, queries %zu, reps %zu, dims %zu -> %zu\n", r.records, r.queries, r.repetitions,
                dbs.spec().source_dim, dbs.spec().target_dim);
    std::printf("original   %12.0f ns/query\n", r.median_ns_original);
    std::printf("reduced    %12.0f ns/query\n", r.median_ns_reduced);
    std::printf("transform  %12.0f ns/query\n", r.median_ns_transform);
    std::printf("speedup    %12.2fx\n", r.speedup);
  }
  return 0;
}

void add_embedding_input(CLI::App* cmd, EmbeddingInput& input, const std::string& flag, const std::string& help) {
  cmd->add_option(flag, input.path, help)->required();
  cmd->add_option("--format", input.format, "Input format: jsonl or bin (default: from extension)")
      ->check(CLI::IsMember({"jsonl", "bin"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specdim: FFT amplitude-spectrum reduction of embeddings with paired exact search"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic multi-topic corpus as chunks JSONL");
  c_synth->add_option("--out", synth.out, "Output chunks JSONL")->required();
  c_synth->add_option("--topics", synth.config.topics, "Number of topics")->capture_default_str();
  c_synth->add_option("--docs-per-topic", synth.config.docs_per_topic, "Documents per topic")->capture_default_str();
  c_synth->add_option("--tokens", synth.config.tokens_per_doc, "Tokens per document")->capture_default_str();
  c_synth->add_option("--vocab", synth.config.vocab_per_topic, "Words per topic vocabulary")->capture_default_str();
  c_synth->add_option("--zipf", synth.config.zipf_exponent, "Zipf exponent of word frequencies")->capture_default_str();
  c_synth->add_option("--seed", synth.config.seed, "Word sampling seed")->capture_default_str();
  c_synth->add_option("--queries", synth.queries, "Also generate this many in-topic queries")->capture_default_str();
  c_synth->add_option("--query-seed", synth.query_seed, "Query sampling seed")->capture_default_str();
  c_synth->add_option("--queries-out", synth.queries_out, "Queries JSONL (query_key, text, topic)");

  ChunkArgs chunk;
  auto* c_chunk = app.add_subcommand("chunk", "Split a text file into token-bounded chunks");
  c_chunk->add_option("--in", chunk.in, "Input text file")->required();
  c_chunk->add_option("--out", chunk.out, "Output chunks JSONL")->required();
  c_chunk->add_option("--max-tokens", chunk.max_tokens, "Maximum whitespace tokens per chunk")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_chunk->add_option("--splitter", chunk.splitter, "Unit separator: nl, crlf, blank, or a literal (\\n escapes)")
      ->capture_default_str();
  c_chunk->add_option("--source-id", chunk.source_id, "Prefix of chunk doc keys (default: input file stem)");

  MockEmbedArgs embed;
  auto* c_embed = app.add_subcommand("mock-embed", "Embed chunks with the deterministic model-free embedder");
  c_embed->add_option("--in", embed.in, "Chunks JSONL")->required();
  c_embed->add_option("--out", embed.out, "Output embedding file")->required();
  c_embed->add_option("--dim", embed.dim, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  c_embed->add_option("--seed", embed.seed, "Embedder seed")->capture_default_str();
  c_embed->add_option("--format", embed.format, "Output format: jsonl or bin (default: from extension)")
      ->check(CLI::IsMember({"jsonl", "bin"}));

  TransformArgs transform;
  auto* c_transform = app.add_subcommand("transform", "Replace each vector by its truncated FFT amplitude spectrum");
  add_embedding_input(c_transform, transform.input, "--in", "Input embedding file");
  transform.reduction.attach(c_transform, true);
  c_transform->add_option("--out", transform.out, "Output embedding file")->required();
  c_transform->add_option("--out-format", transform.out_format, "Output format: jsonl or bin")
      ->check(CLI::IsMember({"jsonl", "bin"}));

  IndexArgs index;
  auto* c_index = app.add_subcommand("index", "Build a flat exact-search index file");
  add_embedding_input(c_index, index.input, "--in", "Input embedding file");
  c_index->add_option("--metric", index.metric, "Distance: l2 or cosine")
      ->capture_default_str()
      ->check(CLI::IsMember({"l2", "cosine"}));
  index.reduction.attach(c_index, false);
  c_index->add_option("--out", index.out, "Output index file")->required();

  QueryArgs query;
  auto* c_query = app.add_subcommand("query", "Exact top-k search against an index file");
  c_query->add_option("--index", query.index, "Index file")->required();
  auto* qv = c_query->add_option("--query-vec", query.query_vec, "JSON file: array of numbers or {\"vector\": [...]}")
                 ;
  auto* qt = c_query->add_option("--query-text", query.query_text, "Text, embedded with the mock embedder");
  qv->excludes(qt);
  auto* qgroup = c_query->add_option_group("query");
  qgroup->add_option(qv);
  qgroup->add_option(qt);
  qgroup->require_option(1);
  c_query->add_option("--k", query.k, "Number of hits")->capture_default_str()->check(CLI::PositiveNumber);
  c_query->add_option("--transform-factor", query.transform_factor,
                      "Transform the query with this factor first (automatic for transformed indexes)");
  c_query->add_option("--embed-seed", query.embed_seed, "Mock embedder seed for --query-text")->capture_default_str();
  c_query->add_flag("--json", query.as_json, "Emit JSON instead of a table");

  CompareArgs compare;
  auto* c_compare = app.add_subcommand("compare", "Compare retrieval in original vs reduced space");
  add_embedding_input(c_compare, compare.input, "--emb", "Embedding file (original vectors)");
  compare.reduction.attach(c_compare, true);
  c_compare->add_option("--k", compare.k, "Top-k")->capture_default_str()->check(CLI::PositiveNumber);
  c_compare->add_option("--metric", compare.metric, "Distance: l2 or cosine")
      ->capture_default_str()
      ->check(CLI::IsMember({"l2", "cosine"}));
  c_compare->add_option("--queries", compare.queries, "Queries JSONL: query_key + vector or text, optional topic")
      ->required()
      ;
  c_compare->add_option("--report", compare.report, "Output JSON report")->required();
  c_compare->add_option("--embed-seed", compare.embed_seed, "Mock embedder seed for text queries")
      ->capture_default_str();
  c_compare->add_flag("--timing", compare.timing, "Add per-query latencies (makes the report non-deterministic)");

  ProjectArgs project;
  auto* c_project = app.add_subcommand("project", "2-D metric MDS projection of an embedding file");
  add_embedding_input(c_project, project.input, "--emb", "Embedding file");
  c_project->add_option("--metric", project.metric, "Distance: l2 or cosine")
      ->capture_default_str()
      ->check(CLI::IsMember({"l2", "cosine"}));
  c_project->add_option("--seed", project.seed, "MDS initialization seed")->capture_default_str();
  c_project->add_option("--out", project.out, "Output CSV: doc_key,label,x,y")->required();
  c_project->add_option("--svg", project.svg, "Also write an SVG scatter plot");
  project.reduction.attach(c_project, false);
  c_project->add_option("--query-text", project.query_text, "Add a mock-embedded query point");
  c_project->add_option("--embed-seed", project.embed_seed, "Mock embedder seed for --query-text")
      ->capture_default_str();
  c_project->add_option("--restarts", project.restarts, "Random starts; the lowest stress wins")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_project->add_option("--max-iter", project.max_iter, "SMACOF iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_project->add_option("--eps", project.eps, "Relative stress decrease threshold")->capture_default_str();
  c_project->add_flag("--trace", project.trace, "Print the per-iteration stress trace to stderr");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Time exact search in original vs reduced space");
  add_embedding_input(c_bench, bench.input, "--emb", "Embedding file");
  bench.reduction.attach(c_bench, true);
  c_bench->add_option("--k", bench.k, "Top-k")->capture_default_str()->check(CLI::PositiveNumber);
  c_bench->add_option("--reps", bench.reps, "Timed repetitions (>= 3)")
      ->capture_default_str()
      ->check(CLI::Range(3, 1000000));
  c_bench->add_option("--queries", bench.queries, "Use the first N stored vectors as queries")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_bench->add_option("--metric", bench.metric, "Distance: l2 or cosine")
      ->capture_default_str()
      ->check(CLI::IsMember({"l2", "cosine"}));
  c_bench->add_flag("--json", bench.as_json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const CLI::App* sub : app.get_subcommands()) failed = sub;
    std::cerr << failed->help();
    return 1;
  }

  try {
    if (*c_synth) return run_synth(synth);
    if (*c_chunk) return run_chunk(chunk);
    if (*c_embed) return run_mock_embed(embed);
    if (*c_transform) return run_transform(transform);
    if (*c_index) return run_index(index);
    if (*c_query) return run_query(query);
    if (*c_compare) return run_compare(compare);
    if (*c_project) return run_project(project);
    if (*c_bench) return run_bench(bench);
  } catch (const IoError& e) {
    log(std::string("error: ") + e.what());
    return 2;
  } catch (const FormatError& e) {
    log(std::string("error: ") + e.what());
    return 2;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return 1;
  }
  return 1;
}
