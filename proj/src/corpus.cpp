#include "specdim/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "specdim/error.hpp"

namespace specdim {

namespace {

using json = nlohmann::json;

constexpr std::string_view kEmbeddingMagic = "SEMB";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split(std::string_view source, std::string_view splitter) {
  std::vector<std::string_view> units;
  if (splitter.empty()) {
    units.push_back(source);
    return units;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t at = source.find(splitter, start);
    if (at == std::string_view::npos) {
      units.push_back(source.substr(start));
      return units;
    }
    units.push_back(source.substr(start, at - start));
    start = at + splitter.size();
  }
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t token_hash(std::string_view token, std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  std::uint64_t s = seed;
  return h ^ splitmix64(s);
}

// Unit-norm pseudo-Gaussian direction seeded by one token.
std::vector<double> token_direction(std::uint64_t seed, std::size_t dim) {
  std::vector<double> v(dim);
  std::uint64_t state = seed;
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  for (std::size_t i = 0; i < dim; i += 2) {
    // Box-Muller; u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(splitmix64(state) >> 11) + 1.0) * kScale;
    const double u2 = static_cast<double>(splitmix64(state) >> 11) * kScale;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    v[i] = r * std::cos(theta);
    if (i + 1 < dim) v[i + 1] = r * std::sin(theta);
  }
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  const double norm = std::sqrt(n2);
  for (double& x : v) x /= norm;
  return v;
}

// Shortest decimal that reads back as the same float, held as a double so the
// JSON writer emits it without f32 -> f64 widening noise.
double f32_for_json(float x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  double d = 0.0;
  std::from_chars(buf, res.ptr, d);
  return d;
}

json record_to_json(const EmbeddingRecord& r) {
  json j;
  j["id"] = r.id;
  j["doc_key"] = r.doc_key;
  if (!r.snippet.empty()) j["snippet"] = r.snippet;
  json vec = json::array();
  for (float x : r.vector) vec.push_back(f32_for_json(x));
  j["vector"] = std::move(vec);
  return j;
}

void require_uniform_dim(std::span<const EmbeddingRecord> records, const char* what) {
  if (records.empty()) return;
  const std::size_t dim = records.front().vector.size();
  for (const auto& r : records) {
    if (r.vector.size() != dim) {
      throw DimensionMismatchError(std::string(what) + ": record " + std::to_string(r.id), dim, r.vector.size());
    }
  }
}

std::string read_text(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  detail::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Calls fn(line_number, line) for every non-blank line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (std::any_of(line.begin(), line.end(), [](char c) { return !is_space(c); })) fn(line_no, line);
    start = end + 1;
  }
}

}  // namespace

std::vector<std::string_view> whitespace_tokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

std::vector<Chunk> chunk_text(std::string_view source, const ChunkingConfig& config, std::string_view source_id) {
  if (config.max_tokens == 0) throw ValidationError("chunk_text: max_tokens must be at least 1");

  std::vector<Chunk> chunks;
  std::string current;
  std::size_t current_tokens = 0;

  auto emit = [&](std::string text, std::size_t tokens, bool oversized) {
    chunks.push_back({std::string(source_id) + "#" + std::to_string(chunks.size()), std::move(text), tokens,
                      oversized});
  };
  auto flush = [&] {
    if (current_tokens == 0) return;
    emit(std::move(current), current_tokens, false);
    current.clear();
    current_tokens = 0;
  };

  for (std::string_view unit : split(source, config.splitter)) {
    const std::size_t tokens = whitespace_tokens(unit).size();
    if (tokens == 0) continue;
    if (tokens > config.max_tokens) {
      flush();
      emit(std::string(unit), tokens, true);
      continue;
    }
    if (current_tokens + tokens > config.max_tokens) flush();
    if (current_tokens > 0) current += config.splitter;
    current += unit;
    current_tokens += tokens;
  }
  flush();
  return chunks;
}

std::vector<float> mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ValidationError("mock_embed: dim must be at least 1");
  const auto tokens = whitespace_tokens(text);
  if (tokens.empty()) throw EmptyInputError("mock_embed: text has no tokens");

  std::unordered_map<std::string, std::vector<double>> directions;
  std::vector<double> sum(dim, 0.0);
  for (std::string_view tok : tokens) {
    std::string lower(tok);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto it = directions.find(lower);
    if (it == directions.end()) {
      it = directions.emplace(lower, token_direction(token_hash(lower, seed), dim)).first;
    }
    for (std::size_t i = 0; i < dim; ++i) sum[i] += it->second[i];
  }

  double n2 = 0.0;
  for (double x : sum) n2 += x * x;
  if (n2 == 0.0) throw ZeroVectorError("mock_embed: token directions cancelled out");
  const double norm = std::sqrt(n2);
  std::vector<float> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = static_cast<float>(sum[i] / norm);
  return out;
}

std::string make_snippet(std::string_view text, std::size_t max_bytes) {
  if (text.size() <= max_bytes) return std::string(text);
  std::size_t cut = max_bytes;
  // Step back over UTF-8 continuation bytes (10xxxxxx).
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return std::string(text.substr(0, cut));
}

std::string_view doc_key_source(std::string_view doc_key) {
  const std::size_t at = doc_key.rfind('#');
  return at == std::string_view::npos ? doc_key : doc_key.substr(0, at);
}

EmbeddingFormat parse_embedding_format(std::string_view name) {
  if (name == "jsonl") return EmbeddingFormat::Jsonl;
  if (name == "bin") return EmbeddingFormat::Bin;
  throw ValidationError("unknown embedding format '" + std::string(name) + "' (expected jsonl or bin)");
}

EmbeddingFormat format_from_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".json") ? EmbeddingFormat::Jsonl : EmbeddingFormat::Bin;
}

std::vector<EmbeddingRecord> parse_embeddings_jsonl(std::string_view text) {
  std::vector<EmbeddingRecord> records;
  std::size_t dim_line = 0;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");
    for (const char* field : {"id", "doc_key", "vector"}) {
      if (!j.contains(field)) throw ParseError(line_no, std::string("missing \"") + field + "\" field");
    }
    EmbeddingRecord r;
    if (!j["id"].is_number_unsigned() && !(j["id"].is_number_integer() && j["id"].get<std::int64_t>() >= 0)) {
      throw ParseError(line_no, "\"id\" must be a non-negative integer");
    }
    r.id = j["id"].get<std::uint64_t>();
    if (!j["doc_key"].is_string()) throw ParseError(line_no, "\"doc_key\" must be a string");
    r.doc_key = j["doc_key"].get<std::string>();
    if (j.contains("snippet") && !j["snippet"].is_null()) {
      if (!j["snippet"].is_string()) throw ParseError(line_no, "\"snippet\" must be a string");
      r.snippet = j["snippet"].get<std::string>();
    }
    const json& vec = j["vector"];
    if (!vec.is_array()) throw ParseError(line_no, "\"vector\" must be an array of numbers");
    r.vector.reserve(vec.size());
    for (const json& x : vec) {
      if (!x.is_number()) throw ParseError(line_no, "\"vector\" must be an array of numbers");
      r.vector.push_back(static_cast<float>(x.get<double>()));
    }
    if (!records.empty() && r.vector.size() != records.front().vector.size()) {
      throw ParseError(line_no, "inconsistent vector dimension: " + std::to_string(r.vector.size()) +
                                    " here vs " + std::to_string(records.front().vector.size()) +
                                    " on line " + std::to_string(dim_line));
    }
    if (records.empty()) dim_line = line_no;
    records.push_back(std::move(r));
  });
  return records;
}

std::string format_embeddings_jsonl(std::span<const EmbeddingRecord> records) {
  require_uniform_dim(records, "write_embeddings");
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<std::uint8_t> encode_embeddings_bin(std::span<const EmbeddingRecord> records) {
  require_uniform_dim(records, "write_embeddings");
  const std::size_t dim = records.empty() ? 0 : records.front().vector.size();
  detail::ByteWriter w;
  w.raw(kEmbeddingMagic);
  w.u16(kEmbeddingFormatVersion);
  w.u32(static_cast<std::uint32_t>(dim));
  w.u64(records.size());
  for (const auto& r : records) {
    w.u64(r.id);
    w.short_string(r.doc_key, "doc_key");
    w.short_string(r.snippet, "snippet");
    for (float x : r.vector) w.f32(x);
  }
  w.seal();
  return w.bytes();
}

std::vector<EmbeddingRecord> decode_embeddings_bin(std::span<const std::uint8_t> bytes) {
  detail::check_magic(bytes, kEmbeddingMagic, "embedding file");
  detail::ByteReader r(bytes);
  r.raw(kEmbeddingMagic.size());
  const std::uint16_t version = r.u16();
  if (version != kEmbeddingFormatVersion) {
    throw VersionMismatchError("embedding file: unsupported format version " + std::to_string(version));
  }
  const std::size_t dim = r.u32();
  const std::uint64_t count = r.u64();
  const std::uint64_t min_record = 12 + 4 * static_cast<std::uint64_t>(dim);
  if (count > r.remaining() / min_record) {
    throw TruncatedFileError("embedding file: header announces " + std::to_string(count) +
                             " records but the file is too short");
  }
  std::vector<EmbeddingRecord> records(count);
  for (auto& rec : records) {
    rec.id = r.u64();
    rec.doc_key = r.short_string();
    rec.snippet = r.short_string();
    rec.vector.resize(dim);
    for (float& x : rec.vector) x = r.f32();
  }
  detail::check_crc(bytes, r.position(), "embedding file");
  return records;
}

std::vector<EmbeddingRecord> read_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  if (format == EmbeddingFormat::Jsonl) return parse_embeddings_jsonl(read_text(path));
  return decode_embeddings_bin(detail::read_file(path));
}

void write_embeddings(std::span<const EmbeddingRecord> records, const std::filesystem::path& path,
                      EmbeddingFormat format) {
  if (format == EmbeddingFormat::Jsonl) {
    write_text(path, format_embeddings_jsonl(records));
  } else {
    detail::write_file(path, encode_embeddings_bin(records));
  }
}

void write_chunks(std::span<const Chunk> chunks, const std::filesystem::path& path) {
  std::string out;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const Chunk& c = chunks[i];
    json j{{"id", i}, {"doc_key", c.doc_key}, {"text", c.text}, {"token_count", c.token_count},
           {"oversized", c.oversized}};
    out += j.dump();
    out += '\n';
  }
  write_text(path, out);
}

std::vector<Chunk> read_chunks(const std::filesystem::path& path) {
  std::vector<Chunk> chunks;
  const std::string text = read_text(path);
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
      throw ParseError(line_no, "expected an object with a string \"text\" field");
    }
    Chunk c;
    c.text = j["text"].get<std::string>();
    c.token_count = whitespace_tokens(c.text).size();
    if (c.token_count == 0) throw ParseError(line_no, "chunk text has no tokens");
    if (j.contains("doc_key") && j["doc_key"].is_string()) {
      c.doc_key = j["doc_key"].get<std::string>();
    } else {
      c.doc_key = "chunk#" + std::to_string(chunks.size());
    }
    c.oversized = j.value("oversized", false);
    chunks.push_back(std::move(c));
  });
  return chunks;
}

}  // namespace specdim
