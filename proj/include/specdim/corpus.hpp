#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specdim/store.hpp"

namespace specdim {

struct ChunkingConfig {
  std::size_t max_tokens = 128;  // whitespace tokens; 384-token model window / 3
  std::string splitter = "\n";
};

struct Chunk {
  std::string doc_key;  // "<source_id>#<ordinal>"
  std::string text;
  std::size_t token_count = 0;
  bool oversized = false;  // a single unit longer than max_tokens, kept whole

  bool operator==(const Chunk&) const = default;
};

std::vector<std::string_view> whitespace_tokens(std::string_view text);

// Splits on config.splitter and greedily packs consecutive units into chunks
// of at most max_tokens tokens. Units with no tokens are dropped; a unit longer
// than max_tokens becomes its own chunk, unsplit, flagged oversized. Chunk
// boundaries only fall on splitter positions.
std::vector<Chunk> chunk_text(std::string_view source, const ChunkingConfig& config,
                              std::string_view source_id = "doc");

// Deterministic model-free embedding: each lowercased whitespace token seeds
// a PRNG that emits a unit-norm Gaussian direction; the result is the
// normalized sum over tokens. Throws EmptyInputError when text has no tokens.
std::vector<float> mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

// Leading part of text, at most max_bytes long, cut on a UTF-8 boundary.
std::string make_snippet(std::string_view text, std::size_t max_bytes = 120);

// Source id part of a "<source>#<ordinal>" doc key (the whole key if there is no '#').
std::string_view doc_key_source(std::string_view doc_key);

enum class EmbeddingFormat { Jsonl, Bin };

// "jsonl" or "bin"; throws ValidationError otherwise.
EmbeddingFormat parse_embedding_format(std::string_view name);
// .jsonl / .json -> Jsonl, anything else -> Bin.
EmbeddingFormat format_from_extension(const std::filesystem::path& path);

inline constexpr std::uint16_t kEmbeddingFormatVersion = 1;

// JSONL: one {"id", "doc_key", "snippet"?, "vector"} object per line; unknown
// fields are ignored. Bin: "SEMB" little-endian container with trailing CRC32.
// Both require every vector to share one dimension.
std::vector<EmbeddingRecord> read_embeddings(const std::filesystem::path& path, EmbeddingFormat format);
void write_embeddings(std::span<const EmbeddingRecord> records, const std::filesystem::path& path,
                      EmbeddingFormat format);

std::vector<EmbeddingRecord> parse_embeddings_jsonl(std::string_view text);
std::string format_embeddings_jsonl(std::span<const EmbeddingRecord> records);
std::vector<EmbeddingRecord> decode_embeddings_bin(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_embeddings_bin(std::span<const EmbeddingRecord> records);

// Chunks JSONL: {"id", "doc_key", "text", "token_count", "oversized"} per line.
void write_chunks(std::span<const Chunk> chunks, const std::filesystem::path& path);
std::vector<Chunk> read_chunks(const std::filesystem::path& path);

}  // namespace specdim
