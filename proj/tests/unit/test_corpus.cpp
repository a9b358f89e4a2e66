#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "specdim/corpus.hpp"
#include "specdim/error.hpp"
#include "specdim/metric.hpp"
#include "specdim/synthetic.hpp"

using namespace specdim;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("specdim_corpus_" + name);
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

double cosine_similarity(const std::vector<float>& a, const std::vector<float>& b) {
  return 1.0 - cosine_distance(std::span<const float>(a), std::span<const float>(b));
}

std::string random_line(std::mt19937_64& rng, std::size_t words) {
  std::uniform_int_distribution<int> letter('a', 'z');
  std::string out;
  for (std::size_t w = 0; w < words; ++w) {
    if (w) out += ' ';
    for (int c = 0; c < 4; ++c) out += static_cast<char>(letter(rng));
  }
  return out;
}

std::vector<EmbeddingRecord> three_records() {
  return {{1, "a#0", {0.1f, -2.5f, 3.0f}, "first"},
          {2, "a#1", {1e-8f, 0.0f, -0.0f}, ""},
          {9, "b#0", {123456.78f, 1.0f / 3.0f, -7.25f}, "caf\xC3\xA9"}};
}

}  // namespace

TEST(Chunking, FitsInOneChunk) {
  const auto chunks = chunk_text("a b\nc d", {4, "\n"});
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].text, "a b\nc d");
  EXPECT_EQ(chunks[0].token_count, 4u);
  EXPECT_FALSE(chunks[0].oversized);
  EXPECT_EQ(chunks[0].doc_key, "doc#0");
}

TEST(Chunking, SplitsAtTheSplitter) {
  const auto chunks = chunk_text("a b\nc d", {2, "\n"}, "src");
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].text, "a b");
  EXPECT_EQ(chunks[1].text, "c d");
  EXPECT_EQ(chunks[1].doc_key, "src#1");
}

TEST(Chunking, OversizedUnitKeptWhole) {
  const auto chunks = chunk_text("a\nb c d e\nf", {2, "\n"});
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[1].text, "b c d e");
  EXPECT_TRUE(chunks[1].oversized);
  EXPECT_EQ(chunks[1].token_count, 4u);
  EXPECT_FALSE(chunks[0].oversized);
  EXPECT_FALSE(chunks[2].oversized);
}

TEST(Chunking, BlankUnitsDroppedAndBadConfigRejected) {
  EXPECT_TRUE(chunk_text("\n \n\t\n", {4, "\n"}).empty());
  EXPECT_THROW(chunk_text("a", {0, "\n"}), ValidationError);
}

TEST(Chunking, BoundariesOnlyAtSplitterPositions) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> words(1, 60);
  for (int doc = 0; doc < 20; ++doc) {
    std::vector<std::string> lines;
    std::string source;
    for (int i = 0; i < 10; ++i) {
      lines.push_back(random_line(rng, doc == 3 && i == 4 ? 200 : words(rng)));
      if (i) source += '\n';
      source += lines.back();
    }
    const auto chunks = chunk_text(source, {128, "\n"});
    // Re-joining the chunks with the splitter must give back the source,
    // which means every cut fell on a "\n".
    std::string joined;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      if (i) joined += '\n';
      joined += chunks[i].text;
      EXPECT_EQ(chunks[i].token_count, whitespace_tokens(chunks[i].text).size());
      if (!chunks[i].oversized) EXPECT_LE(chunks[i].token_count, 128u);
      if (chunks[i].oversized) EXPECT_EQ(chunks[i].text.find('\n'), std::string::npos);
    }
    EXPECT_EQ(joined, source);
  }
}

TEST(Chunking, MultiCharacterSplitter) {
  const auto chunks = chunk_text("one two\n\nthree\n\nfour five", {3, "\n\n"});
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].text, "one two\n\nthree");
  EXPECT_EQ(chunks[1].text, "four five");
}

TEST(MockEmbed, DuplicateTokensCollapse) {
  EXPECT_EQ(mock_embed("alpha alpha", 768, 1), mock_embed("alpha", 768, 1));
  EXPECT_EQ(mock_embed("Alpha", 16, 1), mock_embed("alpha", 16, 1));
}

TEST(MockEmbed, BitIdenticalAcrossCalls) {
  const auto a = mock_embed("the quick brown fox", 768, 5);
  const auto b = mock_embed("the quick brown fox", 768, 5);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(float)), 0);
  EXPECT_NE(mock_embed("the quick brown fox", 768, 6), a);
}

TEST(MockEmbed, UnitNorm) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto v = mock_embed(random_line(rng, 1 + t), 768, 42);
    double n2 = 0.0;
    for (float x : v) n2 += static_cast<double>(x) * x;
    EXPECT_NEAR(std::sqrt(n2), 1.0, 1e-6);
  }
}

TEST(MockEmbed, DisjointVocabulariesNearlyOrthogonal) {
  std::mt19937_64 rng(2024);
  double total = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    // Upper-case prefixes keep the two word pools disjoint after lowercasing.
    const auto a = mock_embed("x" + random_line(rng, 20), 768, 7);
    std::string other = random_line(rng, 20);
    for (char& c : other) if (c != ' ') c = static_cast<char>('A' + (c - 'a'));
    const auto b = mock_embed("y" + other, 768, 7);
    total += std::fabs(cosine_similarity(a, b));
  }
  EXPECT_LT(total / 100.0, 0.15);
}

TEST(MockEmbed, TwoTopicSeparability) {
  const auto docs = make_topic_documents(standard_corpus_config());
  const auto recs = embed_documents(docs, 768, 42);
  double intra = 0.0, inter = 0.0;
  std::size_t n_intra = 0, n_inter = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    for (std::size_t j = i + 1; j < recs.size(); ++j) {
      const double s = cosine_similarity(recs[i].vector, recs[j].vector);
      if (docs[i].label == docs[j].label) {
        intra += s;
        ++n_intra;
      } else {
        inter += s;
        ++n_inter;
      }
    }
  }
  EXPECT_GE(intra / n_intra - inter / n_inter, 0.3);
}

TEST(MockEmbed, Errors) {
  EXPECT_THROW(mock_embed("  \n ", 8, 1), EmptyInputError);
  EXPECT_THROW(mock_embed("a", 0, 1), ValidationError);
}

TEST(Snippet, Utf8SafeTruncation) {
  EXPECT_EQ(make_snippet("short"), "short");
  const std::string s = "ab\xC3\xA9";  // 4 bytes, last char is 2 bytes
  EXPECT_EQ(make_snippet(s, 3), "ab");
  EXPECT_EQ(doc_key_source("report.txt#12"), "report.txt");
  EXPECT_EQ(doc_key_source("plain"), "plain");
}

TEST(EmbeddingFiles, BinRoundTrip) {
  const auto recs = three_records();
  const auto path = temp_path("three.bin");
  write_embeddings(recs, path, EmbeddingFormat::Bin);
  EXPECT_EQ(read_embeddings(path, EmbeddingFormat::Bin), recs);
  const auto again = temp_path("three_again.bin");
  write_embeddings(read_embeddings(path, EmbeddingFormat::Bin), again, EmbeddingFormat::Bin);
  EXPECT_EQ(slurp(path), slurp(again));
  std::filesystem::remove(path);
  std::filesystem::remove(again);
}

TEST(EmbeddingFiles, JsonlRoundTripIsExact) {
  const auto recs = three_records();
  const auto text = format_embeddings_jsonl(recs);
  EXPECT_EQ(parse_embeddings_jsonl(text), recs);
  EXPECT_EQ(format_embeddings_jsonl(parse_embeddings_jsonl(text)), text);
}

TEST(EmbeddingFiles, JsonlIgnoresUnknownFieldsAndOptionalSnippet) {
  const auto recs = parse_embeddings_jsonl(
      "{\"id\": 4, \"doc_key\": \"k#0\", \"vector\": [1, 2.5], \"model\": \"x\"}\n\n");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].id, 4u);
  EXPECT_EQ(recs[0].snippet, "");
  EXPECT_EQ(recs[0].vector, (std::vector<float>{1.0f, 2.5f}));
}

TEST(EmbeddingFiles, MissingVectorNamesLine) {
  const std::string text =
      "{\"id\": 1, \"doc_key\": \"a\", \"vector\": [1, 2]}\n"
      "{\"id\": 2, \"doc_key\": \"b\"}\n";
  try {
    parse_embeddings_jsonl(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("vector"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
}

TEST(EmbeddingFiles, MixedLengthsNameBothLengths) {
  const std::string text =
      "{\"id\": 1, \"doc_key\": \"a\", \"vector\": [1, 2, 3]}\n"
      "{\"id\": 2, \"doc_key\": \"b\", \"vector\": [1, 2, 3, 4, 5]}\n";
  try {
    parse_embeddings_jsonl(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(msg.find('3'), std::string::npos);
    EXPECT_NE(msg.find('5'), std::string::npos);
  }
}

TEST(EmbeddingFiles, BinCorruptionErrors) {
  const auto bytes = encode_embeddings_bin(three_records());
  auto bad_magic = bytes;
  bad_magic[1] = '?';
  EXPECT_THROW(decode_embeddings_bin(bad_magic), MagicMismatchError);
  const std::vector<std::uint8_t> truncated(bytes.begin(), bytes.end() - 7);
  EXPECT_THROW(decode_embeddings_bin(truncated), TruncatedFileError);
  auto flipped = bytes;
  flipped[bytes.size() - 5] ^= 0x01;
  EXPECT_THROW(decode_embeddings_bin(flipped), ChecksumError);
  EXPECT_THROW(read_embeddings(temp_path("missing.bin"), EmbeddingFormat::Bin), IoError);
}

TEST(EmbeddingFiles, EmptyFileIsValid) {
  const std::vector<EmbeddingRecord> none;
  EXPECT_TRUE(decode_embeddings_bin(encode_embeddings_bin(none)).empty());
  EXPECT_TRUE(parse_embeddings_jsonl("").empty());
}

TEST(EmbeddingFiles, FormatSelection) {
  EXPECT_EQ(format_from_extension("x.jsonl"), EmbeddingFormat::Jsonl);
  EXPECT_EQ(format_from_extension("x.bin"), EmbeddingFormat::Bin);
  EXPECT_EQ(parse_embedding_format("bin"), EmbeddingFormat::Bin);
  EXPECT_THROW(parse_embedding_format("csv"), ValidationError);
}

TEST(ChunkFiles, RoundTrip) {
  const auto chunks = chunk_text("alpha beta\ngamma \"quoted\"\ndelta", {2, "\n"}, "notes.txt");
  const auto path = temp_path("chunks.jsonl");
  write_chunks(chunks, path);
  EXPECT_EQ(read_chunks(path), chunks);
  std::filesystem::remove(path);
}
