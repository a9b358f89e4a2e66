#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specdim/metric.hpp"
#include "specdim/reducer.hpp"

namespace specdim {

struct EmbeddingRecord {
  std::uint64_t id = 0;
  std::string doc_key;
  std::vector<float> vector;
  std::string snippet;  // empty when absent

  bool operator==(const EmbeddingRecord&) const = default;
};

enum class IndexKind : std::uint8_t { Original = 0, Transformed = 1 };

std::string_view to_string(IndexKind kind);

struct Hit {
  std::uint64_t id = 0;
  std::string doc_key;
  double distance = 0.0;

  bool operator==(const Hit&) const = default;
};

// Hits ascending by distance, ties broken by ascending id.
struct QueryResult {
  std::vector<Hit> hits;
  std::size_t k = 0;

  std::vector<std::uint64_t> ids() const;
};

struct RecordView {
  std::uint64_t id;
  std::string_view doc_key;
  std::string_view snippet;
  std::span<const float> vector;
};

// Immutable flat index with exact top-k search. Vectors are stored in single
// precision; distances accumulate in double. Concurrent searches are safe.
class VectorIndex {
 public:
  // Throws EmptyInputError, DimensionMismatchError, DuplicateIdError,
  // NonFiniteError, ZeroVectorError (cosine only) or InvalidSpecError when a
  // Transformed index has no matching reduction (or an Original one has one).
  static VectorIndex build(std::vector<EmbeddingRecord> records, Metric metric,
                           IndexKind kind = IndexKind::Original,
                           std::optional<ReductionSpec> reduction = std::nullopt);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  Metric metric() const { return metric_; }
  IndexKind kind() const { return kind_; }
  const std::optional<ReductionSpec>& reduction() const { return reduction_; }

  RecordView record(std::size_t pos) const;
  std::optional<std::size_t> position_of(std::uint64_t id) const;

  // Exact top-k. `threads` > 1 splits the scan into contiguous ranges whose
  // partial results are merged; the outcome is identical to a serial scan.
  QueryResult search(std::span<const float> query, std::size_t k, unsigned threads = 1) const;

  // Raw float payload (size() * dim() values, record-major).
  std::span<const float> payload() const { return data_; }

 private:
  VectorIndex() = default;

  void scan(std::span<const float> query, double query_norm, std::size_t begin, std::size_t end,
            std::size_t k, std::vector<std::pair<double, std::size_t>>& heap) const;

  std::size_t dim_ = 0;
  Metric metric_ = Metric::L2;
  IndexKind kind_ = IndexKind::Original;
  std::optional<ReductionSpec> reduction_;
  std::vector<std::uint64_t> ids_;
  std::vector<std::string> keys_;
  std::vector<std::string> snippets_;
  std::vector<float> data_;
  std::vector<double> norms_;  // Euclidean norms, cosine metric only
};

inline constexpr std::uint16_t kIndexFormatVersion = 1;

void save_index(const VectorIndex& index, const std::filesystem::path& path);
VectorIndex load_index(const std::filesystem::path& path);

// Byte-level encoding used by save_index/load_index.
std::vector<std::uint8_t> encode_index(const VectorIndex& index);
VectorIndex decode_index(std::span<const std::uint8_t> bytes);

// Thread cap from SPECDIM_THREADS: unset or 0 means hardware concurrency.
unsigned threads_from_env();

}  // namespace specdim
