#include "specdim/store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <unordered_set>

#include "binary_io.hpp"
#include "specdim/error.hpp"

namespace specdim {

namespace {

constexpr std::string_view kIndexMagic = "SDIM";

// Max-heap ordering on (distance, id): the heap top is the worst kept hit.
struct WorseFirst {
  const std::vector<std::uint64_t>* ids;
  bool operator()(const std::pair<double, std::size_t>& a, const std::pair<double, std::size_t>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return (*ids)[a.second] < (*ids)[b.second];
  }
};

double squared_norm(std::span<const float> v) {
  double acc = 0.0;
  for (float x : v) acc += static_cast<double>(x) * static_cast<double>(x);
  return acc;
}

}  // namespace

std::string_view to_string(IndexKind kind) { return kind == IndexKind::Original ? "original" : "transformed"; }

std::vector<std::uint64_t> QueryResult::ids() const {
  std::vector<std::uint64_t> out;
  out.reserve(hits.size());
  for (const Hit& h : hits) out.push_back(h.id);
  return out;
}

VectorIndex VectorIndex::build(std::vector<EmbeddingRecord> records, Metric metric, IndexKind kind,
                               std::optional<ReductionSpec> reduction) {
  if (records.empty()) throw EmptyInputError("build_index: no records");
  const std::size_t dim = records.front().vector.size();
  if (dim == 0) throw EmptyInputError("build_index: records have zero-length vectors");

  if (kind == IndexKind::Transformed) {
    if (!reduction) throw InvalidSpecError("build_index: a transformed index needs its reduction spec");
    if (reduction->target_dim != dim) {
      throw DimensionMismatchError("build_index: transformed records vs reduction target", reduction->target_dim,
                                   dim);
    }
  } else if (reduction) {
    throw InvalidSpecError("build_index: an original index cannot carry a reduction spec");
  }

  VectorIndex index;
  index.dim_ = dim;
  index.metric_ = metric;
  index.kind_ = kind;
  index.reduction_ = reduction;
  index.ids_.reserve(records.size());
  index.keys_.reserve(records.size());
  index.snippets_.reserve(records.size());
  index.data_.reserve(records.size() * dim);

  std::unordered_set<std::uint64_t> seen;
  for (EmbeddingRecord& r : records) {
    if (r.vector.size() != dim) {
      throw DimensionMismatchError("build_index: record " + std::to_string(r.id), dim, r.vector.size());
    }
    if (!seen.insert(r.id).second) throw DuplicateIdError("build_index: duplicate id " + std::to_string(r.id));
    for (float x : r.vector) {
      if (!std::isfinite(x)) throw NonFiniteError("build_index: record " + std::to_string(r.id) + " is not finite");
    }
    if (metric == Metric::Cosine) {
      const double n2 = squared_norm(r.vector);
      if (n2 == 0.0) throw ZeroVectorError("build_index: record " + std::to_string(r.id) + " is a zero vector");
      index.norms_.push_back(std::sqrt(n2));
    }
    index.ids_.push_back(r.id);
    index.keys_.push_back(std::move(r.doc_key));
    index.snippets_.push_back(std::move(r.snippet));
    index.data_.insert(index.data_.end(), r.vector.begin(), r.vector.end());
  }
  return index;
}

RecordView VectorIndex::record(std::size_t pos) const {
  return {ids_.at(pos), keys_[pos], snippets_[pos], std::span<const float>(data_).subspan(pos * dim_, dim_)};
}

std::optional<std::size_t> VectorIndex::position_of(std::uint64_t id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

void VectorIndex::scan(std::span<const float> query, double query_norm, std::size_t begin, std::size_t end,
                       std::size_t k, std::vector<std::pair<double, std::size_t>>& heap) const {
  const WorseFirst worse{&ids_};
  const float* base = data_.data();
  for (std::size_t pos = begin; pos < end; ++pos) {
    const float* x = base + pos * dim_;
    double dist;
    if (metric_ == Metric::L2) {
      double acc = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) {
        const double diff = static_cast<double>(query[d]) - static_cast<double>(x[d]);
        acc += diff * diff;
      }
      dist = std::sqrt(acc);
    } else {
      double dot = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) dot += static_cast<double>(query[d]) * static_cast<double>(x[d]);
      dist = std::clamp(1.0 - dot / (query_norm * norms_[pos]), 0.0, 2.0);
    }
    const std::pair<double, std::size_t> cand{dist, pos};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), worse);
    } else if (worse(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), worse);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  }
}

QueryResult VectorIndex::search(std::span<const float> query, std::size_t k, unsigned threads) const {
  if (query.size() != dim_) throw DimensionMismatchError("search: query", dim_, query.size());
  if (k == 0) throw ValidationError("search: k must be at least 1");
  for (float x : query) {
    if (!std::isfinite(x)) throw NonFiniteError("search: query is not finite");
  }
  double query_norm = 0.0;
  if (metric_ == Metric::Cosine) {
    query_norm = std::sqrt(squared_norm(query));
    if (query_norm == 0.0) throw ZeroVectorError("search: cosine query is a zero vector");
  }

  const std::size_t n = size();
  const std::size_t keep = std::min(k, n);
  std::vector<std::pair<double, std::size_t>> best;
  best.reserve(keep);

  // Below this many records per worker the thread start-up dominates.
  constexpr std::size_t kMinPerThread = 4096;
  const std::size_t workers = std::clamp<std::size_t>(std::min<std::size_t>(threads, n / kMinPerThread), 1, 64);
  if (workers <= 1) {
    scan(query, query_norm, 0, n, keep, best);
  } else {
    std::vector<std::vector<std::pair<double, std::size_t>>> partial(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] { scan(query, query_norm, begin, end, keep, partial[w]); });
    }
    for (auto& t : pool) t.join();
    for (auto& p : partial) best.insert(best.end(), p.begin(), p.end());
  }

  std::sort(best.begin(), best.end(), WorseFirst{&ids_});
  best.resize(std::min(best.size(), keep));

  QueryResult result;
  result.k = k;
  result.hits.reserve(best.size());
  for (const auto& [dist, pos] : best) result.hits.push_back({ids_[pos], keys_[pos], dist});
  return result;
}

std::vector<std::uint8_t> encode_index(const VectorIndex& index) {
  detail::ByteWriter w;
  w.raw(kIndexMagic);
  w.u16(kIndexFormatVersion);
  w.u8(static_cast<std::uint8_t>(index.kind()));
  w.u8(static_cast<std::uint8_t>(index.metric()));
  w.u32(static_cast<std::uint32_t>(index.dim()));
  w.u64(index.size());
  if (index.kind() == IndexKind::Transformed) {
    w.u32(static_cast<std::uint32_t>(index.reduction()->source_dim));
    w.u32(static_cast<std::uint32_t>(index.reduction()->target_dim));
  }
  for (std::size_t i = 0; i < index.size(); ++i) {
    const RecordView r = index.record(i);
    w.u64(r.id);
    w.short_string(r.doc_key, "doc_key");
    w.short_string(r.snippet, "snippet");
    for (float x : r.vector) w.f32(x);
  }
  w.seal();
  return w.bytes();
}

VectorIndex decode_index(std::span<const std::uint8_t> bytes) {
  detail::check_magic(bytes, kIndexMagic, "index file");
  detail::ByteReader r(bytes);
  r.raw(kIndexMagic.size());
  const std::uint16_t version = r.u16();
  if (version != kIndexFormatVersion) {
    throw VersionMismatchError("index file: unsupported format version " + std::to_string(version));
  }
  const std::uint8_t kind_byte = r.u8();
  const std::uint8_t metric_byte = r.u8();
  if (kind_byte > 1) throw FormatError("index file: unknown kind " + std::to_string(kind_byte));
  if (metric_byte > 1) throw FormatError("index file: unknown metric " + std::to_string(metric_byte));
  const auto kind = static_cast<IndexKind>(kind_byte);
  const auto metric = static_cast<Metric>(metric_byte);
  const std::size_t dim = r.u32();
  const std::uint64_t count = r.u64();

  std::optional<ReductionSpec> reduction;
  if (kind == IndexKind::Transformed) {
    const std::size_t source = r.u32();
    const std::size_t target = r.u32();
    try {
      reduction = make_spec_for_target(source, target);
    } catch (const InvalidSpecError& e) {
      throw FormatError(std::string("index file: ") + e.what());
    }
  }

  // Every record needs at least id + two length prefixes + its floats.
  const std::uint64_t min_record = 12 + 4 * static_cast<std::uint64_t>(dim);
  if (count > r.remaining() / min_record) {
    throw TruncatedFileError("index file: header announces " + std::to_string(count) +
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
  detail::check_crc(bytes, r.position(), "index file");

  try {
    return VectorIndex::build(std::move(records), metric, kind, reduction);
  } catch (const ValidationError& e) {
    throw FormatError(std::string("index file: ") + e.what());
  }
}

void save_index(const VectorIndex& index, const std::filesystem::path& path) {
  detail::write_file(path, encode_index(index));
}

VectorIndex load_index(const std::filesystem::path& path) { return decode_index(detail::read_file(path)); }

unsigned threads_from_env() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("SPECDIM_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 0) return hw;
  if (v == 0) return hw;
  return static_cast<unsigned>(v);
}

}  // namespace specdim
