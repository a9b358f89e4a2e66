#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <span>

#include "specdim/corpus.hpp"
#include "specdim/error.hpp"
#include "specdim/evalcmp.hpp"
#include "specdim/mds.hpp"
#include "specdim/reducer.hpp"
#include "specdim/spectral.hpp"
#include "specdim/store.hpp"
#include "specdim/synthetic.hpp"

namespace py = pybind11;
using namespace specdim;

namespace {

template <typename T>
using Array = py::array_t<T, py::array::c_style | py::array::forcecast>;

template <typename T>
std::span<const T> as_span(const Array<T>& a) {
  if (a.ndim() != 1) throw LengthError("expected a 1-D array, got " + std::to_string(a.ndim()) + " dimensions");
  return {a.data(), static_cast<std::size_t>(a.shape(0))};
}

template <typename T>
py::array_t<T> to_numpy(const std::vector<T>& v) {
  return py::array_t<T>(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())}, v.data());
}

std::vector<float> to_floats(const Array<float>& a) {
  const auto s = as_span(a);
  return {s.begin(), s.end()};
}

DistanceMatrix matrix_from_numpy(const Array<double>& m) {
  if (m.ndim() != 2 || m.shape(0) != m.shape(1)) throw ValidationError("expected a square 2-D distance matrix");
  const auto n = static_cast<std::size_t>(m.shape(0));
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = m.at(i, j);
  return DistanceMatrix::from_rows(rows);
}

py::array_t<double> matrix_to_numpy(const DistanceMatrix& d) {
  const auto n = static_cast<py::ssize_t>(d.size());
  py::array_t<double> out({n, n});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t j = 0; j < n; ++j) view(i, j) = d(i, j);
  return out;
}

std::vector<std::vector<double>> rows_of(const Array<double>& m) {
  if (m.ndim() != 2) throw LengthError("expected a 2-D array of row vectors");
  std::vector<std::vector<double>> rows(m.shape(0), std::vector<double>(m.shape(1)));
  for (py::ssize_t i = 0; i < m.shape(0); ++i)
    for (py::ssize_t j = 0; j < m.shape(1); ++j) rows[i][j] = m.at(i, j);
  return rows;
}

}  // namespace

PYBIND11_MODULE(_specdim, m) {
  m.doc() = "FFT amplitude-spectrum reduction of embeddings, exact vector search and evaluation helpers";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<DimensionMismatchError>(m, "DimensionMismatchError", validation.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());
  auto format = py::register_exception<FormatError>(m, "FormatError", error.ptr());
  py::register_exception<MagicMismatchError>(m, "MagicMismatchError", format.ptr());
  py::register_exception<TruncatedFileError>(m, "TruncatedFileError", format.ptr());
  py::register_exception<ChecksumError>(m, "ChecksumError", format.ptr());
  py::register_exception<ParseError>(m, "ParseError", format.ptr());

  // Spectral primitives.
  m.def("fft_forward", [](const Array<std::complex<double>>& x) { return to_numpy(fft_forward(as_span(x))); },
        py::arg("x"), "Forward DFT via mixed-radix FFT (Bluestein for large prime factors).");
  m.def("dft_direct", [](const Array<std::complex<double>>& x) { return to_numpy(dft_direct(as_span(x))); },
        py::arg("x"), "Direct O(n^2) DFT, the reference for fft_forward.");
  m.def("amplitude_spectrum",
        [](const Array<std::complex<double>>& x) { return to_numpy(amplitude_spectrum(as_span(x))); },
        py::arg("spectrum"));

  py::class_<ReductionSpec>(m, "ReductionSpec")
      .def_readonly("source_dim", &ReductionSpec::source_dim)
      .def_readonly("target_dim", &ReductionSpec::target_dim)
      .def_readonly("factor", &ReductionSpec::factor)
      .def_property_readonly("ratio", &ReductionSpec::ratio)
      .def(py::self == py::self)
      .def("__repr__", [](const ReductionSpec& s) {
        return "ReductionSpec(" + std::to_string(s.source_dim) + " -> " + std::to_string(s.target_dim) + ")";
      });
  m.def("make_spec", &make_spec, py::arg("source_dim"), py::arg("factor"));
  m.def("make_spec_for_target", &make_spec_for_target, py::arg("source_dim"), py::arg("target_dim"));
  m.def(
      "transform_embedding",
      [](const Array<double>& u, const ReductionSpec& spec) {
        return to_numpy(transform_embedding(as_span(u), spec).amplitudes);
      },
      py::arg("embedding"), py::arg("spec"), "First target_dim FFT amplitudes of the embedding.");

  py::class_<SpectralReducer>(m, "SpectralReducer")
      .def(py::init<ReductionSpec>(), py::arg("spec"))
      .def_property_readonly("spec", &SpectralReducer::spec)
      .def("__call__", [](const SpectralReducer& r, const Array<double>& u) {
        return to_numpy(r(as_span(u)).amplitudes);
      });

  // Corpus preparation.
  py::class_<Chunk>(m, "Chunk")
      .def_readonly("doc_key", &Chunk::doc_key)
      .def_readonly("text", &Chunk::text)
      .def_readonly("token_count", &Chunk::token_count)
      .def_readonly("oversized", &Chunk::oversized);
  m.def(
      "chunk_text",
      [](const std::string& text, std::size_t max_tokens, const std::string& splitter, const std::string& source_id) {
        return chunk_text(text, ChunkingConfig{max_tokens, splitter}, source_id);
      },
      py::arg("text"), py::arg("max_tokens") = 128, py::arg("splitter") = "\n", py::arg("source_id") = "doc");
  m.def(
      "mock_embed",
      [](const std::string& text, std::size_t dim, std::uint64_t seed) { return to_numpy(mock_embed(text, dim, seed)); },
      py::arg("text"), py::arg("dim") = 768, py::arg("seed") = 42);

  py::class_<EmbeddingRecord>(m, "EmbeddingRecord")
      .def(py::init([](std::uint64_t id, std::string doc_key, const Array<float>& vector, std::string snippet) {
             return EmbeddingRecord{id, std::move(doc_key), to_floats(vector), std::move(snippet)};
           }),
           py::arg("id"), py::arg("doc_key"), py::arg("vector"), py::arg("snippet") = "")
      .def_readonly("id", &EmbeddingRecord::id)
      .def_readonly("doc_key", &EmbeddingRecord::doc_key)
      .def_readonly("snippet", &EmbeddingRecord::snippet)
      .def_property_readonly("vector", [](const EmbeddingRecord& r) { return to_numpy(r.vector); })
      .def(py::self == py::self);
  m.def(
      "read_embeddings",
      [](const std::filesystem::path& path, const std::string& format) {
        return read_embeddings(path, format.empty() ? format_from_extension(path) : parse_embedding_format(format));
      },
      py::arg("path"), py::arg("format") = "");
  m.def(
      "write_embeddings",
      [](const std::vector<EmbeddingRecord>& records, const std::filesystem::path& path, const std::string& format) {
        write_embeddings(records, path, format.empty() ? format_from_extension(path) : parse_embedding_format(format));
      },
      py::arg("records"), py::arg("path"), py::arg("format") = "");

  // Exact search.
  py::class_<Hit>(m, "Hit")
      .def_readonly("id", &Hit::id)
      .def_readonly("doc_key", &Hit::doc_key)
      .def_readonly("distance", &Hit::distance)
      .def("__repr__", [](const Hit& h) {
        return "Hit(id=" + std::to_string(h.id) + ", doc_key='" + h.doc_key + "', distance=" +
               std::to_string(h.distance) + ")";
      });
  py::class_<QueryResult>(m, "QueryResult")
      .def_readonly("hits", &QueryResult::hits)
      .def_readonly("k", &QueryResult::k)
      .def("ids", &QueryResult::ids);

  py::class_<VectorIndex>(m, "VectorIndex")
      .def_static(
          "build",
          [](std::vector<EmbeddingRecord> records, const std::string& metric) {
            return VectorIndex::build(std::move(records), parse_metric(metric));
          },
          py::arg("records"), py::arg("metric") = "l2")
      .def_static("load", &load_index, py::arg("path"))
      .def("save", [](const VectorIndex& idx, const std::filesystem::path& p) { save_index(idx, p); }, py::arg("path"))
      .def_property_readonly("dim", &VectorIndex::dim)
      .def_property_readonly("metric", [](const VectorIndex& idx) { return std::string(to_string(idx.metric())); })
      .def_property_readonly("kind", [](const VectorIndex& idx) { return std::string(to_string(idx.kind())); })
      .def_property_readonly("reduction", &VectorIndex::reduction)
      .def("__len__", &VectorIndex::size)
      .def(
          "search",
          [](const VectorIndex& idx, const Array<float>& query, std::size_t k) { return idx.search(as_span(query), k); },
          py::arg("query"), py::arg("k") = 4);

  // Evaluation.
  py::class_<PairedIndexes>(m, "PairedIndexes")
      .def_readonly("original", &PairedIndexes::original)
      .def_readonly("reduced", &PairedIndexes::reduced)
      .def_property_readonly("spec", &PairedIndexes::spec);
  m.def(
      "build_paired_dbs",
      [](const std::vector<EmbeddingRecord>& records, const ReductionSpec& spec, const std::string& metric) {
        return build_paired_dbs(records, spec, parse_metric(metric));
      },
      py::arg("records"), py::arg("spec"), py::arg("metric") = "l2");

  py::class_<RetrievalComparison>(m, "RetrievalComparison")
      .def_readonly("query_key", &RetrievalComparison::query_key)
      .def_readonly("k", &RetrievalComparison::k)
      .def_readonly("original", &RetrievalComparison::original)
      .def_readonly("reduced", &RetrievalComparison::reduced)
      .def_readonly("recall_at_k", &RetrievalComparison::recall_at_k)
      .def_readonly("rank_correlation", &RetrievalComparison::rank_correlation)
      .def_readonly("factor", &RetrievalComparison::factor)
      .def_readonly("dims", &RetrievalComparison::dims);
  m.def(
      "compare_query",
      [](const PairedIndexes& dbs, const Array<float>& query, std::size_t k, std::string key) {
        return compare_query(dbs, as_span(query), k, std::move(key));
      },
      py::arg("dbs"), py::arg("query"), py::arg("k") = 4, py::arg("query_key") = "query");
  m.def("recall_at_k", &recall_at_k, py::arg("reference"), py::arg("candidate"), py::arg("k"));
  m.def("rank_correlation", &rank_correlation, py::arg("a"), py::arg("b"), py::arg("k"));
  m.def(
      "topic_purity",
      [](const QueryResult& result, const std::map<std::uint64_t, std::string>& labels, const std::string& topic) {
        return topic_purity(result, labels, topic).purity_at_k;
      },
      py::arg("result"), py::arg("labels"), py::arg("query_topic"));

  // Projection.
  py::class_<MdsResult>(m, "MdsResult")
      .def_property_readonly("coordinates",
                             [](const MdsResult& r) {
                               py::array_t<double> out({static_cast<py::ssize_t>(r.coordinates.size()), py::ssize_t{2}});
                               auto view = out.mutable_unchecked<2>();
                               for (std::size_t i = 0; i < r.coordinates.size(); ++i) {
                                 view(i, 0) = r.coordinates[i][0];
                                 view(i, 1) = r.coordinates[i][1];
                               }
                               return out;
                             })
      .def_readonly("stress", &MdsResult::stress)
      .def_readonly("iterations", &MdsResult::iterations)
      .def_readonly("converged", &MdsResult::converged)
      .def_readonly("stress_trace", &MdsResult::stress_trace);
  m.def(
      "mds_project",
      [](const Array<double>& delta, std::uint64_t seed, std::size_t max_iter, double eps, std::size_t restarts) {
        return mds_project(matrix_from_numpy(delta), MdsOptions{seed, max_iter, eps, restarts});
      },
      py::arg("delta"), py::arg("seed") = 0, py::arg("max_iter") = 300, py::arg("eps") = 1e-6,
      py::arg("restarts") = 1);
  m.def(
      "pairwise_distances",
      [](const Array<double>& vectors, const std::string& metric) {
        return matrix_to_numpy(pairwise_distances(rows_of(vectors), parse_metric(metric)));
      },
      py::arg("vectors"), py::arg("metric") = "l2");

  // Synthetic corpus.
  m.def(
      "synthetic_corpus",
      [](std::size_t docs_per_topic, std::uint64_t seed) {
        auto config = standard_corpus_config();
        config.docs_per_topic = docs_per_topic;
        config.seed = seed;
        const auto docs = make_topic_documents(config);
        std::vector<std::pair<std::string, std::string>> labelled;
        for (const auto& d : docs) labelled.emplace_back(d.label, d.text);
        return std::make_pair(embed_documents(docs, config.dim, config.seed), labelled);
      },
      py::arg("docs_per_topic") = 50, py::arg("seed") = 42,
      "Two-topic mock-embedded corpus: (records, [(label, text), ...]).");
}
