import numpy as np
import pytest

import specdim


def test_fft_matches_numpy():
    rng = np.random.default_rng(0)
    for n in (1, 7, 96, 153, 768, 1021):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        np.testing.assert_allclose(specdim.fft_forward(x), np.fft.fft(x), atol=1e-9)
        np.testing.assert_allclose(specdim.dft_direct(x), np.fft.fft(x), atol=1e-9)


def test_make_spec_sizes():
    assert specdim.make_spec(768, 5).target_dim == 153
    assert specdim.make_spec(768, 8).target_dim == 96
    with pytest.raises(specdim.ValidationError):
        specdim.make_spec(768, 0.5)


def test_transform_is_truncated_amplitude_spectrum():
    u = np.random.default_rng(1).uniform(-1, 1, 768)
    spec = specdim.make_spec(768, 8)
    out = specdim.transform_embedding(u, spec)
    assert out.shape == (96,)
    np.testing.assert_allclose(out, np.abs(np.fft.fft(u))[:96], atol=1e-9)
    np.testing.assert_array_equal(specdim.SpectralReducer(spec)(u), out)
    with pytest.raises(specdim.DimensionMismatchError):
        specdim.transform_embedding(u[:700], spec)


def test_chunk_and_mock_embed():
    chunks = specdim.chunk_text("a b\nc d", max_tokens=2)
    assert [c.text for c in chunks] == ["a b", "c d"]
    v = specdim.mock_embed("alpha alpha", 768, 1)
    assert v.dtype == np.float32
    np.testing.assert_array_equal(v, specdim.mock_embed("alpha", 768, 1))
    assert abs(np.linalg.norm(v.astype(np.float64)) - 1.0) < 1e-6


def test_index_search_and_persistence(tmp_path):
    rng = np.random.default_rng(2)
    vecs = rng.uniform(-1, 1, (200, 32)).astype(np.float32)
    records = [specdim.EmbeddingRecord(i, f"doc#{i}", vecs[i]) for i in range(200)]
    index = specdim.VectorIndex.build(records, "l2")
    assert len(index) == 200 and index.dim == 32

    q = rng.uniform(-1, 1, 32).astype(np.float32)
    hits = index.search(q, 5).hits
    expected = np.argsort(np.linalg.norm(vecs.astype(np.float64) - q, axis=1), kind="stable")[:5]
    assert [h.id for h in hits] == list(expected)

    path = tmp_path / "db.sdx"
    index.save(path)
    loaded = specdim.VectorIndex.load(path)
    assert [h.id for h in loaded.search(q, 5).hits] == list(expected)

    path.write_bytes(b"XXXX" + path.read_bytes()[4:])
    with pytest.raises(specdim.MagicMismatchError):
        specdim.VectorIndex.load(path)


def test_embedding_file_round_trip(tmp_path):
    records = [specdim.EmbeddingRecord(i, f"k#{i}", np.full(4, i, np.float32), "s") for i in range(3)]
    for name in ("e.bin", "e.jsonl"):
        specdim.write_embeddings(records, tmp_path / name)
        assert specdim.read_embeddings(tmp_path / name) == records


def test_compare_query_on_synthetic_corpus():
    records, docs = specdim.synthetic_corpus(docs_per_topic=5)
    labels = {r.id: label for r, (label, _) in zip(records, docs)}
    dbs = specdim.build_paired_dbs(records, specdim.make_spec(768, 8))
    assert (dbs.original.dim, dbs.reduced.dim) == (768, 96)
    cmp = specdim.compare_query(dbs, records[0].vector, k=4)
    assert cmp.original.hits[0].id == 0 and cmp.reduced.hits[0].id == 0
    assert specdim.topic_purity(cmp.reduced, labels, docs[0][0]) == 1.0
    assert 0.0 <= cmp.recall_at_k <= 1.0


def test_mds_projection():
    pts = np.random.default_rng(3).uniform(-5, 5, (10, 2))
    delta = specdim.pairwise_distances(pts)
    res = specdim.mds_project(delta, seed=1)
    got = specdim.pairwise_distances(res.coordinates)
    assert np.max(np.abs(got - delta)) < 1e-3
    assert all(b <= a for a, b in zip(res.stress_trace, res.stress_trace[1:]))
