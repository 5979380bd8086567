import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fuzzyent.embeddings import EmbeddingStore, cosine, load_embeddings, save_embeddings
from fuzzyent.errors import DegenerateVectorError, LoadError, OOVError


def _write(tmp_path, text):
    p = tmp_path / "vec.txt"
    p.write_text(text, encoding="utf-8")
    return p


def test_load_basic(tmp_path):
    store = load_embeddings(_write(tmp_path, "2 3\na 1 0 0\nb 0 1 0\n"))
    assert store.dim == 3 and len(store) == 2
    assert cosine(store, "a", "b") == 0.0
    assert cosine(store, "a", "a") == 1.0


def test_arity_error_reports_line(tmp_path):
    with pytest.raises(LoadError) as err:
        load_embeddings(_write(tmp_path, "2 3\na 1 0 0\nb 0 1\n"))
    assert err.value.line_no == 3


def test_bad_header_and_component(tmp_path):
    with pytest.raises(LoadError):
        load_embeddings(_write(tmp_path, "two 3\n"))
    with pytest.raises(LoadError) as err:
        load_embeddings(_write(tmp_path, "1 2\na 1 x\n"))
    assert err.value.line_no == 2


def test_duplicates_first_wins(tmp_path, caplog):
    store = load_embeddings(_write(tmp_path, "3 2\na 1 0\na 0 1\nb 1 1\n"))
    assert len(store) == 2
    assert list(store.vector("a")) == [1.0, 0.0]


def test_vocab_mismatch_warns(tmp_path, caplog):
    store = load_embeddings(_write(tmp_path, "5 2\na 1 0\n"))
    assert len(store) == 1
    assert "declares 5" in caplog.text


def test_cosine_value(tmp_path):
    store = load_embeddings(_write(tmp_path, "2 2\nx 1 1\ny 1 0\n"))
    assert cosine(store, "x", "y") == pytest.approx(1 / math.sqrt(2), abs=1e-12)


def test_errors():
    store = EmbeddingStore(["a", "z"], np.array([[1.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(OOVError):
        cosine(store, "a", "missing")
    with pytest.raises(DegenerateVectorError):
        cosine(store, "a", "z")


def test_save_round_trip(tmp_path):
    store = EmbeddingStore(["a", "b"], np.array([[0.5, -1.25], [2.0, 3.0]]))
    save_embeddings(store, tmp_path / "v.txt")
    back = load_embeddings(tmp_path / "v.txt")
    assert back.words == ["a", "b"]
    np.testing.assert_allclose(back.matrix, store.matrix)


vec = st.lists(st.floats(-10, 10), min_size=4, max_size=4).filter(lambda v: math.hypot(*v) > 1e-3)


@given(vec, vec)
def test_cosine_bounded_and_symmetric(u, v):
    store = EmbeddingStore(["u", "v"], np.array([u, v]))
    c = store.cosine("u", "v")
    assert abs(c) <= 1 + 1e-9
    assert c == store.cosine("v", "u")


@given(vec, vec)
def test_cosine_scale_invariant(u, v):
    a = EmbeddingStore(["u", "v"], np.array([u, v]))
    b = EmbeddingStore(["u", "v"], np.array([np.array(u) * 7.3, v]))
    assert a.cosine("u", "v") == pytest.approx(b.cosine("u", "v"), abs=1e-9)
