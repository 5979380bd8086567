"""Pretrained word vectors in word2vec text format."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DegenerateVectorError, LoadError, OOVError, ValidationError

log = logging.getLogger(__name__)


@dataclass
class EmbeddingStore:
    """Word vectors held as rows of one matrix, with precomputed norms."""

    words: list[str]
    matrix: np.ndarray
    _index: dict[str, int] = field(init=False, repr=False)
    _norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.words):
            raise ValidationError("matrix must have one row per word")
        if self.matrix.shape[1] < 1:
            raise ValidationError("embedding dimension must be positive")
        self._index = {}
        for i, w in enumerate(self.words):
            self._index.setdefault(w, i)
        self._norms = np.linalg.norm(self.matrix, axis=1)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self):
        return len(self._index)

    def __contains__(self, word):
        return word in self._index

    def vector(self, word: str) -> np.ndarray:
        try:
            return self.matrix[self._index[word]]
        except KeyError:
            raise OOVError(word) from None

    def cosine(self, w1: str, w2: str) -> float:
        try:
            i, j = self._index[w1], self._index[w2]
        except KeyError as exc:
            raise OOVError(exc.args[0]) from None
        denom = self._norms[i] * self._norms[j]
        if denom == 0.0:
            raise DegenerateVectorError(f"zero vector for {w1!r} or {w2!r}")
        if i == j:
            return 1.0
        c = float(np.dot(self.matrix[i], self.matrix[j]) / denom)
        return min(1.0, max(-1.0, c))


def cosine(store: EmbeddingStore, w1: str, w2: str) -> float:
    return store.cosine(w1, w2)


def load_embeddings(path) -> EmbeddingStore:
    """Read ``<vocab_size> <dim>`` then ``<word> <v1> ... <v_dim>`` rows.

    Duplicate words keep their first vector. A vocab size that disagrees with
    the number of rows only logs a warning.
    """
    path = Path(path)
    try:
        fh = path.open(encoding="utf-8")
    except OSError as exc:
        raise LoadError(str(exc), path) from exc
    with fh:
        header = fh.readline().split()
        try:
            vocab_size, dim = (int(x) for x in header)
            if dim < 1 or vocab_size < 0:
                raise ValueError
        except ValueError:
            raise LoadError("header must be '<vocab_size> <dim>'", path, 1) from None
        words, rows, seen = [], [], set()
        n_rows = 0
        for line_no, line in enumerate(fh, 2):
            parts = line.split()
            if not parts:
                continue
            n_rows += 1
            if len(parts) != dim + 1:
                raise LoadError(f"expected {dim} components, got {len(parts) - 1}", path, line_no)
            word = parts[0]
            try:
                vec = [float(x) for x in parts[1:]]
            except ValueError:
                raise LoadError("non-numeric vector component", path, line_no) from None
            if word in seen:
                continue
            seen.add(word)
            words.append(word)
            rows.append(vec)
    if n_rows != vocab_size:
        log.warning("%s: header declares %d words, found %d rows", path, vocab_size, n_rows)
    matrix = np.array(rows, dtype=np.float64).reshape(len(rows), dim)
    return EmbeddingStore(words, matrix)


def save_embeddings(store_or_items, path, precision: int = 6) -> None:
    if isinstance(store_or_items, EmbeddingStore):
        items: Iterable = zip(store_or_items.words, store_or_items.matrix)
        n, dim = len(store_or_items.words), store_or_items.dim
    else:
        items = list(store_or_items)
        n, dim = len(items), len(items[0][1])
    fmt = f"%.{precision}f"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{n} {dim}\n")
        for word, vec in items:
            fh.write(word + " " + " ".join(fmt % x for x in vec) + "\n")
