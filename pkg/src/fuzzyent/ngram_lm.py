"""Token n-gram counts with stupid-backoff scoring.

Scores follow stupid backoff: the relative frequency of the n-gram given its
context when it was observed, otherwise ``alpha`` times the score under the
context with its leftmost word dropped, bottoming out at the unigram relative
frequency. Log scores are base 10.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import LoadError, ValidationError
from .tokenizer import TokenizerConfig, tokenize_words

log = logging.getLogger(__name__)

NEG_INF = float("-inf")
MODEL_MAGIC = "ngram-model v1"


@dataclass(frozen=True)
class ValidityThresholds:
    logprob_min: float = -10.8
    count_min: int = 0
    backoff_alpha: float = 0.4

    def __post_init__(self):
        if not 0.0 < self.backoff_alpha <= 1.0:
            raise ValidationError(f"backoff_alpha must be in (0, 1], got {self.backoff_alpha}")


@dataclass
class NgramModel:
    order: int
    counts: dict[tuple[str, ...], int]
    total_unigrams: int = field(default=-1)
    skipped_rows: int = 0

    def __post_init__(self):
        if self.order < 1:
            raise ValidationError(f"order must be >= 1, got {self.order}")
        if self.total_unigrams < 0:
            self.total_unigrams = sum(c for g, c in self.counts.items() if len(g) == 1)
        if self.total_unigrams <= 0:
            raise ValidationError("n-gram model has no unigram mass")

    def __len__(self):
        return len(self.counts)

    def _check(self, ngram):
        if not 1 <= len(ngram) <= self.order:
            raise ValidationError(f"n-gram length {len(ngram)} outside [1, {self.order}]")

    def count(self, ngram: Sequence[str]) -> int:
        ngram = tuple(ngram)
        self._check(ngram)
        return self.counts.get(ngram, 0)

    def score(self, ngram: Sequence[str], alpha: float = 0.4) -> float:
        """Stupid-backoff score (not a normalised probability); 0.0 when the last word is unseen."""
        ngram = tuple(ngram)
        self._check(ngram)
        return self._score(ngram, alpha)

    def _score(self, ngram, alpha):
        counts = self.counts
        if len(ngram) == 1:
            return counts.get(ngram, 0) / self.total_unigrams
        joint = counts.get(ngram, 0)
        if joint > 0:
            context = counts.get(ngram[:-1], 0)
            if context > 0:
                return joint / context
        return alpha * self._score(ngram[1:], alpha)

    def log_prob(self, ngram: Sequence[str], alpha: float = 0.4) -> float:
        s = self.score(ngram, alpha)
        return math.log10(s) if s > 0.0 else NEG_INF

    def is_valid(self, ngram: Sequence[str], thresholds: ValidityThresholds | None = None) -> bool:
        t = thresholds or ValidityThresholds()
        return (self.log_prob(ngram, t.backoff_alpha) > t.logprob_min
                and self.count(ngram) > t.count_min)


def raw_count(model: NgramModel, ngram: Sequence[str]) -> int:
    return model.count(ngram)


def log_prob(model: NgramModel, ngram: Sequence[str], alpha: float = 0.4) -> float:
    return model.log_prob(ngram, alpha)


def is_valid_ngram(model: NgramModel, ngram: Sequence[str], thresholds: ValidityThresholds | None = None) -> bool:
    return model.is_valid(ngram, thresholds)


def count_ngrams(token_lines: Iterable[Sequence[str]], order: int) -> Counter:
    counts = Counter()
    for tokens in token_lines:
        n = len(tokens)
        for i in range(n):
            for k in range(1, min(order, n - i) + 1):
                counts[tuple(tokens[i:i + k])] += 1
    return counts


def build_model(corpus_paths, order: int = 3, tokenizer_config: TokenizerConfig | None = None) -> NgramModel:
    """Count every 1..order-gram in the corpus files, one sentence per line."""
    if order < 1:
        raise ValidationError(f"order must be >= 1, got {order}")
    if isinstance(corpus_paths, (str, Path)):
        corpus_paths = [corpus_paths]

    def lines():
        for path in corpus_paths:
            try:
                with open(path, encoding="utf-8") as fh:
                    for line in fh:
                        yield tokenize_words(line, tokenizer_config)
            except (OSError, UnicodeDecodeError) as exc:
                raise LoadError(str(exc), path) from exc

    counts = count_ngrams(lines(), order)
    if not counts:
        raise ValidationError("corpus produced no tokens")
    return NgramModel(order, dict(counts))


def ingest_counts(tsv_paths, order: int = 3) -> NgramModel:
    """Aggregate n-gram count rows.

    Accepts ``ngram<TAB>count`` rows and Google Books style
    ``ngram<TAB>year<TAB>match_count<TAB>volume_count`` rows; per-year rows are
    summed. N-grams longer than ``order`` are dropped and malformed rows are
    skipped and counted in ``skipped_rows``.
    """
    if order < 1:
        raise ValidationError(f"order must be >= 1, got {order}")
    if isinstance(tsv_paths, (str, Path)):
        tsv_paths = [tsv_paths]
    counts = Counter()
    skipped = 0
    for path in tsv_paths:
        try:
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    fields = line.rstrip("\n").split("\t")
                    if len(fields) == 2:
                        raw = fields[1]
                    elif len(fields) == 4:
                        raw = fields[2]
                    else:
                        skipped += 1
                        continue
                    gram = tuple(fields[0].split())
                    try:
                        value = int(raw)
                    except ValueError:
                        skipped += 1
                        continue
                    if not gram or value < 0:
                        skipped += 1
                        continue
                    if len(gram) > order:
                        continue
                    counts[gram] += value
        except (OSError, UnicodeDecodeError) as exc:
            raise LoadError(str(exc), path) from exc
    if skipped:
        log.warning("skipped %d malformed count rows", skipped)
    return NgramModel(order, dict(counts), skipped_rows=skipped)


def save_model(model: NgramModel, path) -> None:
    rows = sorted((" ".join(g), c) for g, c in model.counts.items())
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{MODEL_MAGIC} order={model.order} unigrams={model.total_unigrams}\n")
        for text, c in rows:
            fh.write(f"{text}\t{c}\n")


def load_model(path) -> NgramModel:
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise LoadError(str(exc), path) from exc
    with fh:
        header = fh.readline().split()
        try:
            if " ".join(header[:2]) != MODEL_MAGIC:
                raise ValueError
            opts = dict(item.split("=", 1) for item in header[2:])
            order, total = int(opts["order"]), int(opts["unigrams"])
        except (ValueError, KeyError):
            raise LoadError("bad n-gram model header", path, 1) from None
        counts = {}
        for line_no, line in enumerate(fh, 2):
            text, sep, c = line.rstrip("\n").rpartition("\t")
            if not sep:
                raise LoadError("expected '<ngram>\\t<count>'", path, line_no)
            try:
                counts[tuple(text.split(" "))] = int(c)
            except ValueError:
                raise LoadError(f"bad count {c!r}", path, line_no) from None
    return NgramModel(order, counts, total)
