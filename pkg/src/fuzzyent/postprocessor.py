"""Post-processing of approximate matches.

For each approximately matched pair the pipeline

1. passes exact matches through,
2. treats pairs that become exact once the substring's final period is
   stripped as exact,
3. locates the positions where substring and entity tokens differ by
   character-level edits only,
4. asks the language model whether each differing substring token is a typo
   or an intended (different or variant) word, and
5. rescores pairs with intended words by the embedding similarity of the
   differing tokens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence, TextIO

from .embeddings import EmbeddingStore
from .errors import DegenerateVectorError, OOVError, PipelineError, ValidationError
from .matcher import MATCH_COLUMNS, MatchedPair, char_similarity, match_row
from .ngram_lm import NgramModel, ValidityThresholds
from .tokenizer import strip_trailing_period

STRUCTURAL = None  # marker returned by locate_divergences

RESCORED_COLUMNS = MATCH_COLUMNS + ("final_score", "decision", "divergences")


class Decision(str, Enum):
    EXACT = "ExactPassthrough"
    PERIOD_FIX = "PeriodFix"
    TYPO = "TypoKeep2ED"
    RESCORED = "IntendedRescored"
    OOV = "OovKeep2ED"
    STRUCTURAL = "StructuralKeep2ED"

    def __str__(self):
        return self.value


class WordKind(str, Enum):
    INTENDED = "Intended"
    TYPO = "Typo"


@dataclass(frozen=True)
class RescoreConfig:
    base: float = math.e
    thresholds: ValidityThresholds = field(default_factory=ValidityThresholds)
    strip_period_fix: bool = True
    tau: float = 0.8
    window: int = 3

    def __post_init__(self):
        if not self.base > 1.0:
            raise ValidationError(f"base must be > 1, got {self.base}")
        if self.window < 1:
            raise ValidationError(f"window must be >= 1, got {self.window}")


@dataclass(frozen=True)
class Divergence:
    position: int
    ts: str
    te: str
    cos: float | None
    ed_norm: float

    def format(self) -> str:
        cos = "" if self.cos is None else repr(self.cos)
        return f"{self.position}:{self.ts}:{self.te}:{cos}:{self.ed_norm!r}"


@dataclass(frozen=True)
class RescoredPair:
    pair: MatchedPair
    final_score: float
    decision: Decision
    divergences: tuple[Divergence, ...] = ()


def locate_divergences(sub_tokens: Sequence[str], ent_tokens: Sequence[str], tau: float):
    """Positions where the token lists differ, or ``STRUCTURAL`` (None).

    The pair is structural when the lists differ in length or a differing
    token pair is not tau-similar, i.e. the match involves token-level edits.
    """
    if len(sub_tokens) != len(ent_tokens):
        return STRUCTURAL
    out = []
    for i, (ts, te) in enumerate(zip(sub_tokens, ent_tokens)):
        if ts == te:
            continue
        if char_similarity(ts, te) < tau:
            return STRUCTURAL
        out.append((i, ts, te))
    return out


def surrounding_ngrams(tokens: Sequence[str], position: int, n: int) -> list[tuple[str, ...]]:
    """Every length-``n`` window over ``tokens`` covering ``position``."""
    if len(tokens) < n:
        return [tuple(tokens)]
    first = max(0, position - n + 1)
    last = min(position, len(tokens) - n)
    return [tuple(tokens[i:i + n]) for i in range(first, last + 1)]


def classify_typo(
    lm: NgramModel,
    sub_tokens: Sequence[str],
    ent_tokens: Sequence[str],
    position: int,
    thresholds: ValidityThresholds | None = None,
    n: int = 3,
) -> WordKind:
    """Intended when some aligned window pair is valid on both sides or invalid on both."""
    thresholds = thresholds or ValidityThresholds()
    n = min(n, lm.order)
    sub_windows = surrounding_ngrams(sub_tokens, position, n)
    ent_windows = surrounding_ngrams(ent_tokens, position, n)
    for sw, ew in zip(sub_windows, ent_windows):
        if lm.is_valid(sw, thresholds) == lm.is_valid(ew, thresholds):
            return WordKind.INTENDED
    return WordKind.TYPO


def normalize_distance(cos: float, base: float = math.e) -> float:
    """Map a cosine similarity to a distance in [0, 1] with an exponential penalty."""
    if not base > 1.0:
        raise ValidationError(f"base must be > 1, got {base}")
    c = min(1.0, max(0.0, cos))
    return (base ** (1.0 - c) - 1.0) / (base - 1.0)


def rescore(pair: MatchedPair | None, ed_norms: Sequence[float], entity_token_count: int) -> float:
    if entity_token_count < 1:
        raise ValidationError("entity must have at least one token")
    s = 1.0 - math.fsum(ed_norms) / entity_token_count
    return min(1.0, max(0.0, s))


def _entity_tokens(pair: MatchedPair, entities) -> tuple[str, ...]:
    if entities is None:
        if not pair.entity_tokens:
            raise ValidationError(f"pair for entity {pair.entity_id} carries no entity tokens")
        return pair.entity_tokens
    ent = entities[pair.entity_id]
    return tuple(getattr(ent, "tokens", ent))


def postprocess_pair(
    pair: MatchedPair,
    ent_tokens: Sequence[str],
    lm: NgramModel,
    emb: EmbeddingStore,
    config: RescoreConfig,
) -> RescoredPair:
    sub = list(pair.substring_tokens)
    ent = list(ent_tokens)
    if pair.score_2ed == 1.0:
        return RescoredPair(pair, 1.0, Decision.EXACT)
    if config.strip_period_fix and sub:
        sub[-1] = strip_trailing_period(sub[-1])
        if sub == ent:
            return RescoredPair(pair, 1.0, Decision.PERIOD_FIX)

    keep = pair.score_2ed
    divs = locate_divergences(sub, ent, config.tau)
    if divs is STRUCTURAL or not divs:
        return RescoredPair(pair, keep, Decision.STRUCTURAL)

    kinds = [classify_typo(lm, sub, ent, pos, config.thresholds, config.window) for pos, _, _ in divs]
    if all(k is WordKind.TYPO for k in kinds):
        return RescoredPair(pair, keep, Decision.TYPO)

    out = []
    for (pos, ts, te), kind in zip(divs, kinds):
        if kind is WordKind.TYPO:
            # lexical distance stays the right measure for a typo
            out.append(Divergence(pos, ts, te, None, 1.0 - char_similarity(ts, te)))
            continue
        try:
            cos = emb.cosine(ts, te)
        except (OOVError, DegenerateVectorError):
            return RescoredPair(pair, keep, Decision.OOV)
        out.append(Divergence(pos, ts, te, cos, normalize_distance(cos, config.base)))
    score = rescore(pair, [d.ed_norm for d in out], len(ent))
    return RescoredPair(pair, score, Decision.RESCORED, tuple(out))


def postprocess(
    matches: Iterable[MatchedPair],
    entities: Mapping | None,
    lm: NgramModel | None,
    emb: EmbeddingStore | None,
    config: RescoreConfig | None = None,
) -> list[RescoredPair]:
    """Run every pair through the pipeline; output order follows input order.

    ``entities`` maps entity ids to an Entity or a token list. When None, each
    pair's own ``entity_tokens`` are used.
    """
    if lm is None:
        raise PipelineError("language model not loaded")
    if emb is None:
        raise PipelineError("embeddings not loaded")
    config = config or RescoreConfig()
    return [postprocess_pair(p, _entity_tokens(p, entities), lm, emb, config) for p in matches]


def write_rescored(results: Iterable[RescoredPair], fh: TextIO, header: bool = True) -> None:
    if header:
        fh.write("\t".join(RESCORED_COLUMNS) + "\n")
    for r in results:
        row = match_row(r.pair) + [
            repr(r.final_score), r.decision.value, ";".join(d.format() for d in r.divergences),
        ]
        fh.write("\t".join(row) + "\n")
