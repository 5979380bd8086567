"""FuzzyED scoring and candidate generation.

FuzzyED is a token-level weighted edit distance whose substitution cost is
driven by the character-level similarity of the two tokens::

    cost = deletions(S) + insertions(E) + substitutions(E, S)
    score = max(0, 1 - cost)

Costs are expressed in entity-weight units (entity weights sum to one), so an
exact match scores 1 and the score of any pair lies in ``[0, 1]``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, TextIO

from .dictionary import Dictionary, Entity, IdfTable, deletion_cost
from .errors import LoadError, ValidationError
from .tokenizer import TokenSequence

# guards the lower-bound prune against float round-off at the threshold
_PRUNE_EPS = 1e-12

MATCH_COLUMNS = (
    "doc_id", "span_start", "span_end", "substring", "entity_id", "entity_text", "score_2ed",
)


@dataclass(frozen=True)
class ExtractConfig:
    delta: float = 0.8
    tau: float = 0.8
    max_span_slack: int = 2

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValidationError(f"delta must be in [0, 1], got {self.delta}")
        if not 0.0 <= self.tau <= 1.0:
            raise ValidationError(f"tau must be in [0, 1], got {self.tau}")
        if self.max_span_slack < 0:
            raise ValidationError(f"max_span_slack must be >= 0, got {self.max_span_slack}")


@dataclass(frozen=True)
class MatchedPair:
    doc_id: str
    token_span: tuple[int, int]
    substring_tokens: tuple[str, ...]
    entity_id: int
    score_2ed: float
    entity_tokens: tuple[str, ...] = ()

    @property
    def substring(self) -> str:
        return " ".join(self.substring_tokens)

    @property
    def entity_text(self) -> str:
        return " ".join(self.entity_tokens)


@dataclass
class EditScript:
    deletions: list[int] = field(default_factory=list)
    insertions: list[int] = field(default_factory=list)
    substitutions: list[tuple[int, int, float]] = field(default_factory=list)
    total_cost: float = 0.0

    def __bool__(self):
        return bool(self.deletions or self.insertions or self.substitutions)


def char_edit_distance(a: str, b: str) -> int:
    """Unit-cost Levenshtein distance."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_distance_within(a: str, b: str, k: int) -> bool:
    """True when ``char_edit_distance(a, b) <= k``, abandoning hopeless rows early."""
    if abs(len(a) - len(b)) > k:
        return False
    if a == b:
        return True
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        if min(cur) > k:
            return False
        prev = cur
    return prev[-1] <= k


@lru_cache(maxsize=1 << 18)
def char_similarity(a: str, b: str) -> float:
    if a == b:
        return 1.0
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - char_edit_distance(a, b) / longest


def substitution_cost(sub_token: str, ent_token: str, ent_weight: float, tau: float) -> float | None:
    """Cost of aligning ``sub_token`` with ``ent_token``, or None when forbidden."""
    if sub_token == ent_token:
        return 0.0
    sim = char_similarity(sub_token, ent_token)
    if sim < tau:
        return None
    return ent_weight * (1.0 - sim)


def token_edit_distance(
    sub_tokens: Sequence[str],
    ent_tokens: Sequence[str],
    insert_costs: Sequence[float],
    delete_costs: Sequence[float],
    tau: float,
) -> EditScript:
    """Weighted token-level edit distance with tau-gated substitutions.

    ``insert_costs[j]`` is the cost of inserting entity token ``j`` and
    ``delete_costs[i]`` the cost of deleting substring token ``i``. On equal
    cost the backtrace prefers substitution, then deletion, then insertion.
    The returned ``total_cost`` is the correctly rounded sum of the chosen
    operations' costs.
    """
    n, m = len(sub_tokens), len(ent_tokens)
    inf = math.inf
    sub_cost = [[substitution_cost(s, e, insert_costs[j], tau) for j, e in enumerate(ent_tokens)]
                for s in sub_tokens]
    dp = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dp[i][0] = dp[i - 1][0] + delete_costs[i - 1]
    for j in range(1, m + 1):
        dp[0][j] = dp[0][j - 1] + insert_costs[j - 1]
    for i in range(1, n + 1):
        row, prev = dp[i], dp[i - 1]
        di = delete_costs[i - 1]
        for j in range(1, m + 1):
            sc = sub_cost[i - 1][j - 1]
            best = prev[j - 1] + sc if sc is not None else inf
            cand = prev[j] + di
            if cand < best:
                best = cand
            cand = row[j - 1] + insert_costs[j - 1]
            if cand < best:
                best = cand
            row[j] = best

    script = EditScript()
    costs = []
    i, j = n, m
    while i > 0 or j > 0:
        here = dp[i][j]
        if i > 0 and j > 0:
            sc = sub_cost[i - 1][j - 1]
            if sc is not None and dp[i - 1][j - 1] + sc == here:
                if sc > 0.0 or sub_tokens[i - 1] != ent_tokens[j - 1]:
                    sim = char_similarity(sub_tokens[i - 1], ent_tokens[j - 1])
                    script.substitutions.append((i - 1, j - 1, sim))
                    costs.append(sc)
                i, j = i - 1, j - 1
                continue
        if i > 0 and dp[i - 1][j] + delete_costs[i - 1] == here:
            script.deletions.append(i - 1)
            costs.append(delete_costs[i - 1])
            i -= 1
            continue
        script.insertions.append(j - 1)
        costs.append(insert_costs[j - 1])
        j -= 1
    script.deletions.reverse()
    script.insertions.reverse()
    script.substitutions.reverse()
    script.total_cost = math.fsum(costs)
    return script


def fuzzyed_score(
    substring_tokens: Sequence[str], entity: Entity, tau: float, idf: IdfTable
) -> tuple[float, EditScript]:
    if not substring_tokens:
        raise ValidationError("substring has no tokens")
    delete_costs = [deletion_cost(t, entity, idf) for t in substring_tokens]
    script = token_edit_distance(substring_tokens, entity.tokens, entity.weights, delete_costs, tau)
    return max(0.0, 1.0 - script.total_cost), script


def _approx(a: str, b: str, tau: float) -> bool:
    return a == b or char_similarity(a, b) >= tau


def _approx_fast(a: str, b: str, tau: float) -> bool:
    if a == b:
        return True
    longest = max(len(a), len(b))
    # largest distance d with 1 - d/longest >= tau, confirmed exactly below
    k = int((1.0 - tau) * longest + 1e-9)
    return edit_distance_within(a, b, k) and char_similarity(a, b) >= tau


def unmatched_weight(span_tokens: Sequence[str], entity: Entity, tau: float) -> float:
    """Total weight of entity tokens with no tau-similar token in the span.

    Each such token can only be inserted, so this is a lower bound on the
    FuzzyED cost of the span.
    """
    return math.fsum(
        w for ent_tok, w in zip(entity.tokens, entity.weights)
        if not any(_approx(tok, ent_tok, tau) for tok in span_tokens)
    )


def generate_candidates(
    doc: TokenSequence | Sequence[str],
    entity: Entity,
    config: ExtractConfig,
    return_pruned: bool = False,
):
    """Anchor windows on tokens resembling the entity's core token.

    Every span that contains an anchor and is at most
    ``len(entity) + max_span_slack`` tokens long is considered. A span is
    pruned when the entity tokens with no tau-approximate counterpart inside
    it already weigh more than ``1 - delta``: each of them must be inserted,
    so the span cannot reach ``delta``.

    Returns the kept spans in ``(start, end)`` order, or ``(kept, pruned)``
    when ``return_pruned`` is set.
    """
    tokens = doc.tokens if isinstance(doc, TokenSequence) else list(doc)
    n = len(tokens)
    core = entity.core_token
    tau = config.tau
    max_len = len(entity.tokens) + config.max_span_slack
    anchors = [p for p, tok in enumerate(tokens) if _approx(tok, core, tau)]

    spans = set()
    for p in anchors:
        for start in range(max(0, p - max_len + 1), p + 1):
            for end in range(p + 1, min(n, start + max_len) + 1):
                spans.add((start, end))

    budget = 1.0 - config.delta + _PRUNE_EPS
    kept, pruned = [], []
    for start, end in sorted(spans):
        missing = unmatched_weight(tokens[start:end], entity, tau)
        (pruned if missing > budget else kept).append((start, end))
    if return_pruned:
        return kept, pruned
    return kept


class Matcher:
    """Extraction over one dictionary, with a core-token lookup index.

    Finding the entities anchored in a document only compares each distinct
    document token against core tokens whose length is compatible with a
    similarity of at least ``tau``.
    """

    def __init__(self, dictionary: Dictionary, config: ExtractConfig | None = None):
        self.dictionary = dictionary
        self.config = config or ExtractConfig()
        self._cores_by_len = defaultdict(list)
        self._near = {}
        for core in dictionary.by_core:
            self._cores_by_len[len(core)].append(core)

    def _cores_near(self, token: str) -> list[str]:
        hits = self._near.get(token)
        if hits is None:
            hits = self._near[token] = self._scan_cores(token)
        return hits

    def _scan_cores(self, token):
        tau = self.config.tau
        hits = []
        n = len(token)
        for length, cores in self._cores_by_len.items():
            # edit distance >= |n - length|, so similarity <= 1 - |n - length| / max
            if 1.0 - abs(n - length) / max(n, length, 1) < tau:
                continue
            hits.extend(c for c in cores if _approx_fast(token, c, tau))
        return hits

    def anchored_entities(self, tokens: Sequence[str]) -> list[Entity]:
        ids = set()
        for tok in set(tokens):
            for core in self._cores_near(tok):
                ids.update(self.dictionary.by_core[core])
        return [self.dictionary[i] for i in sorted(ids)]

    def extract(self, doc_id: str, doc: TokenSequence | Sequence[str]) -> list[MatchedPair]:
        tokens = doc.tokens if isinstance(doc, TokenSequence) else list(doc)
        if not tokens:
            return []
        cfg = self.config
        idf = self.dictionary.idf
        pairs = []
        for entity in self.anchored_entities(tokens):
            scored = []
            for start, end in generate_candidates(tokens, entity, cfg):
                score, _ = fuzzyed_score(tokens[start:end], entity, cfg.tau, idf)
                if score >= cfg.delta:
                    scored.append((score, start, end))
            scored.sort(key=lambda x: (-x[0], x[2] - x[1], x[1]))
            chosen = []
            for score, start, end in scored:
                if all(end <= s or start >= e for s, e, _ in chosen):
                    chosen.append((start, end, score))
            for start, end, score in chosen:
                pairs.append(MatchedPair(
                    doc_id, (start, end), tuple(tokens[start:end]),
                    entity.id, score, tuple(entity.tokens),
                ))
        pairs.sort(key=lambda p: (p.token_span, p.entity_id))
        return pairs


def extract(doc_id: str, doc, dictionary: Dictionary, config: ExtractConfig | None = None) -> list[MatchedPair]:
    return Matcher(dictionary, config).extract(doc_id, doc)


def write_matches(pairs: Iterable[MatchedPair], fh: TextIO, header: bool = True) -> None:
    if header:
        fh.write("\t".join(MATCH_COLUMNS) + "\n")
    for p in pairs:
        fh.write("\t".join(match_row(p)) + "\n")


def match_row(p: MatchedPair) -> list[str]:
    return [
        p.doc_id, str(p.token_span[0]), str(p.token_span[1]), p.substring,
        str(p.entity_id), p.entity_text, repr(p.score_2ed),
    ]


def parse_match_row(fields: Sequence[str]) -> MatchedPair:
    doc_id, start, end, substring, entity_id, entity_text, score = fields[:7]
    return MatchedPair(
        doc_id, (int(start), int(end)), tuple(substring.split(" ")),
        int(entity_id), float(score), tuple(entity_text.split(" ")),
    )


def read_matches(fh: TextIO, path=None) -> Iterator[tuple[MatchedPair, list[str]]]:
    """Yield ``(pair, all_fields)`` for each data row of a matcher TSV."""
    for line_no, line in enumerate(fh, 1):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if line_no == 1 and fields[: len(MATCH_COLUMNS)] == list(MATCH_COLUMNS):
            continue
        if len(fields) < len(MATCH_COLUMNS):
            raise LoadError(f"expected {len(MATCH_COLUMNS)} columns, got {len(fields)}", path, line_no)
        try:
            yield parse_match_row(fields), fields
        except ValueError as exc:
            raise LoadError(str(exc), path, line_no) from exc
