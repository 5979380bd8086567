"""Entity dictionary with IDF token weights and core tokens.

Each entity's token weights are the tokens' IDF values (computed over the
dictionary itself) normalised to sum to one. The highest-weight token is the
entity's *core* token, used to anchor candidate generation.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import LoadError, ValidationError
from .tokenizer import TokenizerConfig, tokenize_words


@dataclass(frozen=True)
class IdfTable:
    values: dict[str, float]
    max_idf: float

    def __contains__(self, token):
        return token in self.values

    def __getitem__(self, token):
        return self.values[token]

    def raw_weight(self, token: str) -> float:
        """IDF of ``token``; tokens never seen in the dictionary count as maximally rare."""
        return self.values.get(token, self.max_idf)


@dataclass(frozen=True)
class Entity:
    id: int
    tokens: list[str]
    weights: list[float]
    core_index: int
    raw_total: float = 0.0
    text: str = ""

    @property
    def core_token(self) -> str:
        return self.tokens[self.core_index]

    def __len__(self):
        return len(self.tokens)


@dataclass
class Dictionary:
    entities: list[Entity]
    idf: IdfTable
    by_core: dict[str, list[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.entities:
            raise ValidationError("dictionary has no entities")
        if not self.by_core:
            for ent in self.entities:
                self.by_core.setdefault(ent.core_token, []).append(ent.id)
        self._index = {ent.id: ent for ent in self.entities}

    @property
    def entity_count(self) -> int:
        return len(self.entities)

    def __len__(self):
        return len(self.entities)

    def __getitem__(self, entity_id: int) -> Entity:
        return self._index[entity_id]

    def __iter__(self):
        return iter(self.entities)

    def deletion_cost(self, token: str, entity: Entity) -> float:
        return deletion_cost(token, entity, self.idf)


def deletion_cost(token: str, entity: Entity, idf: IdfTable) -> float:
    """Cost of deleting a substring token when matching against ``entity``.

    The token's IDF is normalised by the entity's raw IDF total, so tokens
    belonging to the entity cost exactly their entity weight. When the entity
    fell back to uniform weights every deletion costs ``1/len(entity)``.
    """
    if entity.raw_total <= 0.0:
        return 1.0 / len(entity.tokens)
    return idf.raw_weight(token) / entity.raw_total


def compute_idf(entities: Sequence[Sequence[str]]) -> IdfTable:
    if not entities:
        raise ValidationError("cannot compute IDF over zero entities")
    n = len(entities)
    df = Counter()
    for tokens in entities:
        df.update(set(tokens))
    values = {tok: math.log(n / d) for tok, d in df.items()}
    return IdfTable(values, max(values.values(), default=0.0))


def entity_weights(tokens: Sequence[str], idf: IdfTable) -> tuple[list[float], int]:
    if not tokens:
        raise ValidationError("entity has no tokens")
    raw = [idf.raw_weight(t) for t in tokens]
    total = math.fsum(raw)
    if total <= 0.0:
        weights = [1.0 / len(raw)] * len(raw)
    else:
        weights = [r / total for r in raw]
    # max() returns the first maximal element, i.e. the leftmost tie
    core = max(range(len(weights)), key=weights.__getitem__)
    return weights, core


def build_dictionary(lines: Iterable[str], tokenizer_config: TokenizerConfig | None = None) -> Dictionary:
    """Build a dictionary from raw entity strings.

    Blank lines are skipped and lines that tokenize identically are collapsed
    into a single entity (first occurrence kept).
    """
    seen = set()
    token_lists = []
    texts = []
    for line in lines:
        tokens = tokenize_words(line, tokenizer_config)
        if not tokens:
            continue
        key = tuple(tokens)
        if key in seen:
            continue
        seen.add(key)
        token_lists.append(tokens)
        texts.append(line.strip())
    if not token_lists:
        raise ValidationError("dictionary is empty after filtering blank and duplicate lines")

    idf = compute_idf(token_lists)
    entities = []
    for i, (tokens, text) in enumerate(zip(token_lists, texts)):
        weights, core = entity_weights(tokens, idf)
        raw_total = math.fsum(idf.raw_weight(t) for t in tokens)
        entities.append(Entity(i, tokens, weights, core, raw_total, text))
    return Dictionary(entities, idf)


def load_dictionary(path, tokenizer_config: TokenizerConfig | None = None) -> Dictionary:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            lines = fh.read().split("\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise LoadError(str(exc), path) from exc
    return build_dictionary(lines, tokenizer_config)
