"""Seeded synthetic data for end-to-end runs.

The generated world has a dictionary of multi-token entities built from
pseudo-words, documents that mention those entities, a language-model
corpus, word vectors, and gold labels for the approximate mentions:

* ``variant``   the entity word replaced by a spelling variant (label Y);
                variant vectors have cosine >= 0.6 with the original.
* ``collision`` the entity word replaced by a different word one edit away
                (label N); cosine <= 0.3.
* ``typo``      a random one-edit misspelling absent from every resource
                (label Y).
* ``period``    an exact mention closing a sentence, so the legacy
                tokenizer glues a period to its last token (label Y).

Variant, collision and typo strings are all single character edits of words
of the same length distribution, so their FuzzyED scores carry no
information about the label. Most variant and collision phrases also occur
in the corpus (``phrase_coverage``); the rest look like typos to the
language model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingStore, save_embeddings

CONSONANTS = "bcdfghklmnprstvz"
VOWELS = "aeiou"
FUNCTION_WORDS = ("the", "of", "and", "in", "a", "to", "on", "for", "with", "at")
# C = content word slot, F = function word slot
TEMPLATES = ("CC", "CFC", "FCC", "CCC", "CFCC", "FCFC")
KINDS = ("exact", "variant", "collision", "typo", "period")
LABELS = {"variant": "Y", "collision": "N", "typo": "Y", "period": "Y"}


@dataclass
class FixtureConfig:
    seed: int = 42
    n_content_words: int = 240
    n_entities: int = 150
    n_filler_words: int = 400
    n_docs: int = 400
    max_mentions_per_doc: int = 2
    kind_weights: tuple = (0.15, 0.25, 0.25, 0.20, 0.15)
    entity_lines: int = 3
    phrase_lines: int = 2
    phrase_coverage: float = 0.85
    filler_corpus_lines: int = 300
    dim: int = 64
    variant_cos: tuple = (0.65, 0.92)
    collision_cos: tuple = (0.0, 0.28)
    extra_embedding_words: int = 0


@dataclass
class Mention:
    doc_id: str
    kind: str
    entity_id: int
    tokens: list[str]
    entity_tokens: list[str]

    @property
    def label(self):
        return LABELS.get(self.kind)


@dataclass
class Fixture:
    config: FixtureConfig
    entities: list[list[str]]
    documents: list[tuple[str, str]]
    corpus: list[str]
    embeddings: EmbeddingStore
    mentions: list[Mention] = field(default_factory=list)
    variants: dict[str, str] = field(default_factory=dict)
    colliders: dict[str, str] = field(default_factory=dict)

    def gold(self) -> dict[tuple[str, str], str]:
        """Label per ``(substring, entity)`` for the approximate mentions."""
        out = {}
        for m in self.mentions:
            if m.label is None:
                continue
            key = (" ".join(m.tokens), " ".join(m.entity_tokens))
            prev = out.setdefault(key, m.label)
            assert prev == m.label, key
        return out

    def write(self, out_dir) -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "dictionary": out / "dictionary.txt",
            "docs": out / "docs.txt",
            "corpus": out / "corpus.txt",
            "embeddings": out / "embeddings.txt",
            "gold": out / "gold.tsv",
        }
        paths["dictionary"].write_text("".join(" ".join(e) + "\n" for e in self.entities), encoding="utf-8")
        paths["docs"].write_text("".join(f"{d}\t{t}\n" for d, t in self.documents), encoding="utf-8")
        paths["corpus"].write_text("".join(line + "\n" for line in self.corpus), encoding="utf-8")
        save_embeddings(self.embeddings, paths["embeddings"])
        with paths["gold"].open("w", encoding="utf-8") as fh:
            fh.write("substring\tentity\tlabel\n")
            for (sub, ent), label in sorted(self.gold().items()):
                fh.write(f"{sub}\t{ent}\t{label}\n")
        return paths


def _pseudo_word(rng, min_syl=3, max_syl=3):
    syl = rng.randint(min_syl, max_syl)
    w = "".join(rng.choice(CONSONANTS) + rng.choice(VOWELS) for _ in range(syl))
    if rng.random() < 0.5:
        w += rng.choice(CONSONANTS)
    return w


def _single_edit(word, rng):
    """One insertion, deletion or substitution, keeping the word at least 5 long."""
    while True:
        op = rng.choice(("sub_vowel", "ins_vowel", "del", "sub_cons"))
        i = rng.randrange(len(word))
        if op == "sub_vowel" and word[i] in VOWELS:
            return word[:i] + rng.choice(VOWELS.replace(word[i], "")) + word[i + 1:]
        if op == "sub_cons" and word[i] in CONSONANTS:
            return word[:i] + rng.choice(CONSONANTS.replace(word[i], "")) + word[i + 1:]
        if op == "ins_vowel":
            return word[:i] + rng.choice(VOWELS) + word[i:]
        if op == "del" and len(word) > 5:
            return word[:i] + word[i + 1:]


def _fresh_edit(word, rng, taken):
    while True:
        w = _single_edit(word, rng)
        if w not in taken:
            taken.add(w)
            return w


def _unit(v):
    return v / np.linalg.norm(v)


def _at_cosine(base, cos, nprng):
    """A unit vector with exactly ``cos`` similarity to unit vector ``base``."""
    noise = nprng.standard_normal(base.shape)
    noise -= noise.dot(base) * base
    noise = _unit(noise)
    return cos * base + np.sqrt(1.0 - cos * cos) * noise


def generate(config: FixtureConfig | None = None) -> Fixture:
    cfg = config or FixtureConfig()
    rng = random.Random(cfg.seed)
    nprng = np.random.default_rng(cfg.seed)

    taken = set(FUNCTION_WORDS)

    def new_words(n):
        out = []
        while len(out) < n:
            w = _pseudo_word(rng)
            if w not in taken:
                taken.add(w)
                out.append(w)
        return out

    content = new_words(cfg.n_content_words)
    filler = new_words(cfg.n_filler_words)
    # variants and colliders never coincide with any other generated word
    variants = {w: _fresh_edit(w, rng, taken) for w in content}
    colliders = {w: _fresh_edit(w, rng, taken) for w in content}

    entities = []
    seen = set()
    while len(entities) < cfg.n_entities:
        tpl = rng.choice(TEMPLATES)
        toks = [rng.choice(content) if c == "C" else rng.choice(FUNCTION_WORDS) for c in tpl]
        if len(set(t for t, c in zip(toks, tpl) if c == "C")) < tpl.count("C") or tuple(toks) in seen:
            continue
        seen.add(tuple(toks))
        entities.append(toks)

    def content_positions(toks):
        return [i for i, t in enumerate(toks) if t not in FUNCTION_WORDS]

    plan = []
    for toks in entities:
        pos = content_positions(toks)
        plan.append({
            "variant": (rng.choice(pos), rng.random() < cfg.phrase_coverage),
            "collision": (rng.choice(pos), rng.random() < cfg.phrase_coverage),
        })

    def filler_run(lo, hi):
        return [rng.choice(filler) for _ in range(rng.randint(lo, hi))]

    def sentence(phrase):
        return " ".join(filler_run(1, 5) + list(phrase) + filler_run(1, 5))

    def replaced(toks, pos, word):
        out = list(toks)
        out[pos] = word
        return out

    corpus = []
    for eid, toks in enumerate(entities):
        corpus.extend(sentence(toks) for _ in range(cfg.entity_lines))
        for kind, table in (("variant", variants), ("collision", colliders)):
            pos, covered = plan[eid][kind]
            if covered:
                phrase = replaced(toks, pos, table[toks[pos]])
                corpus.extend(sentence(phrase) for _ in range(cfg.phrase_lines))
    corpus.extend(" ".join(filler_run(4, 12)) for _ in range(cfg.filler_corpus_lines))
    rng.shuffle(corpus)

    typo_taken = set(taken)
    documents, mentions = [], []
    for d in range(cfg.n_docs):
        doc_id = f"d{d:05d}"
        words = filler_run(2, 4)
        n_mentions = rng.randint(1, cfg.max_mentions_per_doc)
        for k in range(n_mentions):
            eid = rng.randrange(len(entities))
            toks = entities[eid]
            kind = rng.choices(KINDS, cfg.kind_weights)[0]
            if kind == "period" and k != n_mentions - 1:
                kind = "exact"
            if kind in ("variant", "collision"):
                pos = plan[eid][kind][0]
                table = variants if kind == "variant" else colliders
                mtoks = replaced(toks, pos, table[toks[pos]])
            elif kind == "typo":
                pos = rng.choice(content_positions(toks))
                mtoks = replaced(toks, pos, _fresh_edit(toks[pos], rng, typo_taken))
            elif kind == "period":
                mtoks = toks[:-1] + [toks[-1] + "."]
            else:
                mtoks = list(toks)
            mentions.append(Mention(doc_id, kind, eid, mtoks, list(toks)))
            words.extend(mtoks)
            if kind != "period":
                words.extend(filler_run(2, 4))
        documents.append((doc_id, " ".join(words)))

    vocab = list(FUNCTION_WORDS) + content + filler
    vecs = {w: _unit(nprng.standard_normal(cfg.dim)) for w in vocab}
    for w in content:
        vecs[variants[w]] = _at_cosine(vecs[w], rng.uniform(*cfg.variant_cos), nprng)
        vecs[colliders[w]] = _at_cosine(vecs[w], rng.uniform(*cfg.collision_cos), nprng)
    words = list(vecs)
    matrix = np.array([vecs[w] for w in words])
    if cfg.extra_embedding_words:
        extra = [f"pad{i:06d}" for i in range(cfg.extra_embedding_words)]
        pad = nprng.standard_normal((len(extra), cfg.dim))
        words += extra
        matrix = np.vstack([matrix, pad / np.linalg.norm(pad, axis=1, keepdims=True)])
    store = EmbeddingStore(words, matrix)

    return Fixture(cfg, entities, documents, corpus, store, mentions, variants, colliders)
