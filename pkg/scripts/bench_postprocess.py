#!/usr/bin/env python3
"""Time post-processing against desk-scale models, excluding model load."""

import argparse
import tempfile
import time
from pathlib import Path

from fuzzyent.dictionary import load_dictionary
from fuzzyent.embeddings import load_embeddings
from fuzzyent.fixtures import FixtureConfig, generate
from fuzzyent.matcher import Matcher
from fuzzyent.ngram_lm import build_model
from fuzzyent.postprocessor import postprocess
from fuzzyent.tokenizer import tokenize


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--corpus-lines", type=int, default=40000)
    parser.add_argument("--vocab", type=int, default=50000, help="embedding store size")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    cfg = FixtureConfig(seed=42, n_docs=max(100, args.pairs * 7 // 10), filler_corpus_lines=args.corpus_lines)
    cfg.extra_embedding_words = max(0, args.vocab - (10 + 3 * cfg.n_content_words + cfg.n_filler_words))
    with tempfile.TemporaryDirectory() as tmp:
        paths = generate(cfg).write(Path(tmp))
        t0 = time.perf_counter()
        lm = build_model([paths["corpus"]], 3)
        emb = load_embeddings(paths["embeddings"])
        t1 = time.perf_counter()
        matcher = Matcher(load_dictionary(paths["dictionary"]))
        docs = paths["docs"].read_text(encoding="utf-8").splitlines()
        pairs = []
        for line in docs:
            doc_id, _, text = line.partition("\t")
            pairs.extend(matcher.extract(doc_id, tokenize(text)))
        pairs = pairs[: args.pairs]
    print(f"load: {t1 - t0:.2f}s  lm_ngrams={len(lm)}  emb_words={len(emb)}  pairs={len(pairs)}")
    for i in range(args.repeat):
        start = time.perf_counter()
        postprocess(pairs, None, lm, emb)
        print(f"run {i}: {time.perf_counter() - start:.4f}s")


if __name__ == "__main__":
    main()
