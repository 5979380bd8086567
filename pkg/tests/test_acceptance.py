"""Exit criteria, one test per criterion; each prints a PASS/FAIL line."""

import math
import random
import time

import mpmath
import pytest

from conftest import ACCEPTANCE_LINES
from fuzzyent.dictionary import load_dictionary
from fuzzyent.embeddings import load_embeddings
from fuzzyent.evaluator import LabeledScore, auc, roc_curve
from fuzzyent.fixtures import FixtureConfig, generate
from fuzzyent.matcher import ExtractConfig, Matcher, fuzzyed_score, generate_candidates, token_edit_distance
from fuzzyent.ngram_lm import NgramModel, build_model, count_ngrams
from fuzzyent.postprocessor import Decision, RescoreConfig, normalize_distance, postprocess, rescore
from fuzzyent.tokenizer import TokenizerConfig, tokenize

from oracles import brute_script_cost, concordance


def verdict(number, name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] AC{number} {name}" + (f" :: {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Seed-42 fixture run through the file-based pipeline with default settings."""
    fx = generate(FixtureConfig(seed=42))
    paths = fx.write(tmp_path_factory.mktemp("world"))
    legacy = TokenizerConfig(strip_trailing_period=False)
    dictionary = load_dictionary(paths["dictionary"], legacy)
    matcher = Matcher(dictionary, ExtractConfig(delta=0.8, tau=0.8))
    docs = [(doc_id, tokenize(text, legacy)) for doc_id, text in fx.documents]
    pairs = [p for doc_id, toks in docs for p in matcher.extract(doc_id, toks)]
    lm = build_model([paths["corpus"]], 3, legacy)
    emb = load_embeddings(paths["embeddings"])
    return dict(fx=fx, dictionary=dictionary, matcher=matcher, docs=docs, pairs=pairs, lm=lm, emb=emb)


def test_ac1_fuzzyed_oracle_equivalence():
    rng = random.Random(2024)
    alphabet = ["ab", "abc", "abd", "bcd", "honor", "honour"]
    start = time.perf_counter()
    mismatches = 0
    for _ in range(500):
        sub = [rng.choice(alphabet) for _ in range(rng.randint(1, 4))]
        ent = [rng.choice(alphabet) for _ in range(rng.randint(1, 4))]
        ins = [rng.random() for _ in ent]
        dele = [rng.random() for _ in sub]
        tau = rng.choice([0.5, 0.8])
        dp = token_edit_distance(sub, ent, ins, dele, tau).total_cost
        mismatches += dp != brute_script_cost(sub, ent, ins, dele, tau)
    elapsed = time.perf_counter() - start
    verdict(1, "FuzzyED DP == brute-force minimum (500 pairs)", mismatches == 0 and elapsed < 10.0,
            f"mismatches={mismatches} runtime={elapsed:.2f}s (<10s)")


def test_ac2_normalization_endpoints():
    worst = 0.0
    for base in (1.5, math.e, 10.0):
        worst = max(worst, abs(normalize_distance(1.0, base) - 0.0), abs(normalize_distance(0.0, base) - 1.0))
    verdict(2, "ED_norm(1)=0 and ED_norm(0)=1 for base in {1.5, e, 10}", worst <= 1e-12, f"max error={worst:.1e}")


def test_ac3_table4_composition():
    mpmath.mp.dps = 40

    def independent(cos):
        c = mpmath.mpf(cos)
        return float(1 - ((mpmath.e ** (1 - c) - 1) / (mpmath.e - 1)) / 3)

    honour = rescore(None, [normalize_distance(0.637478, math.e)], 3)
    promise = rescore(None, [normalize_distance(0.245628, math.e)], 3)
    ref_h, ref_p = independent(0.637478), independent(0.245628)
    ok = abs(honour - ref_h) <= 1e-3 and abs(promise - ref_p) <= 1e-3 and honour > promise
    verdict(3, "worked rescoring example and separation", ok,
            f"honour={honour:.4f} (ref {ref_h:.4f}) promise={promise:.4f} (ref {ref_p:.4f}) honour>promise={honour > promise}")


def test_ac4_stupid_backoff():
    m = NgramModel(2, dict(count_ngrams([["a", "b", "a", "b", "c"]], 2)))
    alpha = 0.4
    ab = m.log_prob(("a", "b"), alpha)
    bc = m.log_prob(("b", "c"), alpha)
    # "a c" is unseen; backs off to alpha * count(c) / total
    backed = m.score(("a", "c"), alpha)
    ok = (ab == 0.0 and abs(bc - math.log10(0.5)) <= 1e-9
          and backed == alpha * m.score(("c",), alpha)
          and abs(m.log_prob(("a", "c"), alpha) - math.log10(alpha * 1 / 5)) <= 1e-9)
    verdict(4, "stupid backoff on 'a b a b c'", ok, f"logP(b|a)={ab} logP(c|b)={bc:.6f} S(c|a)={backed}")


def test_ac5_auc_oracle():
    rng = random.Random(7)
    worst = 0.0
    for _ in range(100):
        n = rng.randint(2, 200)
        rows = [(rng.randint(0, 10) / 10, rng.choice("YN")) for _ in range(n)]
        rows[0], rows[1] = (rows[0][0], "Y"), (rows[1][0], "N")
        trap = auc(roc_curve([LabeledScore(s, l) for s, l in rows]))
        ref = concordance([s for s, l in rows if l == "Y"], [s for s, l in rows if l == "N"])
        worst = max(worst, abs(trap - ref))
    hand = auc(roc_curve([LabeledScore(0.9, "Y"), LabeledScore(0.8, "N"),
                          LabeledScore(0.7, "Y"), LabeledScore(0.6, "N")]))
    verdict(5, "trapezoid AUC == concordance (100 sets, ties)", worst <= 1e-9 and hand == 0.75,
            f"max diff={worst:.1e} hand case={hand}")


def test_ac6_end_to_end_separation(pipeline):
    fx, emb = pipeline["fx"], pipeline["emb"]
    variant_cos = min(emb.cosine(v, w) for w, v in fx.variants.items())
    collision_cos = max(emb.cosine(c, w) for w, c in fx.colliders.items())
    results = postprocess(pipeline["pairs"], None, pipeline["lm"], emb, RescoreConfig())
    gold = fx.gold()
    s2ed, spost = [], []
    for r in results:
        label = gold.get((r.pair.substring, r.pair.entity_text))
        if label is not None:
            s2ed.append(LabeledScore(r.pair.score_2ed, label))
            spost.append(LabeledScore(r.final_score, label))
    auc_2ed, auc_post = auc(roc_curve(s2ed)), auc(roc_curve(spost))
    ok = variant_cos >= 0.6 and collision_cos <= 0.3 and auc_post - auc_2ed >= 0.15
    verdict(6, "post-processed AUC exceeds 2ED AUC by >= 0.15 (seed 42)", ok,
            f"AUC_2ed={auc_2ed:.4f} AUC_post={auc_post:.4f} gain={auc_post - auc_2ed:.4f} "
            f"labelled={len(spost)} min variant cos={variant_cos:.3f} max collision cos={collision_cos:.3f}")


def test_ac7_period_fix(pipeline):
    targets = [
        p for p in pipeline["pairs"]
        if p.substring_tokens[:-1] == p.entity_tokens[:-1]
        and p.substring_tokens[-1] == p.entity_tokens[-1] + "."
    ]
    on = postprocess(targets, None, pipeline["lm"], pipeline["emb"], RescoreConfig(strip_period_fix=True))
    off = postprocess(targets, None, pipeline["lm"], pipeline["emb"], RescoreConfig(strip_period_fix=False))
    ok_on = all(r.decision is Decision.PERIOD_FIX and r.final_score == 1.0 for r in on)
    ok_off = all(r.final_score == r.pair.score_2ed and r.decision is not Decision.PERIOD_FIX for r in off)
    verdict(7, "period-only pairs fixed when enabled, untouched when disabled", bool(targets) and ok_on and ok_off,
            f"pairs={len(targets)} enabled_ok={ok_on} disabled_ok={ok_off}")


def test_ac8_throughput(tmp_path):
    cfg = FixtureConfig(seed=42, n_docs=1400, filler_corpus_lines=40000)
    base_vocab = 10 + cfg.n_content_words * 3 + cfg.n_filler_words
    cfg.extra_embedding_words = 50_000 - base_vocab
    fx = generate(cfg)
    paths = fx.write(tmp_path)
    lm = build_model([paths["corpus"]], 3)
    emb = load_embeddings(paths["embeddings"])
    dictionary = load_dictionary(paths["dictionary"])
    matcher = Matcher(dictionary)
    pairs = [p for doc_id, text in fx.documents for p in matcher.extract(doc_id, tokenize(text))][:2000]
    start = time.perf_counter()
    results = postprocess(pairs, None, lm, emb, RescoreConfig())
    elapsed = time.perf_counter() - start
    ok = len(results) == 2000 and len(lm) <= 1_000_000 and len(emb) <= 50_000 and elapsed < 5.0
    verdict(8, "2000 pairs post-processed in < 5 s after load", ok,
            f"pairs={len(results)} lm_ngrams={len(lm)} emb_words={len(emb)} time={elapsed:.3f}s")


def test_ac9_pruning_soundness(pipeline):
    matcher, dictionary = pipeline["matcher"], pipeline["dictionary"]
    cfg = matcher.config
    n_pruned = false_prunes = 0
    for _, doc in pipeline["docs"]:
        toks = doc.tokens
        for entity in matcher.anchored_entities(toks):
            _, pruned = generate_candidates(toks, entity, cfg, return_pruned=True)
            for s, e in pruned:
                n_pruned += 1
                score, _ = fuzzyed_score(toks[s:e], entity, cfg.tau, dictionary.idf)
                false_prunes += score >= cfg.delta
    verdict(9, "no pruned span reaches delta", false_prunes == 0 and n_pruned > 0,
            f"pruned spans={n_pruned} false prunes={false_prunes}")
