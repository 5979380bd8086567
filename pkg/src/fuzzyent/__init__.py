"""Approximate dictionary entity extraction with n-gram and embedding post-processing."""

from .dictionary import Dictionary, Entity, IdfTable, build_dictionary, compute_idf, entity_weights, load_dictionary
from .embeddings import EmbeddingStore, cosine, load_embeddings
from .evaluator import EvalReport, LabeledScore, auc, confusion_at_threshold, evaluate, histogram, roc_curve
from .matcher import (
    ExtractConfig, MatchedPair, Matcher, char_edit_distance, char_similarity, extract,
    fuzzyed_score, generate_candidates,
)
from .ngram_lm import NgramModel, ValidityThresholds, build_model, ingest_counts, is_valid_ngram, log_prob, raw_count
from .postprocessor import (
    Decision, RescoreConfig, RescoredPair, classify_typo, locate_divergences, normalize_distance,
    postprocess, rescore, surrounding_ngrams,
)
from .tokenizer import TokenizerConfig, TokenSequence, strip_trailing_period, tokenize

__version__ = "0.1.0"
