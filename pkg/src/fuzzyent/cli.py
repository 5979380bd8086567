"""Command-line entry points.

Subcommands::

    fuzzyent fixtures    --out-dir DIR [--seed 42]
    fuzzyent build-lm    (--corpus F... | --counts F...) --out MODEL
    fuzzyent extract     --dictionary F --text F [--out TSV]
    fuzzyent postprocess --input TSV --lm-path MODEL --embeddings-path VEC [--out TSV]
    fuzzyent evaluate    --labels TSV [--scores TSV] --out-dir DIR

Exit status is 0 on success, 1 on validation errors and 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from .dictionary import load_dictionary
from .embeddings import load_embeddings
from .errors import LoadError, ValidationError
from .evaluator import LabeledScore, evaluate, histogram, read_labels, write_histogram_csv, write_report, write_roc_csv
from .fixtures import FixtureConfig, generate
from .matcher import ExtractConfig, Matcher, read_matches, write_matches
from .ngram_lm import ValidityThresholds, build_model, ingest_counts, load_model, save_model
from .postprocessor import Decision, RescoreConfig, postprocess, write_rescored
from .tokenizer import TokenizerConfig, tokenize

log = logging.getLogger("fuzzyent")

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2


@dataclass
class RunConfig:
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    extract: ExtractConfig = field(default_factory=ExtractConfig)
    rescore: RescoreConfig = field(default_factory=RescoreConfig)
    inputs: dict[str, Path] = field(default_factory=dict)
    outputs: dict[str, Path] = field(default_factory=dict)
    seed: int = 42

    @property
    def thresholds(self) -> ValidityThresholds:
        return self.rescore.thresholds

    def check_inputs(self):
        for name, path in self.inputs.items():
            if str(path) != "-" and not Path(path).is_file():
                raise LoadError(f"{name} not found", path)


@contextmanager
def _open_out(path):
    if path is None or str(path) == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


@contextmanager
def _open_in(path):
    if str(path) == "-":
        yield sys.stdin
    else:
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise LoadError(str(exc), path) from exc
        with fh:
            yield fh


def _say(msg):
    print(msg, file=sys.stderr)


def cmd_fixtures(args) -> int:
    cfg = FixtureConfig(seed=args.seed)
    if args.docs is not None:
        cfg.n_docs = args.docs
    cfg.extra_embedding_words = args.extra_embedding_words
    cfg.filler_corpus_lines += args.extra_corpus_lines
    fx = generate(cfg)
    paths = fx.write(args.out_dir)
    for name, path in paths.items():
        print(f"{name}\t{path}")
    return EXIT_OK


def cmd_build_lm(args) -> int:
    tok = TokenizerConfig(strip_trailing_period=args.strip_period)
    run = RunConfig(tokenizer=tok, inputs={f"input {i}": Path(p) for i, p in enumerate(args.corpus or args.counts)})
    run.check_inputs()
    if args.corpus:
        model = build_model(args.corpus, args.order, tok)
    else:
        model = ingest_counts(args.counts, args.order)
        if model.skipped_rows:
            _say(f"skipped {model.skipped_rows} malformed rows")
    save_model(model, args.out)
    print(f"order={model.order} unigrams={model.total_unigrams} ngrams={len(model)}")
    return EXIT_OK


def _documents(fh):
    for line_no, line in enumerate(fh, 1):
        line = line.rstrip("\n")
        doc_id, sep, text = line.partition("\t")
        if not sep:
            doc_id, text = str(line_no), line
        yield doc_id, text


def cmd_extract(args) -> int:
    run = RunConfig(
        tokenizer=TokenizerConfig(strip_trailing_period=args.strip_period),
        extract=ExtractConfig(args.delta, args.tau, args.max_span_slack),
        inputs={"dictionary": Path(args.dictionary), "text": Path(args.text)},
    )
    run.check_inputs()
    matcher = Matcher(load_dictionary(args.dictionary, run.tokenizer), run.extract)
    n_docs = n_pairs = 0
    with _open_in(args.text) as fin, _open_out(args.out) as fout:
        write_matches([], fout)
        for doc_id, text in _documents(fin):
            pairs = matcher.extract(doc_id, tokenize(text, run.tokenizer))
            write_matches(pairs, fout, header=False)
            n_docs += 1
            n_pairs += len(pairs)
    _say(f"documents={n_docs} pairs={n_pairs}")
    return EXIT_OK


def cmd_postprocess(args) -> int:
    thresholds = ValidityThresholds(args.logprob_threshold, args.count_threshold, args.alpha)
    run = RunConfig(
        rescore=RescoreConfig(args.base, thresholds, not args.no_strip_period_fix, args.tau, args.window),
        inputs={"input": Path(args.input), "lm": Path(args.lm_path), "embeddings": Path(args.embeddings_path)},
    )
    run.check_inputs()
    lm = load_model(args.lm_path)
    emb = load_embeddings(args.embeddings_path)
    with _open_in(args.input) as fin:
        pairs = [p for p, _ in read_matches(fin, args.input)]
    results = postprocess(pairs, None, lm, emb, run.rescore)
    with _open_out(args.out) as fout:
        write_rescored(results, fout)
    tally = Counter(r.decision for r in results)
    _say(" ".join(f"{d.value}={tally.get(d, 0)}" for d in Decision))
    return EXIT_OK


def _read_scored(path, skip_bad):
    """``(substring, entity) -> [(score_2ed, final_score), ...]`` from a rescored TSV."""
    out = {}
    bad = 0
    with _open_in(path) as fh:
        for line_no, line in enumerate(fh, 1):
            fields = line.rstrip("\n").split("\t")
            if line_no == 1 and fields[0] == "doc_id":
                continue
            if fields == [""]:
                continue
            try:
                if len(fields) < 9:
                    raise ValueError(f"expected at least 9 columns, got {len(fields)}")
                s2, sf = float(fields[6]), float(fields[7])
            except ValueError as exc:
                if skip_bad:
                    bad += 1
                    continue
                raise LoadError(str(exc), path, line_no) from None
            out.setdefault((fields[3], fields[5]), []).append((s2, sf))
    return out, bad


def _emit_series(name, items, args, out_dir):
    report = evaluate(items, args.threshold, args.total_relevant)
    with open(out_dir / f"roc_{name}.csv", "w", encoding="utf-8") as fh:
        write_roc_csv(report.roc_points, fh)
    with open(out_dir / f"hist_{name}.csv", "w", encoding="utf-8") as fh:
        write_histogram_csv(histogram(items, args.bins), fh)
    return report


def cmd_evaluate(args) -> int:
    run = RunConfig(inputs={"labels": Path(args.labels)})
    if args.scores:
        run.inputs["scores"] = Path(args.scores)
    run.check_inputs()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    with _open_in(args.labels) as fh:
        rows, bad = read_labels(fh, args.labels, args.skip_bad_rows, need_score=not args.scores)
    if bad:
        _say(f"skipped {bad} malformed label rows")

    series = {}
    if args.scores:
        gold = {}
        for sub, ent, _, label in rows:
            if gold.setdefault((sub, ent), label) != label:
                raise ValidationError(f"conflicting labels for {sub!r} / {ent!r}")
        scored, bad = _read_scored(args.scores, args.skip_bad_rows)
        if bad:
            _say(f"skipped {bad} malformed score rows")
        series = {"2ed": [], "post": []}
        unlabelled = 0
        for key, values in scored.items():
            label = gold.get(key)
            if label is None:
                unlabelled += len(values)
                continue
            for s2, sf in values:
                series["2ed"].append(LabeledScore(s2, label))
                series["post"].append(LabeledScore(sf, label))
        _say(f"joined={len(series['post'])} unlabelled={unlabelled}")
    else:
        series["score"] = [LabeledScore(score, label) for _, _, score, label in rows]

    report_rows = []
    aucs = {}
    for name, items in series.items():
        report = _emit_series(name, items, args, out_dir)
        aucs[name] = report.auc
        report_rows += [("n_items", str(len(items)))] if not report_rows else []
        report_rows += report.rows(prefix=f"{name}.")
        print(f"{name}\tauc={report.auc:.6f}\tprecision={report.precision:.6f}\trecall={report.recall:.6f}")
    if "post" in aucs:
        ratio = aucs["post"] / aucs["2ed"] if aucs["2ed"] > 0 else math.inf
        improvement = (ratio - 1.0) * 100.0
        report_rows += [("auc_ratio", repr(ratio)), ("auc_improvement_pct", repr(improvement))]
        print(f"auc_ratio={ratio:.6f}\timprovement={improvement:.2f}%")
    with open(out_dir / "report.tsv", "w", encoding="utf-8") as fh:
        write_report(report_rows, fh)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzyent", description=__doc__.splitlines()[0])
    parser.add_argument("--log-level", default="warning", choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixtures", help="write the seeded synthetic data set")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--docs", type=int, default=None, help="number of documents")
    p.add_argument("--extra-embedding-words", type=int, default=0)
    p.add_argument("--extra-corpus-lines", type=int, default=0)
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("build-lm", help="build and persist an n-gram model")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", nargs="+", help="text files, one sentence per line")
    src.add_argument("--counts", nargs="+", help="n-gram count TSV files")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--strip-period", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_lm)

    p = sub.add_parser("extract", help="match dictionary entities in text")
    p.add_argument("--dictionary", required=True)
    p.add_argument("--text", required=True, help="one document per line, optionally 'doc_id<TAB>text'")
    p.add_argument("--delta", type=float, default=0.8)
    p.add_argument("--tau", type=float, default=0.8)
    p.add_argument("--max-span-slack", type=int, default=2)
    p.add_argument("--strip-period", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("postprocess", help="rescore approximate matches")
    p.add_argument("--input", required=True, help="matcher TSV, '-' for stdin")
    p.add_argument("--lm-path", required=True)
    p.add_argument("--embeddings-path", required=True)
    p.add_argument("--logprob-threshold", type=float, default=-10.8)
    p.add_argument("--count-threshold", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.4, help="stupid-backoff multiplier")
    p.add_argument("--base", type=float, default=math.e)
    p.add_argument("--tau", type=float, default=0.8)
    p.add_argument("--window", type=int, default=3, help="n-gram window length")
    p.add_argument("--no-strip-period-fix", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_postprocess)

    p = sub.add_parser("evaluate", help="ROC/AUC, precision/recall and histograms")
    p.add_argument("--labels", required=True, help="substring, entity, [score,] label TSV")
    p.add_argument("--scores", default=None, help="postprocess TSV to join with the labels")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--threshold", type=float, default=0.8)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--total-relevant", type=int, default=None)
    p.add_argument("--skip-bad-rows", action="store_true")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper()), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        _say(f"error: {exc}")
        return EXIT_VALIDATION
    except BrokenPipeError:
        # downstream closed early (e.g. `| head`); not an error
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK
    except (LoadError, OSError) as exc:
        _say(f"error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
