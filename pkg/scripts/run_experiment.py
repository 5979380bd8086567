#!/usr/bin/env python3
"""Run the full extract -> post-process -> evaluate loop on the seeded fixture.

Writes every intermediate file to --out-dir and prints the AUC of the raw
FuzzyED score next to the post-processed score.
"""

import argparse
import sys
from pathlib import Path

from fuzzyent.cli import main as cli


def run(*args):
    status = cli([str(a) for a in args])
    if status:
        sys.exit(status)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("runs/seed42"))
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--base", type=float, default=None, help="ED_norm base (default e)")
    args = parser.parse_args()

    out = args.out_dir
    run("fixtures", "--out-dir", out, "--seed", args.seed)
    run("build-lm", "--corpus", out / "corpus.txt", "--out", out / "lm.txt")
    run("extract", "--dictionary", out / "dictionary.txt", "--text", out / "docs.txt", "--out", out / "matches.tsv")
    post = ["postprocess", "--input", out / "matches.tsv", "--lm-path", out / "lm.txt",
            "--embeddings-path", out / "embeddings.txt", "--out", out / "rescored.tsv"]
    if args.base is not None:
        post += ["--base", args.base]
    run(*post)
    run("evaluate", "--labels", out / "gold.tsv", "--scores", out / "rescored.tsv", "--out-dir", out / "eval")


if __name__ == "__main__":
    main()
