"""Precision/recall, per-label score histograms and ROC/AUC."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .errors import LoadError, ValidationError

POSITIVE, NEGATIVE = "Y", "N"


@dataclass(frozen=True)
class LabeledScore:
    score: float
    label: str

    def __post_init__(self):
        if self.label not in (POSITIVE, NEGATIVE):
            raise ValidationError(f"label must be Y or N, got {self.label!r}")
        if not 0.0 <= self.score <= 1.0:
            raise ValidationError(f"score must be in [0, 1], got {self.score}")

    @property
    def positive(self) -> bool:
        return self.label == POSITIVE


@dataclass
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    auc: float
    roc_points: list[tuple[float, float]] = field(default_factory=list)
    threshold: float = 0.0

    def rows(self, prefix: str = "") -> list[tuple[str, str]]:
        return [
            (prefix + "threshold", repr(self.threshold)),
            (prefix + "tp", str(self.tp)),
            (prefix + "fp", str(self.fp)),
            (prefix + "fn", str(self.fn)),
            (prefix + "precision", repr(self.precision)),
            (prefix + "recall", repr(self.recall)),
            (prefix + "auc", repr(self.auc)),
        ]


def confusion_at_threshold(items: Sequence[LabeledScore], threshold: float, total_relevant: int | None = None):
    """``(tp, fp, fn)`` when every item scoring at least ``threshold`` is returned.

    ``total_relevant`` may exceed the number of Y items to account for
    entities the extractor never surfaced at all.
    """
    n_pos = sum(1 for it in items if it.positive)
    if total_relevant is None:
        total_relevant = n_pos
    if total_relevant < n_pos:
        raise ValidationError(f"total_relevant={total_relevant} is below the {n_pos} labelled positives")
    tp = sum(1 for it in items if it.positive and it.score >= threshold)
    fp = sum(1 for it in items if not it.positive and it.score >= threshold)
    return tp, fp, total_relevant - tp


def precision_recall(tp: int, fp: int, fn: int) -> tuple[float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    return p, r


def roc_curve(items: Sequence[LabeledScore]) -> list[tuple[float, float]]:
    n_pos = sum(1 for it in items if it.positive)
    n_neg = len(items) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("ROC needs at least one Y and one N item")
    ordered = sorted(items, key=lambda it: -it.score)
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < len(ordered):
        s = ordered[i].score
        # tied scores enter as one step
        while i < len(ordered) and ordered[i].score == s:
            if ordered[i].positive:
                tp += 1
            else:
                fp += 1
            i += 1
        points.append((fp / n_neg, tp / n_pos))
    return points


def auc(points: Sequence[tuple[float, float]]) -> float:
    """Trapezoidal area under ROC points ordered by increasing FPR."""
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


def histogram(items: Iterable[LabeledScore], bins: int = 10) -> dict[str, list[tuple[float, float, int]]]:
    """Equal-width bins over [0, 1] per label; the last bin includes 1.0."""
    if bins < 1:
        raise ValidationError("bins must be >= 1")
    counts = {POSITIVE: [0] * bins, NEGATIVE: [0] * bins}
    for it in items:
        k = min(int(it.score * bins), bins - 1)
        counts[it.label][k] += 1
    return {
        label: [(k / bins, (k + 1) / bins, c[k]) for k in range(bins)]
        for label, c in counts.items()
    }


def evaluate(items: Sequence[LabeledScore], threshold: float, total_relevant: int | None = None) -> EvalReport:
    tp, fp, fn = confusion_at_threshold(items, threshold, total_relevant)
    p, r = precision_recall(tp, fp, fn)
    points = roc_curve(items)
    return EvalReport(tp, fp, fn, p, r, auc(points), points, threshold)


def read_labels(fh: TextIO, path=None, skip_bad_rows: bool = False, need_score: bool = True):
    """Parse ``substring<TAB>entity<TAB>score<TAB>label`` rows.

    With ``need_score=False`` three-column ``substring<TAB>entity<TAB>label``
    rows are accepted too and the score is returned as None. Returns
    ``(rows, n_bad)`` where rows are ``(substring, entity, score, label)``.
    """
    rows = []
    bad = 0
    for line_no, line in enumerate(fh, 1):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        try:
            if len(fields) == 4:
                sub, ent, score, label = fields
                score = float(score)
                if not 0.0 <= score <= 1.0:
                    raise ValueError(f"score {score} outside [0, 1]")
            elif len(fields) == 3 and not need_score:
                sub, ent, label = fields
                score = None
            else:
                raise ValueError(f"unexpected column count {len(fields)}")
            if label not in (POSITIVE, NEGATIVE):
                raise ValueError(f"label must be Y or N, got {label!r}")
        except ValueError as exc:
            if line_no == 1 and fields[-1].lower() == "label":
                continue
            if skip_bad_rows:
                bad += 1
                continue
            raise LoadError(str(exc), path, line_no) from None
        rows.append((sub, ent, score, label))
    return rows, bad


def write_report(rows: Iterable[tuple[str, str]], fh: TextIO) -> None:
    for k, v in rows:
        fh.write(f"{k}\t{v}\n")


def write_roc_csv(points: Sequence[tuple[float, float]], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["fpr", "tpr"])
    w.writerows(points)


def write_histogram_csv(hist: dict, fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["label", "bin_lower", "bin_upper", "count"])
    for label in (POSITIVE, NEGATIVE):
        for lo, hi, c in hist[label]:
            w.writerow([label, lo, hi, c])
