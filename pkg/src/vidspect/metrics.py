"""Confusion-matrix metrics and grouped benchmark-style reports.

The positive class is Fake: recall measures the fraction of generated
videos caught. Predictions without a parseable answer count as "Real"
(the detector failed to detect); the abstention rate is surfaced
separately so silent failures stay visible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Iterable, Sequence

from .grammar import Label


class EmptyCounts(ValueError):
    """Metrics over zero records are undefined."""


class UnknownSampleId(KeyError):
    pass


class DuplicatePrediction(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def n_fake(self) -> int:
        return self.tp + self.fn

    @property
    def n_real(self) -> int:
        return self.tn + self.fp


def round2(x: float) -> float:
    """Half-up rounding to two decimals (display convention)."""
    return float(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def confusion(records: Iterable[tuple[Label, Label | None]]) -> ConfusionCounts:
    """Count a (ground truth, prediction) stream; absent pred means "Real"."""
    tp = fp = tn = fn = 0
    for gt, pred in records:
        effective = pred if pred is not None else Label.REAL
        if gt is Label.FAKE:
            if effective is Label.FAKE:
                tp += 1
            else:
                fn += 1
        else:
            if effective is Label.FAKE:
                fp += 1
            else:
                tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def prf(counts: ConfusionCounts) -> tuple[float, float, float, float]:
    """(accuracy, recall, precision, f1) as percentages, full precision.

    Zero-denominator recall/precision/f1 report as 0.0.
    """
    if counts.total == 0:
        raise EmptyCounts("no records to score")
    acc = (counts.tp + counts.tn) / counts.total
    recall = counts.tp / counts.n_fake if counts.n_fake else 0.0
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return acc * 100, recall * 100, precision * 100, f1 * 100


@dataclass(frozen=True)
class GroupMetrics:
    key: str
    counts: ConfusionCounts
    acc: float
    recall: float
    precision: float
    f1: float
    abstained: int


@dataclass(frozen=True)
class MetricsReport:
    groups: tuple[GroupMetrics, ...]
    mean_acc: float
    mean_recall: float
    mean_f1: float
    abstention_rate: float

    def to_json_dict(self) -> dict:
        return {
            "groups": [
                {
                    "key": g.key,
                    "counts": {"tp": g.counts.tp, "fp": g.counts.fp, "tn": g.counts.tn, "fn": g.counts.fn},
                    "acc": round2(g.acc),
                    "recall": round2(g.recall),
                    "precision": round2(g.precision),
                    "f1": round2(g.f1),
                    "abstained": g.abstained,
                }
                for g in self.groups
            ],
            "mean": {
                "acc": round2(self.mean_acc),
                "recall": round2(self.mean_recall),
                "f1": round2(self.mean_f1),
            },
            "abstention_rate": round2(self.abstention_rate),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    def to_table(self) -> str:
        """Aligned plain-text table: one row per metric, one column per group."""
        keys = [g.key for g in self.groups] + ["Mean"]
        width = max([len(k) for k in keys] + [8])
        header = "Metric  " + "  ".join(f"{k:>{width}s}" for k in keys)
        rows = []
        for name, values in (
            ("Acc", [g.acc for g in self.groups] + [self.mean_acc]),
            ("R", [g.recall for g in self.groups] + [self.mean_recall]),
            ("F1", [g.f1 for g in self.groups] + [self.mean_f1]),
        ):
            rows.append(f"{name:<6s}  " + "  ".join(f"{round2(v):>{width}.2f}" for v in values))
        return "\n".join([header] + rows)


def grouped_report(
    predictions: Iterable[tuple[str, Label | None]],
    manifest: Sequence,
    group_by: str | Sequence[str] = "generator",
) -> MetricsReport:
    """Join predictions to manifest records and score per group.

    `manifest` entries need sample_id, label, and the group_by field(s);
    extra JSONL fields are reachable too. Group order follows first
    appearance in the manifest, and the macro mean row is the unweighted
    average over groups.
    """
    fields = [group_by] if isinstance(group_by, str) else list(group_by)

    def key_of(rec) -> str:
        parts = []
        for f in fields:
            if hasattr(rec, f):
                v = getattr(rec, f)
                parts.append(v.value if isinstance(v, Enum) else str(v))
            elif getattr(rec, "extra", None) and f in rec.extra:
                parts.append(str(rec.extra[f]))
            else:
                raise KeyError(f"manifest record {rec.sample_id!r} has no field {f!r}")
        return "/".join(parts)

    by_id = {}
    group_order: list[str] = []
    for rec in manifest:
        by_id[rec.sample_id] = rec
        k = key_of(rec)
        if k not in group_order:
            group_order.append(k)

    grouped: dict[str, list[tuple[Label, Label | None]]] = {k: [] for k in group_order}
    abstained: dict[str, int] = {k: 0 for k in group_order}
    seen: set[str] = set()
    n_preds = 0
    for sample_id, pred in predictions:
        if sample_id in seen:
            raise DuplicatePrediction(f"sample {sample_id!r} predicted more than once")
        seen.add(sample_id)
        rec = by_id.get(sample_id)
        if rec is None:
            raise UnknownSampleId(sample_id)
        k = key_of(rec)
        gt = rec.label if isinstance(rec.label, Label) else Label.parse(str(rec.label))
        grouped[k].append((gt, pred))
        if pred is None:
            abstained[k] += 1
        n_preds += 1

    groups = []
    for k in group_order:
        if not grouped[k]:
            continue
        counts = confusion(grouped[k])
        acc, recall, precision, f1 = prf(counts)
        groups.append(GroupMetrics(k, counts, acc, recall, precision, f1, abstained[k]))
    if not groups:
        raise EmptyCounts("no predictions joined to any group")

    n = len(groups)
    return MetricsReport(
        groups=tuple(groups),
        mean_acc=sum(g.acc for g in groups) / n,
        mean_recall=sum(g.recall for g in groups) / n,
        mean_f1=sum(g.f1 for g in groups) / n,
        abstention_rate=100.0 * sum(abstained.values()) / n_preds,
    )


@dataclass(frozen=True)
class ConsistencyResult:
    consistent: bool
    reason: str = ""
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0
    precision: float = 0.0
    f1: float = 0.0


def table_consistency_check(acc_pct: float, recall_pct: float, n_fake: int, n_real: int) -> ConsistencyResult:
    """Reconstruct counts implied by printed (Acc, R) and derive (P, F1).

    tp and the total correct are the nearest integers to the printed
    percentages; any reconstructed count outside its valid range marks the
    row Inconsistent. Returned precision/f1 are percentages rounded to two
    decimals, comparable to printed tables.
    """
    if n_fake <= 0 or n_real <= 0:
        return ConsistencyResult(False, "class sizes must be positive")
    tp = round(recall_pct * n_fake / 100)
    correct = round(acc_pct * (n_fake + n_real) / 100)
    tn = correct - tp
    fp = n_real - tn
    fn = n_fake - tp
    if not (0 <= tp <= n_fake):
        return ConsistencyResult(False, f"implied tp={tp} out of range")
    if not (0 <= tn <= n_real):
        return ConsistencyResult(False, f"implied tn={tn} out of range")
    if fp < 0 or fn < 0:
        return ConsistencyResult(False, f"implied fp={fp}, fn={fn} out of range")
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / n_fake
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ConsistencyResult(True, "", tp, tn, fp, fn, round2(precision * 100), round2(f1 * 100))
