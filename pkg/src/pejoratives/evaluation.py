"""Classification metrics and multi-run comparison tables.

Macro F1 is the arithmetic mean of the two per-class F1 values.  A class with
no predicted and no actual instances scores 0 and is flagged, so the empty
cell in the dual-label test split is handled explicitly rather than silently.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .classifier import PredictionRecord

APPROACHES = ("baseline", "concat", "subst")


class EvaluationError(ValueError):
    """Missing or duplicate predictions, or inconsistent report sets."""


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def confusion(gold: Mapping[str, bool], predictions: Sequence[PredictionRecord]) -> ConfusionCounts:
    """Counts for one run; every gold id must have exactly one prediction."""
    by_id: dict[str, PredictionRecord] = {}
    for record in predictions:
        if record.id in by_id:
            raise EvaluationError(f"duplicate prediction for id {record.id!r}")
        by_id[record.id] = record
    missing = sorted(set(gold) - set(by_id))
    if missing:
        raise EvaluationError(f"missing predictions for ids: {missing[:5]}")
    tp = fp = fn = tn = 0
    for item_id, truth in gold.items():
        predicted = by_id[item_id].label
        if truth and predicted:
            tp += 1
        elif truth and not predicted:
            fn += 1
        elif not truth and predicted:
            fp += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def _f1(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def f1_per_class(counts: ConfusionCounts) -> tuple[float, float]:
    """(positive-class F1, negative-class F1); empty classes score 0."""
    f1_pos = _f1(counts.tp, counts.fp, counts.fn)
    f1_neg = _f1(counts.tn, counts.fn, counts.fp)
    return f1_pos, f1_neg


def zero_classes(counts: ConfusionCounts) -> tuple[str, ...]:
    """Classes with neither actual nor predicted instances (F1 forced to 0)."""
    flagged = []
    if counts.tp + counts.fn + counts.fp == 0:
        flagged.append("positive")
    if counts.tn + counts.fp + counts.fn == 0:
        flagged.append("negative")
    return tuple(flagged)


def macro_f1(counts: ConfusionCounts) -> float:
    pos, neg = f1_per_class(counts)
    return (pos + neg) / 2.0


@dataclass(frozen=True)
class RunMetrics:
    run_id: int
    counts: ConfusionCounts
    f1_pos: float
    f1_neg: float
    macro_f1: float
    flagged: tuple[str, ...] = ()


def evaluate_run(gold: Mapping[str, bool], predictions: Sequence[PredictionRecord], run_id: int = 0) -> RunMetrics:
    counts = confusion(gold, predictions)
    f1_pos, f1_neg = f1_per_class(counts)
    return RunMetrics(
        run_id=run_id,
        counts=counts,
        f1_pos=f1_pos,
        f1_neg=f1_neg,
        macro_f1=(f1_pos + f1_neg) / 2.0,
        flagged=zero_classes(counts),
    )


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    # statistics.mean is exact on floats, so aggregating identical runs
    # reproduces the single-run value bit for bit
    mean = float(statistics.mean(values))
    std = math.sqrt(statistics.fmean([(v - mean) ** 2 for v in values]))
    return mean, std


@dataclass(frozen=True)
class EvalReport:
    """Per-approach metrics, averaged over runs with population std."""

    task: str
    approach: str  # "baseline" | "concat" | "subst"
    source: str  # "gold" | "predicted" | "n/a"
    subset: str  # "whole" | "epithets"
    macro_f1: float
    f1_pos: float
    f1_neg: float
    fp_count: float
    macro_f1_std: float
    f1_pos_std: float
    f1_neg_std: float
    fp_count_std: float
    runs: tuple[RunMetrics, ...]
    flagged: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        return self.approach if self.source == "n/a" else f"{self.approach} w/ {self.source}"


def aggregate_runs(
    runs: Sequence[RunMetrics],
    task: str,
    approach: str,
    source: str = "n/a",
    subset: str = "whole",
) -> EvalReport:
    if not runs:
        raise EvaluationError("at least one run is required")
    macro, macro_std = _mean_std([r.macro_f1 for r in runs])
    pos, pos_std = _mean_std([r.f1_pos for r in runs])
    neg, neg_std = _mean_std([r.f1_neg for r in runs])
    fp, fp_std = _mean_std([float(r.counts.fp) for r in runs])
    flagged = tuple(sorted({flag for r in runs for flag in r.flagged}))
    return EvalReport(
        task=task,
        approach=approach,
        source=source,
        subset=subset,
        macro_f1=macro,
        f1_pos=pos,
        f1_neg=neg,
        fp_count=fp,
        macro_f1_std=macro_std,
        f1_pos_std=pos_std,
        f1_neg_std=neg_std,
        fp_count_std=fp_std,
        runs=tuple(runs),
    )


@dataclass(frozen=True)
class ComparisonTable:
    task: str
    subset: str
    reports: tuple[EvalReport, ...]

    def render_text(self) -> str:
        header = f"{'Approach':<24}{'Macro':>8}{'Pos':>8}{'Neg':>8}{'FP':>8}{'Macro sd':>10}"
        rows = [f"task={self.task} subset={self.subset}", header, "-" * len(header)]
        for r in self.reports:
            rows.append(
                f"{r.label:<24}{r.macro_f1:>8.2f}{r.f1_pos:>8.2f}{r.f1_neg:>8.2f}"
                f"{r.fp_count:>8.1f}{r.macro_f1_std:>10.3f}"
            )
        return "\n".join(rows)

    def render_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["task", "subset", "approach", "source", "macro_f1", "f1_pos", "f1_neg",
             "fp_count", "macro_f1_std", "f1_pos_std", "f1_neg_std", "fp_count_std"]
        )
        for r in self.reports:
            writer.writerow(
                [r.task, r.subset, r.approach, r.source,
                 f"{r.macro_f1:.6f}", f"{r.f1_pos:.6f}", f"{r.f1_neg:.6f}", f"{r.fp_count:.6f}",
                 f"{r.macro_f1_std:.6f}", f"{r.f1_pos_std:.6f}", f"{r.f1_neg_std:.6f}", f"{r.fp_count_std:.6f}"]
            )
        return buf.getvalue()


def compare_pipelines(reports: Sequence[EvalReport]) -> ComparisonTable:
    """Assemble approach rows into one table; reports must share task and subset."""
    if not reports:
        raise EvaluationError("no reports to compare")
    tasks = {r.task for r in reports}
    subsets = {r.subset for r in reports}
    if len(tasks) > 1:
        raise EvaluationError(f"mixed tasks in comparison: {sorted(tasks)}")
    if len(subsets) > 1:
        raise EvaluationError(f"mixed subsets in comparison: {sorted(subsets)}")
    return ComparisonTable(task=tasks.pop(), subset=subsets.pop(), reports=tuple(reports))


def report_to_dict(report: EvalReport) -> dict:
    return {
        "task": report.task,
        "approach": report.approach,
        "source": report.source,
        "subset": report.subset,
        "runs": [
            {"run_id": r.run_id, "tp": r.counts.tp, "fp": r.counts.fp, "fn": r.counts.fn, "tn": r.counts.tn}
            for r in report.runs
        ],
    }


def report_from_dict(data: Mapping) -> EvalReport:
    runs = []
    for r in data["runs"]:
        counts = ConfusionCounts(tp=r["tp"], fp=r["fp"], fn=r["fn"], tn=r["tn"])
        f1_pos, f1_neg = f1_per_class(counts)
        runs.append(
            RunMetrics(
                run_id=r["run_id"],
                counts=counts,
                f1_pos=f1_pos,
                f1_neg=f1_neg,
                macro_f1=(f1_pos + f1_neg) / 2.0,
                flagged=zero_classes(counts),
            )
        )
    return aggregate_runs(runs, data["task"], data["approach"], data.get("source", "n/a"), data.get("subset", "whole"))
