"""Standard and pairwise evaluation metrics."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EmptyInput, IdMismatch


@dataclass
class MetricsReport:
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    p_c: float = 0.0
    p_r: float = 0.0
    vp_s: float = 0.0

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "p_c": self.p_c,
            "p_r": self.p_r,
            "vp_s": self.vp_s,
        }


def compute_metrics(
    preds: list[tuple[str, bool]],
    labels: list[tuple[str, bool]],
    warnings: list[str] | None = None,
) -> tuple[float, float, float]:
    """Precision, recall, F1 over aligned (id, flag) lists; a zero
    denominator yields 0 with a warning."""
    pred_map = dict(preds)
    label_map = dict(labels)
    if set(pred_map) != set(label_map):
        missing = set(label_map) ^ set(pred_map)
        raise IdMismatch(f"prediction/label ids differ: {sorted(missing)[:5]}")
    tp = fp = fn = 0
    for sample_id, truth in label_map.items():
        guess = pred_map[sample_id]
        if guess and truth:
            tp += 1
        elif guess and not truth:
            fp += 1
        elif not guess and truth:
            fn += 1
    precision = tp / (tp + fp) if (tp + fp) else _warned(warnings, "precision: no positive predictions")
    recall = tp / (tp + fn) if (tp + fn) else _warned(warnings, "recall: no positive labels")
    f1 = (
        2 * precision * recall / (precision + recall)
        if (precision + recall)
        else _warned(warnings, "f1: degenerate precision/recall")
    )
    return precision, recall, f1


def _warned(warnings: list[str] | None, message: str) -> float:
    if warnings is not None:
        warnings.append(message)
    return 0.0


def compute_pairwise(pairs: list[tuple[int, int]]) -> tuple[float, float, float]:
    """P-C = fraction of (1,0) pairs, P-R = fraction of (0,1) pairs,
    VP-S = P-C - P-R."""
    if not pairs:
        raise EmptyInput("pairwise metrics need at least one pair")
    n = len(pairs)
    p_c = sum(1 for (yv, yp) in pairs if (yv, yp) == (1, 0)) / n
    p_r = sum(1 for (yv, yp) in pairs if (yv, yp) == (0, 1)) / n
    return p_c, p_r, p_c - p_r


def full_report(
    preds: list[tuple[str, bool]],
    labels: list[tuple[str, bool]],
    pairs: list[tuple[int, int]],
    warnings: list[str] | None = None,
) -> MetricsReport:
    precision, recall, f1 = compute_metrics(preds, labels, warnings)
    p_c, p_r, vp_s = compute_pairwise(pairs)
    return MetricsReport(precision, recall, f1, p_c, p_r, vp_s)
