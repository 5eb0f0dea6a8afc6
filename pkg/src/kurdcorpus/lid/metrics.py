"""Evaluation: confusion matrices and macro-averaged precision/recall/F1."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..core import Label, LabeledSentence
from ..errors import SchemeMismatch, UnparseableLabel
from .model import LidModel


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


@dataclass(frozen=True)
class EvalReport:
    labels: tuple[Label, ...]
    confusion: np.ndarray  # rows: reference label, columns: predicted label
    per_class: dict
    macro_precision: float
    macro_recall: float
    macro_f1: float
    absent: tuple[Label, ...]  # labels with no reference examples

    @property
    def total(self) -> int:
        return int(self.confusion.sum())

    @property
    def accuracy(self) -> float:
        return _ratio(int(np.trace(self.confusion)), self.total)

    def to_record(self) -> dict:
        return {
            "labels": [lab.serialize() for lab in self.labels],
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
            "per_class": {
                lab.serialize(): {
                    "precision": s.precision, "recall": s.recall, "f1": s.f1, "support": s.support,
                }
                for lab, s in self.per_class.items()
            },
            "absent": [lab.serialize() for lab in self.absent],
            "confusion": self.confusion.tolist(),
        }

    def to_text(self) -> str:
        width = max(8, max(len(lab.serialize()) for lab in self.labels) + 2)
        lines = [f"{'label':<{width}}{'P':>8}{'R':>8}{'F1':>8}{'n':>8}"]
        for lab in self.labels:
            s = self.per_class[lab]
            mark = "  (absent from reference)" if lab in self.absent else ""
            lines.append(f"{lab.serialize():<{width}}{s.precision:8.4f}{s.recall:8.4f}{s.f1:8.4f}{s.support:8d}{mark}")
        lines.append(f"{'macro':<{width}}{self.macro_precision:8.4f}{self.macro_recall:8.4f}{self.macro_f1:8.4f}{self.total:8d}")
        return "\n".join(lines) + "\n"

    def confusion_csv(self) -> str:
        """Reference labels as rows, predicted labels as columns."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        names = [lab.serialize() for lab in self.labels]
        writer.writerow(["reference\\predicted", *names])
        for name, row in zip(names, self.confusion):
            writer.writerow([name, *(int(v) for v in row)])
        return buf.getvalue()


def report_from_pairs(pairs: Iterable[tuple[Label, Label]], labels: Sequence[Label]) -> EvalReport:
    """Build a report over ``labels`` from (reference, predicted) pairs."""
    labels = tuple(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    confusion = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for ref, pred in pairs:
        confusion[index[ref], index[pred]] += 1
    per_class = {}
    for i, lab in enumerate(labels):
        tp = int(confusion[i, i])
        p = _ratio(tp, int(confusion[:, i].sum()))
        r = _ratio(tp, int(confusion[i, :].sum()))
        f1 = 2 * p * r / (p + r) if p + r else 0.0
        per_class[lab] = ClassScores(p, r, f1, int(confusion[i, :].sum()))
    k = len(labels)
    absent = tuple(lab for lab in labels if per_class[lab].support == 0)
    return EvalReport(
        labels=labels,
        confusion=confusion,
        per_class=per_class,
        macro_precision=sum(s.precision for s in per_class.values()) / k,
        macro_recall=sum(s.recall for s in per_class.values()) / k,
        macro_f1=sum(s.f1 for s in per_class.values()) / k,
        absent=absent,
    )


def evaluate(model: LidModel, testset: Sequence[LabeledSentence]) -> EvalReport:
    """Top-1 evaluation of ``model``; macro means run over the model's labels."""
    if not testset:
        raise ValueError("test set is empty")
    known = set(model.labels)
    for i, s in enumerate(testset):
        if not model.scheme.accepts(s.label):
            raise SchemeMismatch(f"test sentence {i} has label {s.label}, model scheme is {model.scheme}")
        if s.label not in known:
            raise SchemeMismatch(f"test sentence {i} has label {s.label}, unknown to the model")
    pairs = [(s.label, model.predict(s.text).label) for s in testset]
    return report_from_pairs(pairs, model.labels)


def evaluate_external(pairs: Iterable[tuple]) -> EvalReport:
    """Evaluate externally produced predictions.

    ``pairs`` holds ``(reference, predicted)`` as :class:`Label` objects or
    label strings.  The label set is the union of both columns, sorted.
    """
    parsed = []
    for row, (ref, pred) in enumerate(pairs):
        parsed.append((_parse(row, ref), _parse(row, pred)))
    if not parsed:
        raise ValueError("no prediction pairs")
    labels = sorted({lab for pair in parsed for lab in pair}, key=Label.sort_key)
    return report_from_pairs(parsed, labels)


def _parse(row: int, value) -> Label:
    if isinstance(value, Label):
        return value
    try:
        return Label.parse(value)
    except (ValueError, TypeError):
        raise UnparseableLabel(row, value) from None
