"""Finite distributions, joints and channels, plus Shannon baselines.

All values are immutable after construction and validated on the way in.
Entropies are in bits. Atoms with mass at or below ``ZERO_MASS`` count as
absent when computing supports.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateLabel,
    InvalidEpsilon,
    LabelMismatch,
    NegativeMass,
    NotNormalized,
    ValidationError,
    ZeroConditioningEvent,
)

NORM_TOL = 1e-12
ZERO_MASS = 1e-15

__all__ = [
    "NORM_TOL",
    "ZERO_MASS",
    "SubProbVector",
    "ProbVector",
    "JointDistribution",
    "Channel",
    "check_epsilon",
    "validate",
    "joint_from_channel",
    "marginal_x",
    "marginal_y",
    "conditional_x_given_y",
    "shannon_entropy",
    "binary_entropy",
    "mutual_information",
    "from_dict",
    "to_csv",
]


def _labels(seq: Iterable) -> tuple[str, ...]:
    return tuple(str(s) for s in seq)


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValidationError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _check_unique(labels: Sequence[str], what: str) -> None:
    seen = set()
    for lab in labels:
        if lab in seen:
            raise DuplicateLabel(f"duplicate {what} label {lab!r}")
        seen.add(lab)


def _check_nonnegative(arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValidationError("mass contains NaN or infinite entries")
    if arr.size and arr.min() < 0:
        idx = np.unravel_index(int(np.argmin(arr)), arr.shape)
        idx = idx[0] if len(idx) == 1 else tuple(int(i) for i in idx)
        raise NegativeMass(f"negative mass {arr[idx]!r} at index {idx}")


def check_epsilon(value, name: str = "eps") -> float:
    """Return ``value`` as a float after checking 0 <= value < 1."""
    v = float(value)
    if not (0.0 <= v < 1.0) or math.isnan(v):
        raise InvalidEpsilon(f"{name} must lie in [0, 1), got {value!r}")
    return v


@dataclass(frozen=True, eq=False)
class SubProbVector:
    """Non-negative mass on a labeled alphabet with total at most one."""

    labels: tuple[str, ...]
    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", _labels(self.labels))
        object.__setattr__(self, "mass", _frozen(self.mass, 1))
        validate(self)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def total(self) -> float:
        return float(self.mass.sum())

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise LabelMismatch(f"unknown label {label!r}") from None

    def prob(self, label) -> float:
        return float(self.mass[self.index(label)])

    def support(self) -> tuple[str, ...]:
        return tuple(l for l, m in zip(self.labels, self.mass) if m > ZERO_MASS)

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "mass": [float(m) for m in self.mass]}

    def __repr__(self) -> str:
        body = ", ".join(f"{l}: {m:.6g}" for l, m in zip(self.labels, self.mass))
        return f"{type(self).__name__}({{{body}}})"


class ProbVector(SubProbVector):
    """A normalized distribution on a labeled alphabet."""

    @classmethod
    def uniform(cls, labels) -> "ProbVector":
        labels = _labels(labels)
        return cls(labels, np.full(len(labels), 1.0 / len(labels)))

    @classmethod
    def point(cls, labels, at) -> "ProbVector":
        labels = _labels(labels)
        m = np.zeros(len(labels))
        m[labels.index(str(at))] = 1.0
        return cls(labels, m)

    @classmethod
    def from_array(cls, mass) -> "ProbVector":
        mass = np.asarray(mass, dtype=float)
        return cls(tuple(str(i) for i in range(len(mass))), mass)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint law of (X, Y); ``matrix[i, j]`` is P(x_i, y_j)."""

    x_labels: tuple[str, ...]
    y_labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x_labels", _labels(self.x_labels))
        object.__setattr__(self, "y_labels", _labels(self.y_labels))
        object.__setattr__(self, "matrix", _frozen(self.matrix, 2))
        validate(self)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @classmethod
    def from_array(cls, matrix) -> "JointDistribution":
        m = np.asarray(matrix, dtype=float)
        return cls(_labels(range(m.shape[0])), _labels(range(m.shape[1])), m)

    def support_atoms(self) -> list[tuple[int, int]]:
        """Index pairs (i, j) with positive mass, in row-major order."""
        ii, jj = np.nonzero(self.matrix > ZERO_MASS)
        return list(zip(ii.tolist(), jj.tolist()))

    def flatten(self) -> ProbVector:
        """The law of the pair XY as a distribution over "x,y" labels."""
        labels = [f"{x},{y}" for x in self.x_labels for y in self.y_labels]
        return ProbVector(labels, self.matrix.ravel())

    def transpose(self) -> "JointDistribution":
        return JointDistribution(self.y_labels, self.x_labels, self.matrix.T)

    def to_dict(self) -> dict:
        return {
            "x_labels": list(self.x_labels),
            "y_labels": list(self.y_labels),
            "matrix": self.matrix.tolist(),
        }


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic transition matrix; ``matrix[i, j]`` is W(y_j | x_i)."""

    x_labels: tuple[str, ...]
    y_labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x_labels", _labels(self.x_labels))
        object.__setattr__(self, "y_labels", _labels(self.y_labels))
        object.__setattr__(self, "matrix", _frozen(self.matrix, 2))
        validate(self)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def x_index(self, label) -> int:
        try:
            return self.x_labels.index(str(label))
        except ValueError:
            raise LabelMismatch(f"unknown input symbol {label!r}") from None

    def to_dict(self) -> dict:
        return {
            "x_labels": list(self.x_labels),
            "y_labels": list(self.y_labels),
            "matrix": self.matrix.tolist(),
            "row_stochastic": True,
        }


def validate(p) -> None:
    """Raise a ValidationError subclass unless ``p`` satisfies its invariants."""
    if isinstance(p, SubProbVector):
        _check_unique(p.labels, "symbol")
        if len(p.labels) != p.mass.shape[0]:
            raise ValidationError(
                f"{len(p.labels)} labels but {p.mass.shape[0]} mass entries"
            )
        _check_nonnegative(p.mass)
        total = float(p.mass.sum())
        if isinstance(p, ProbVector):
            if abs(total - 1.0) > NORM_TOL:
                raise NotNormalized(f"mass sums to {total!r} (deviation {total - 1.0:+.3e})")
        elif total > 1.0 + NORM_TOL:
            raise NotNormalized(f"sub-normalized mass sums to {total!r} > 1")
        return
    if isinstance(p, (JointDistribution, Channel)):
        _check_unique(p.x_labels, "x")
        _check_unique(p.y_labels, "y")
        if p.matrix.shape != (len(p.x_labels), len(p.y_labels)):
            raise ValidationError(
                f"matrix shape {p.matrix.shape} does not match labels "
                f"({len(p.x_labels)}, {len(p.y_labels)})"
            )
        _check_nonnegative(p.matrix)
        if isinstance(p, JointDistribution):
            total = float(p.matrix.sum())
            if abs(total - 1.0) > NORM_TOL:
                raise NotNormalized(f"joint sums to {total!r} (deviation {total - 1.0:+.3e})")
        else:
            rows = p.matrix.sum(axis=1)
            dev = np.abs(rows - 1.0)
            if dev.size and dev.max() > NORM_TOL:
                i = int(np.argmax(dev))
                raise NotNormalized(
                    f"channel row {p.x_labels[i]!r} sums to {rows[i]!r} "
                    f"(deviation {rows[i] - 1.0:+.3e})"
                )
        return
    raise TypeError(f"cannot validate object of type {type(p).__name__}")


def joint_from_channel(p_x: ProbVector, w: Channel) -> JointDistribution:
    if tuple(p_x.labels) != tuple(w.x_labels):
        raise LabelMismatch("input law labels do not match channel inputs")
    return JointDistribution(w.x_labels, w.y_labels, p_x.mass[:, None] * w.matrix)


def marginal_x(j: JointDistribution) -> ProbVector:
    return ProbVector(j.x_labels, j.matrix.sum(axis=1))


def marginal_y(j: JointDistribution) -> ProbVector:
    return ProbVector(j.y_labels, j.matrix.sum(axis=0))


def conditional_x_given_y(j: JointDistribution, y) -> ProbVector:
    try:
        col = j.y_labels.index(str(y))
    except ValueError:
        raise LabelMismatch(f"unknown y symbol {y!r}") from None
    column = j.matrix[:, col]
    py = float(column.sum())
    if py <= ZERO_MASS:
        raise ZeroConditioningEvent(f"P(Y={y}) = 0")
    return ProbVector(j.x_labels, column / py)


def _entropy_bits(mass: np.ndarray) -> float:
    m = mass[mass > 0]
    return float(-(m * np.log2(m)).sum()) + 0.0


def shannon_entropy(p: SubProbVector) -> float:
    return _entropy_bits(p.mass)


def binary_entropy(q: float) -> float:
    """h2(q) in bits."""
    return _entropy_bits(np.array([q, 1.0 - q]))


def mutual_information(j: JointDistribution) -> float:
    hx = _entropy_bits(j.matrix.sum(axis=1))
    hy = _entropy_bits(j.matrix.sum(axis=0))
    hxy = _entropy_bits(j.matrix.ravel())
    return max(hx + hy - hxy, 0.0)


def from_dict(doc: dict):
    """Rebuild a ProbVector, JointDistribution or Channel from its JSON form."""
    if "mass" in doc:
        return ProbVector(doc["labels"], doc["mass"])
    if "matrix" in doc:
        cls = Channel if doc.get("row_stochastic") else JointDistribution
        return cls(doc["x_labels"], doc["y_labels"], doc["matrix"])
    raise ValidationError("document has neither 'mass' nor 'matrix'")


def to_csv(obj) -> str:
    """CSV text with a header row (and, for matrices, a header column) of labels."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(obj, SubProbVector):
        writer.writerow(obj.labels)
        writer.writerow([repr(float(m)) for m in obj.mass])
    else:
        writer.writerow([""] + list(obj.y_labels))
        for lab, row in zip(obj.x_labels, obj.matrix):
            writer.writerow([lab] + [repr(float(v)) for v in row])
    return buf.getvalue()
