"""Standard channels and joint distributions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidParameter
from .prob import Channel, JointDistribution, ProbVector, from_dict

ERASURE = "erasure"

CHANNEL_KINDS = ("identity", "bsc", "bec", "zchannel", "noisy", "random", "matrix")
JOINT_KINDS = ("equal", "product", "blocks", "custom")


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}


def _prob(p, name="p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidParameter(f"{name} must lie in [0, 1], got {p}")
    return p


def _count(n, name="n") -> int:
    if int(n) != n or int(n) < 1:
        raise InvalidParameter(f"{name} must be a positive integer, got {n}")
    return int(n)


def identity(n: int) -> Channel:
    n = _count(n)
    labels = [str(i) for i in range(n)]
    return Channel(labels, labels, np.eye(n))


def bsc(p: float) -> Channel:
    p = _prob(p)
    return Channel(["0", "1"], ["0", "1"], [[1 - p, p], [p, 1 - p]])


def bec(p: float) -> Channel:
    p = _prob(p)
    return Channel(["0", "1"], ["0", "1", ERASURE], [[1 - p, 0, p], [0, 1 - p, p]])


def zchannel(p: float) -> Channel:
    """Input 0 is received intact; input 1 flips to 0 with probability p."""
    p = _prob(p)
    return Channel(["0", "1"], ["0", "1"], [[1, 0], [p, 1 - p]])


def completely_noisy(nx: int, ny: int = 2) -> Channel:
    """Every input produces the same uniform output law."""
    nx, ny = _count(nx, "nx"), _count(ny, "ny")
    return Channel([str(i) for i in range(nx)], [str(i) for i in range(ny)], np.full((nx, ny), 1 / ny))


def random_channel(nx: int, ny: int, seed: int) -> Channel:
    """Rows drawn uniformly from the simplex with a seeded generator."""
    nx, ny = _count(nx, "nx"), _count(ny, "ny")
    rng = np.random.default_rng(int(seed))
    rows = rng.dirichlet(np.ones(ny), size=nx)
    rows /= rows.sum(axis=1, keepdims=True)
    return Channel([str(i) for i in range(nx)], [str(i) for i in range(ny)], rows)


def _load(path) -> dict:
    return json.loads(Path(path).read_text())


def make_channel(spec: ChannelSpec) -> Channel:
    k, p = spec.kind, spec.params
    if k == "identity":
        return identity(p["n"])
    if k == "bsc":
        return bsc(p["p"])
    if k == "bec":
        return bec(p["p"])
    if k == "zchannel":
        return zchannel(p["p"])
    if k == "noisy":
        return completely_noisy(p["nx"], p.get("ny", 2))
    if k == "random":
        return random_channel(p["nx"], p["ny"], p.get("seed", 0))
    if k == "matrix":
        doc = _load(p["file"])
        doc["row_stochastic"] = True
        return from_dict(doc)
    raise InvalidParameter(f"unknown channel kind {k!r}")


def equal(n: int) -> JointDistribution:
    """X = Y uniform on n symbols."""
    n = _count(n)
    labels = [str(i) for i in range(n)]
    return JointDistribution(labels, labels, np.eye(n) / n)


def product(p, q) -> JointDistribution:
    p = p if isinstance(p, ProbVector) else ProbVector.from_array(p)
    q = q if isinstance(q, ProbVector) else ProbVector.from_array(q)
    return JointDistribution(p.labels, q.labels, np.outer(p.mass, q.mass))


def blocks(masses, sizes) -> JointDistribution:
    """Disjoint full-support rectangles; block b has total mass masses[b] spread evenly."""
    masses = np.asarray(masses, dtype=float)
    if len(masses) != len(sizes):
        raise InvalidParameter("need one size per block mass")
    if masses.min() <= 0 or abs(masses.sum() - 1) > 1e-12:
        raise InvalidParameter("block masses must be positive and sum to 1")
    sizes = [(_count(r, "rows"), _count(c, "cols")) for r, c in sizes]
    nx = sum(r for r, _ in sizes)
    ny = sum(c for _, c in sizes)
    mat = np.zeros((nx, ny))
    i = k = 0
    for m, (r, c) in zip(masses, sizes):
        mat[i : i + r, k : k + c] = m / (r * c)
        i, k = i + r, k + c
    return JointDistribution([str(t) for t in range(nx)], [str(t) for t in range(ny)], mat)


def make_joint(kind: str, **params) -> JointDistribution:
    if kind == "equal":
        return equal(params["n"])
    if kind == "product":
        return product(params["p"], params["q"])
    if kind == "blocks":
        return blocks(params["masses"], params["sizes"])
    if kind == "custom":
        doc = _load(params["file"])
        doc.pop("row_stochastic", None)
        return from_dict(doc)
    raise InvalidParameter(f"unknown joint kind {kind!r}")
