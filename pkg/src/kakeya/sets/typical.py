"""Typical-set graphs realising the entropy/sumset dictionary.

For a law of (X, Y) on Z^2 and block length n, the graph G collects every
n-tuple of atoms whose empirical log-probabilities under the joint law, the
Y-marginal and the conditional law X|Y all lie within n*eps of n times the
matching entropy.  A point of G is the pair (x-vector, y-vector) in Z^n x Z^n;
optionally both vectors are flattened to integers in radix ``baseM``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..entropy import JointDist, cond_entropy, entropy, marginal, pushforward_linear
from .graph import INF, PointSet, fibers, project

__all__ = [
    "ENUM_GUARD",
    "TypicalSetError",
    "TypicalSetParams",
    "typical_set_build",
    "min_radix",
    "flatten",
    "typicality_report",
]

ENUM_GUARD = 10**7


class TypicalSetError(ValueError):
    pass


@dataclass(frozen=True)
class TypicalSetParams:
    n: int
    eps: float = 0.1
    baseM: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise TypicalSetError("block length n must be >= 1")
        if not self.eps > 0:
            raise TypicalSetError("eps must be positive")
        if self.baseM < 0:
            raise TypicalSetError("baseM must be >= 0")


def _int_support(D: JointDist) -> list[tuple[int, int]]:
    if D.dim != 2:
        raise TypicalSetError("typical sets are built from a law of (X, Y)")
    keys = []
    for k in D:
        if any(v.denominator != 1 for v in k):
            raise TypicalSetError(f"atom {k} is not integral; clear denominators first")
        keys.append((k[0].numerator, k[1].numerator))
    return keys


def min_radix(n: int, k: int, max_abs: int) -> int:
    """Smallest radix accepted for flattening: n (2k + 1) (1 + max|v|) + 1."""
    return n * (2 * k + 1) * (1 + max_abs) + 1


def flatten(vec, base: int) -> int:
    return sum(v * base**i for i, v in enumerate(vec))


def _neg_log2(q: Fraction) -> float:
    return math.log2(q.denominator) - math.log2(q.numerator)


def typical_set_build(D: JointDist, P: TypicalSetParams, k: int = 1) -> PointSet:
    """Typical-set graph of ``D``; ``k`` bounds |r| for the radix check."""
    atoms = sorted(D.items())
    _int_support(D)
    keys = [(kk[0].numerator, kk[1].numerator) for kk, _ in atoms]
    s, n = len(atoms), P.n
    if s**n > ENUM_GUARD:
        raise TypicalSetError(f"|supp|^n = {s}^{n} exceeds the enumeration guard {ENUM_GUARD}")
    py = marginal(D, [1])
    hxy, hy = entropy(D), entropy(py)
    hx_y = cond_entropy(D, [0], [1])
    joint = np.array([_neg_log2(p) for _, p in atoms])
    ylog = np.array([_neg_log2(py[(kk[1],)]) for kk, _ in atoms])
    clog = np.array([_neg_log2(p / py[(kk[1],)]) for kk, p in atoms])

    def block_sum(v):
        acc = np.zeros(1)
        for _ in range(n):
            acc = np.add.outer(acc, v).ravel()
        return acc

    tol = n * P.eps
    keep = (
        (np.abs(block_sum(joint) - n * hxy) <= tol)
        & (np.abs(block_sum(ylog) - n * hy) <= tol)
        & (np.abs(block_sum(clog) - n * hx_y) <= tol)
    )
    chosen = np.flatnonzero(keep)
    digits = np.unravel_index(chosen, (s,) * n)
    xs = np.array([kk[0] for kk in keys])
    ys = np.array([kk[1] for kk in keys])
    xv = xs[np.stack(digits, axis=1)] if chosen.size else np.zeros((0, n), dtype=int)
    yv = ys[np.stack(digits, axis=1)] if chosen.size else np.zeros((0, n), dtype=int)
    if P.baseM:
        max_abs = max(max(abs(a), abs(b)) for a, b in keys)
        need = min_radix(n, k, max_abs)
        if P.baseM < need:
            raise TypicalSetError(f"baseM = {P.baseM} may carry; need at least {need}")
        pts = [(flatten(a.tolist(), P.baseM), flatten(b.tolist(), P.baseM)) for a, b in zip(xv, yv)]
    else:
        pts = [(tuple(a.tolist()), tuple(b.tolist())) for a, b in zip(xv, yv)]
    return PointSet(pts)


def typicality_report(G: PointSet, D: JointDist, P: TypicalSetParams, R) -> dict:
    """Compare log2 cardinalities of G with n times the matching entropies."""
    n = P.n
    fib = fibers(G)
    sizes = [len(v) for v in fib.values()] or [0]
    rows = []
    for r in R:
        r = r[0] if isinstance(r, tuple) else r
        h = entropy(pushforward_linear(D, (1, r)))
        rows.append({"r": str(r), "log2_size": math.log2(max(1, len(project(G, r)))), "n_entropy": n * h})
    return {
        "size": len(G),
        "log2_size": math.log2(max(1, len(G))),
        "n_H_joint": n * entropy(D),
        "log2_vertical": math.log2(max(1, len(fib))),
        "n_H_Y": n * entropy(marginal(D, [1])),
        "fiber_min": min(sizes),
        "fiber_max": max(sizes),
        "n_H_X_given_Y": n * cond_entropy(D, [0], [1]),
        "projections": rows,
    }
